use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::Zero;

use crate::arith::{Monomial, Poly, Rat, VarId, VarSet};

use super::bundle::Bundle;
use super::ChowError;

/// A rewrite rule: occurrences of `lead` are replaced by `rhs`.
/// All rules are homogeneous, so normalization preserves the grading.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Rule {
    pub lead: Monomial,
    pub rhs: Poly,
}

/// Extra normalization data for blowup presentations: monomials carrying a
/// positive power of the exceptional class `d` have their base cofactor
/// projected through restrict-then-lift (classes pulled back from the base
/// only matter on the center once multiplied by `d`), and `d^codim` is
/// rewritten by the Grothendieck-type relation.
///
/// The projection must normalize inside the center's ring between the two
/// substitutions, so the center presentation is carried here.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BlowupNorm {
    pub d: VarId,
    pub codim: u32,
    /// rewrite of `d^codim`; every term has `d`-exponent `< codim`
    pub dc_rhs: Poly,
    pub center: Variety,
    /// images of the total-space generators in the center's ring
    pub restrict_images: Vec<Poly>,
    /// images of the center's generators over the total table
    pub lift_images: Vec<Poly>,
}

#[derive(Debug, PartialEq)]
pub(crate) struct VarietyData {
    pub name: String,
    pub vars: VarSet,
    pub dim: i64,
    pub rules: Vec<Rule>,
    pub point: Monomial,
    pub blow: Option<BlowupNorm>,
}

/// A model variety: a presented graded ring with a normal-form procedure,
/// a dimension and an integration functional.
///
/// Cheap to clone; equality is structural on the presentation.
#[derive(Clone)]
pub struct Variety(pub(crate) Arc<VarietyData>);

impl PartialEq for Variety {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Variety {}

impl fmt::Debug for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Variety({}, dim {})", self.0.name, self.0.dim)
    }
}

impl Variety {
    /// Projective space `P^n` with hyperplane generator `H`.
    pub fn proj_space(n: i64) -> Result<Variety, ChowError> {
        if n < 0 {
            return Err(ChowError::Domain(format!(
                "projective space needs n >= 0, got {n}"
            )));
        }
        let vars = VarSet::new(&[("H", 1)]);
        let h = vars.id("H").unwrap();
        let rules = vec![Rule {
            lead: Monomial::var(&vars, h, n as u32 + 1),
            rhs: Poly::zero(&vars),
        }];
        let point = Monomial::var(&vars, h, n as u32);
        Ok(Variety(Arc::new(VarietyData {
            name: format!("P{n}"),
            vars,
            dim: n,
            rules,
            point,
            blow: None,
        })))
    }

    /// The point, presented as `P^0`.
    pub fn point() -> Variety {
        Variety::proj_space(0).expect("n = 0")
    }

    /// Projective bundle `P(E)` over the base of `e`, with fiber generator
    /// `h_name` of degree 1 subject to the Grothendieck relation
    /// `sum_i c_i(E) h^{r-i} = 0`.
    pub fn proj_bundle(e: &Bundle, h_name: &str) -> Result<Variety, ChowError> {
        let base = e.base();
        if base.0.blow.is_some() {
            return Err(ChowError::Domain(
                "projective bundles over blowups are not supported".into(),
            ));
        }
        let r = e.rank() as i64;
        if r < 1 {
            return Err(ChowError::Domain("projective bundle of a rank-0 bundle".into()));
        }
        if base.0.vars.id(h_name).is_some() {
            return Err(ChowError::Domain(format!(
                "generator name {h_name} already used on {}",
                base.0.name
            )));
        }
        let vars = base.0.vars.extend(&[(h_name, 1)]);
        let h = vars.id(h_name).unwrap();
        let mut rules: Vec<Rule> = base
            .0
            .rules
            .iter()
            .map(|rule| Rule {
                lead: rule.lead.clone(),
                rhs: reindex(&rule.rhs, &vars),
            })
            .collect();
        let mut gr = Poly::zero(&vars);
        for i in 1..=r {
            let ci = reindex(e.chern(i).poly(), &vars);
            let term = &ci * &Poly::var(&vars, h).pow((r - i) as u32);
            gr = &gr - &term;
        }
        rules.push(Rule {
            lead: Monomial::var(&vars, h, r as u32),
            rhs: gr,
        });
        let point = base.0.point.mul(&Monomial::var(&vars, h, r as u32 - 1));
        Ok(Variety(Arc::new(VarietyData {
            name: format!("P({} over {})", e.describe(), base.0.name),
            vars,
            dim: base.0.dim + r - 1,
            rules,
            point,
            blow: None,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn vars(&self) -> &VarSet {
        &self.0.vars
    }

    pub fn dim(&self) -> i64 {
        self.0.dim
    }

    /// The canonical point monomial (integration extracts its coefficient).
    pub fn point_monomial(&self) -> &Monomial {
        &self.0.point
    }

    pub(crate) fn with_data(data: VarietyData) -> Variety {
        Variety(Arc::new(data))
    }

    pub(crate) fn rules_cloned(&self) -> Vec<Rule> {
        self.0.rules.clone()
    }

    /// Normalize a polynomial over this variety's table.
    pub fn normalize(&self, p: &Poly) -> Poly {
        assert_eq!(p.vars(), &self.0.vars, "polynomial over a foreign table");
        match &self.0.blow {
            None => self.normalize_plain(p),
            Some(bn) => self.normalize_blowup(p, bn),
        }
    }

    fn normalize_plain(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero(&self.0.vars).with_cap(Some(self.0.dim));
        let mut work: Vec<(Monomial, Rat)> =
            p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = work.pop() {
            if c.is_zero() || m.degree() > self.0.dim {
                continue;
            }
            if let Some(rule) = self.0.rules.iter().find(|r| r.lead.divides(&m)) {
                let q = m.try_div(&rule.lead).expect("divides");
                for (m2, c2) in rule.rhs.terms() {
                    work.push((q.mul(m2), &c * c2));
                }
                continue;
            }
            out.add_term(m, c);
        }
        out
    }

    fn normalize_blowup(&self, p: &Poly, bn: &BlowupNorm) -> Poly {
        // Process whole cofactors per d-power so the restrict-lift projection
        // is applied linearly (it is idempotent on polynomials, not on
        // individual monomials).
        let mut out = Poly::zero(&self.0.vars).with_cap(Some(self.0.dim));
        let mut work: BTreeMap<u32, Poly> = p.truncate(self.0.dim).split_by_var(bn.d);
        while let Some((&a, _)) = work.iter().next_back() {
            let q = work.remove(&a).unwrap();
            if a == 0 {
                out = &out + &self.normalize_plain(&q);
                continue;
            }
            let q = self.project(&self.normalize_plain(&q), bn);
            if q.is_zero() {
                continue;
            }
            if a >= bn.codim {
                // d^a = d^{a-codim} * dc_rhs; re-enter by d-power
                for (b, r) in bn.dc_rhs.split_by_var(bn.d) {
                    let merged = (&r * &q).truncate(self.0.dim - (a - bn.codim + b) as i64);
                    let slot = work
                        .entry(a - bn.codim + b)
                        .or_insert_with(|| Poly::zero(&self.0.vars));
                    *slot = &*slot + &merged;
                }
                continue;
            }
            let d_pow = Poly::term(
                &self.0.vars,
                Monomial::var(&self.0.vars, bn.d, a),
                Rat::from_integer(1.into()),
            );
            out = &out + &(&d_pow * &q).truncate(self.0.dim);
        }
        out
    }

    /// lift(restrict(q)) for a base polynomial on a blowup total space,
    /// normalizing in the center's ring in between.
    fn project(&self, q: &Poly, bn: &BlowupNorm) -> Poly {
        let down = q.substitute(
            bn.center.vars(),
            &bn.restrict_images,
            Some(bn.center.dim()),
        );
        let down = bn.center.normalize(&down);
        let up = down.substitute(&self.0.vars, &bn.lift_images, Some(self.0.dim));
        self.normalize_plain(&up)
    }

    /// Normalize a polynomial over a table that extends this variety's
    /// (extra degree-0 parameter variables ride along untouched). Not
    /// supported for blowup presentations.
    pub fn normalize_extended(&self, p: &Poly) -> Result<Poly, ChowError> {
        if p.vars() == &self.0.vars {
            return Ok(self.normalize(p));
        }
        let compatible = self
            .0
            .vars
            .entries()
            .zip(p.vars().entries())
            .all(|(a, b)| a == b)
            && p.vars().len() >= self.0.vars.len();
        if !compatible {
            return Err(ChowError::Domain(
                "polynomial table does not extend the variety's".into(),
            ));
        }
        if self.0.blow.is_some() {
            return Err(ChowError::Domain(
                "extended normalization is not supported on blowups".into(),
            ));
        }
        let mut out = Poly::zero(p.vars()).with_cap(Some(self.0.dim));
        let mut work: Vec<(Monomial, Rat)> =
            p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = work.pop() {
            if c.is_zero() || m.degree() > self.0.dim {
                continue;
            }
            if let Some(rule) = self.0.rules.iter().find(|r| r.lead.divides(&m)) {
                let q = m.try_div(&rule.lead).expect("divides");
                for (m2, c2) in rule.rhs.terms() {
                    // rule monomials only involve geometry variables, so
                    // re-keying them in the extended table is sound
                    let m2e = Monomial::from_pairs(p.vars(), m2.iter().collect());
                    work.push((q.mul(&m2e), &c * c2));
                }
                continue;
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    /// A class from a raw polynomial (normalized on construction).
    pub fn class(&self, p: Poly) -> Class {
        Class {
            variety: self.clone(),
            poly: self.normalize(&p),
        }
    }

    pub fn zero(&self) -> Class {
        self.class(Poly::zero(&self.0.vars))
    }

    pub fn one(&self) -> Class {
        self.class(Poly::one(&self.0.vars))
    }

    pub fn constant(&self, c: Rat) -> Class {
        self.class(Poly::constant(&self.0.vars, c))
    }

    /// The generator with the given name, as a class.
    pub fn generator(&self, name: &str) -> Option<Class> {
        Poly::var_named(&self.0.vars, name).map(|p| self.class(p))
    }

    /// Coefficient of the canonical point monomial in the normal form.
    pub fn integrate(&self, c: &Class) -> Rat {
        assert_eq!(&c.variety, self, "class on a different variety");
        c.poly.coeff(&self.0.point)
    }

    /// All normal-form monomials of total degree <= dim, for self-tests.
    pub(crate) fn monomial_basis(&self) -> Vec<Monomial> {
        let vars = &self.0.vars;
        let mut out = vec![Monomial::one()];
        for v in vars.ids() {
            let mut next = Vec::new();
            for m in &out {
                let mut e = 0u32;
                loop {
                    let cand = m.mul(&Monomial::var(vars, v, e));
                    if cand.degree() > self.0.dim {
                        break;
                    }
                    next.push(cand);
                    e += 1;
                    if e > self.0.dim as u32 + 1 {
                        break;
                    }
                }
            }
            out = next;
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Re-wrap a polynomial over a table that extends its own (same leading
/// variables, same degrees). The source cap is dropped: the target ring
/// may admit higher degrees, and its own normalization re-caps.
pub(crate) fn reindex(p: &Poly, target: &VarSet) -> Poly {
    debug_assert!(
        p.vars()
            .entries()
            .zip(target.entries())
            .all(|(a, b)| a == b),
        "target table must extend the source table"
    );
    Poly::from_terms(target, p.terms().map(|(m, c)| (m.clone(), c.clone())))
}

/// Drop a polynomial to a prefix table; fails if it uses trailing variables.
pub(crate) fn deindex(p: &Poly, target: &VarSet) -> Option<Poly> {
    let n = target.len() as u32;
    for (m, _) in p.terms() {
        if m.iter().any(|(v, _)| v.0 >= n) {
            return None;
        }
    }
    Some(Poly::from_terms(target, p.terms().map(|(m, c)| (m.clone(), c.clone()))))
}

/// An element of a model Chow ring, kept in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct Class {
    pub(crate) variety: Variety,
    pub(crate) poly: Poly,
}

impl Class {
    pub fn variety(&self) -> &Variety {
        &self.variety
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Housed degree: the common degree when homogeneous.
    pub fn degree(&self) -> Option<i64> {
        self.poly.degree()
    }

    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.poly.is_homogeneous_of(d)
    }

    pub fn component(&self, d: i64) -> Class {
        Class {
            variety: self.variety.clone(),
            poly: self.poly.component(d),
        }
    }

    pub fn checked_add(&self, rhs: &Class) -> Result<Class, ChowError> {
        self.compat(rhs)?;
        Ok(self.variety.class(&self.poly + &rhs.poly))
    }

    pub fn checked_mul(&self, rhs: &Class) -> Result<Class, ChowError> {
        self.compat(rhs)?;
        Ok(self.variety.class(&self.poly * &rhs.poly))
    }

    pub fn scale(&self, c: &Rat) -> Class {
        Class {
            variety: self.variety.clone(),
            poly: self.poly.scale(c),
        }
    }

    pub fn pow(&self, e: u32) -> Class {
        self.variety.class(self.poly.pow(e))
    }

    pub fn integrate(&self) -> Rat {
        self.variety.integrate(self)
    }

    fn compat(&self, rhs: &Class) -> Result<(), ChowError> {
        if self.variety != rhs.variety {
            return Err(ChowError::VarietyMismatch(
                self.variety.0.name.clone(),
                rhs.variety.0.name.clone(),
            ));
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        self.poly.render()
    }
}

impl fmt::Debug for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.poly.render(), self.variety.0.name)
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.render())
    }
}

impl std::ops::Add for &Class {
    type Output = Class;
    fn add(self, rhs: &Class) -> Class {
        self.checked_add(rhs).expect("variety mismatch")
    }
}

impl std::ops::Sub for &Class {
    type Output = Class;
    fn sub(self, rhs: &Class) -> Class {
        self.checked_add(&rhs.scale(&-Rat::from_integer(1.into())))
            .expect("variety mismatch")
    }
}

impl std::ops::Mul for &Class {
    type Output = Class;
    fn mul(self, rhs: &Class) -> Class {
        self.checked_mul(rhs).expect("variety mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn proj_space_normalization() {
        let p2 = Variety::proj_space(2).unwrap();
        let h = p2.generator("H").unwrap();
        assert!(h.pow(3).is_zero());
        assert_eq!(h.pow(2).integrate(), rat(1));
        assert_eq!(p2.one().integrate(), rat(0));
    }

    #[test]
    fn point_normalization() {
        let pt = Variety::proj_space(0).unwrap();
        assert_eq!(pt.one().integrate(), rat(1));
        let h = pt.generator("H").unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn degree_selection_on_p4() {
        let p4 = Variety::proj_space(4).unwrap();
        let h = p4.generator("H").unwrap();
        assert_eq!(h.pow(4).integrate(), rat(1));
        assert_eq!(h.pow(3).integrate(), rat(0));
        assert_eq!(h.pow(4).scale(&rat(4)).integrate(), rat(4));
    }

    #[test]
    fn proj_space_rejects_negative() {
        assert!(Variety::proj_space(-1).is_err());
    }
}
