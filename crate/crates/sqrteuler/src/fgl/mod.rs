//! Formal group laws and the `√h` twist series.
//!
//! An oriented Borel-Moore theory determines a formal group law
//! `F(u,v) = u + v + Σ a_ij u^i v^j` over its coefficient ring, an
//! inverse series `χ(u)` with `F(u, χ(u)) = 0`, and the series
//! `g(u) = χ(u)/u` governing duals: `c_1(L∨) = g(c_1(L)) c_1(L)`. The
//! product `(-1)^n Π g(u_i)` is symmetric, hence a series
//! `h(s_1..s_n)` in the elementary symmetric polynomials with
//! `h(0) = 1`, and `√h` is its unique square root with constant term 1.
//! Substituting Chern classes gives the twist `√h(V)` on any split
//! bundle: trivial for the additive law (Chow), `[√det V]` for the
//! multiplicative law (K-theory).
//!
//! Coefficient parameters (like the Bott class `β` of the multiplicative
//! law) are degree-0 variables; truncation is by the geometric degree.

use std::collections::BTreeMap;
use std::fmt;

use num::One;

use serde::Serialize;

use crate::arith::{
    series_inverse, series_sqrt, to_elementary_symmetric, ArithError, Monomial, Poly, Rat, VarId,
    VarSet,
};
use crate::chow::{reindex, Bundle, ChowError, Variety};

/// Errors from the formal-group-law layer.
#[derive(Debug, thiserror::Error)]
pub enum FglError {
    #[error("invalid formal group law: {0}")]
    Invalid(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Chow(#[from] ChowError),
}

/// A formal group law `F(u,v) = u + v + Σ_{i,j>=1} a_ij u^i v^j`
/// truncated above `cap`, with coefficients in `Q[params]`.
///
/// Construction verifies `F(u,0) = u` (by shape), commutativity and
/// associativity up to the cap.
#[derive(Debug, Clone)]
pub struct FormalGroupLaw {
    name: String,
    params: VarSet,
    /// `a_ij` for `i, j >= 1`, as polynomials over the parameter table
    coeffs: BTreeMap<(u32, u32), Poly>,
    cap: i64,
}

impl FormalGroupLaw {
    /// The additive law `u + v` (the Chow specialization).
    pub fn additive(cap: i64) -> FormalGroupLaw {
        FormalGroupLaw {
            name: "additive".into(),
            params: VarSet::empty(),
            coeffs: BTreeMap::new(),
            cap,
        }
    }

    /// The multiplicative law `u + v - β·uv` (the K-theory
    /// specialization, with `β` the inverse Bott parameter).
    pub fn multiplicative(cap: i64) -> FormalGroupLaw {
        let params = VarSet::new(&[("beta", 0)]);
        let beta = Poly::var_named(&params, "beta").unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert((1, 1), beta.scale(&-Rat::one()));
        FormalGroupLaw {
            name: "multiplicative".into(),
            params,
            coeffs,
            cap,
        }
    }

    /// A custom law from an explicit coefficient table over the given
    /// parameters; checked for commutativity and associativity to the cap.
    pub fn custom(
        name: &str,
        params: &[&str],
        coeffs: Vec<((u32, u32), Poly)>,
        cap: i64,
    ) -> Result<FormalGroupLaw, FglError> {
        let params_table = VarSet::new(
            &params
                .iter()
                .map(|p| (*p, 0i64))
                .collect::<Vec<(&str, i64)>>(),
        );
        let mut table = BTreeMap::new();
        for ((i, j), a) in coeffs {
            if i < 1 || j < 1 {
                return Err(FglError::Invalid(
                    "coefficients a_ij require i, j >= 1 (so F(u,0) = u)".into(),
                ));
            }
            if a.vars() != &params_table {
                return Err(FglError::Invalid(
                    "coefficient polynomial over a different parameter table".into(),
                ));
            }
            table.insert((i, j), a);
        }
        let law = FormalGroupLaw {
            name: name.into(),
            params: params_table,
            coeffs: table,
            cap,
        };
        law.validate()?;
        Ok(law)
    }

    fn validate(&self) -> Result<(), FglError> {
        // commutativity: a_ij = a_ji
        for (&(i, j), a) in &self.coeffs {
            let sym = self
                .coeffs
                .get(&(j, i))
                .cloned()
                .unwrap_or_else(|| Poly::zero(&self.params));
            if *a != sym {
                return Err(FglError::Invalid(format!(
                    "not commutative: a_{i}{j} ≠ a_{j}{i}"
                )));
            }
        }
        // associativity on params + u,v,w up to the cap
        let table = self.params.extend(&[("u", 1), ("v", 1), ("w", 1)]);
        let u = Poly::var_named(&table, "u").unwrap();
        let v = Poly::var_named(&table, "v").unwrap();
        let w = Poly::var_named(&table, "w").unwrap();
        let uv = self.eval(&u, &v);
        let vw = self.eval(&v, &w);
        let lhs = self.eval(&uv, &w);
        let rhs = self.eval(&u, &vw);
        if lhs != rhs {
            return Err(FglError::Invalid("not associative up to the cap".into()));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn params(&self) -> &VarSet {
        &self.params
    }

    /// Evaluate `F(x, y)` for polynomials over a table extending the
    /// parameter table, truncating at the law's cap.
    pub fn eval(&self, x: &Poly, y: &Poly) -> Poly {
        self.eval_to(x, y, self.cap)
    }

    fn eval_to(&self, x: &Poly, y: &Poly, cap: i64) -> Poly {
        assert_eq!(x.vars(), y.vars(), "operands over different tables");
        let table = x.vars().clone();
        let mut out = (x + y).truncate(cap);
        for (&(i, j), a) in &self.coeffs {
            let coeff = reindex(a, &table);
            let term = coeff
                .checked_mul(&x.pow(i), Some(cap))
                .expect("same table")
                .checked_mul(&y.pow(j), Some(cap))
                .expect("same table");
            out = &out + &term;
        }
        out.truncate(cap)
    }

    /// The inverse series `χ(u) = -u + ...` with `F(u, χ(u)) = 0` modulo
    /// degree `> cap`, over the table `params + u`.
    pub fn inverse(&self) -> Poly {
        self.inverse_to(self.cap)
    }

    fn inverse_to(&self, cap: i64) -> Poly {
        let table = self.params.extend(&[("u", 1)]);
        let u = Poly::var_named(&table, "u").unwrap();
        let mut chi = u.scale(&-Rat::one());
        for d in 2..=cap {
            let residual = self.eval_to(&u, &chi, cap).component(d);
            chi = &chi - &residual;
        }
        chi
    }

    /// `g(u) = χ(u)/u` to degree `cap`, with `g(0) = -1` (the inverse
    /// series is taken one degree past the cap so the quotient is full).
    pub fn g_series(&self) -> Poly {
        let chi = self.inverse_to(self.cap + 1);
        let table = chi.vars().clone();
        let u = table.id("u").unwrap();
        let u_mono = Monomial::var(&table, u, 1);
        Poly::from_terms(
            &table,
            chi.terms().map(|(m, c)| {
                (
                    m.try_div(&u_mono).expect("χ has positive u-valuation"),
                    c.clone(),
                )
            }),
        )
        .with_cap(Some(self.cap))
    }

    /// `h(s_1..s_n) = (-1)^n Π g(u_i)` rewritten in the elementary
    /// symmetric polynomials; `h(0,..,0) = 1`.
    pub fn h_series(&self, n: usize) -> Result<Poly, FglError> {
        if n < 1 {
            return Err(FglError::Domain("h-series needs n >= 1".into()));
        }
        let g = self.g_series();
        // expand Π g(u_i) on params + u_1..u_n
        let u_names: Vec<String> = (1..=n).map(|i| format!("u{i}")).collect();
        let u_ext: Vec<(&str, i64)> = u_names.iter().map(|s| (s.as_str(), 1)).collect();
        let u_table = self.params.extend(&u_ext);
        let mut prod = Poly::one(&u_table).with_cap(Some(self.cap));
        for name in &u_names {
            // substitute u ↦ u_i
            let mut images: Vec<Poly> = Vec::with_capacity(g.vars().len());
            for v in g.vars().ids() {
                if g.vars().name(v) == "u" {
                    images.push(Poly::var_named(&u_table, name).unwrap());
                } else {
                    images.push(Poly::var_named(&u_table, g.vars().name(v)).unwrap());
                }
            }
            let gi = g.substitute(&u_table, &images, Some(self.cap));
            prod = prod.checked_mul(&gi, Some(self.cap)).expect("same table");
        }
        if n % 2 == 1 {
            prod = prod.scale(&-Rat::one());
        }
        // rewrite in s_1..s_n
        let s_names: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
        let mut s_ext: Vec<(&str, i64)> = Vec::new();
        for (i, sname) in s_names.iter().enumerate() {
            s_ext.push((sname.as_str(), (i + 1) as i64));
        }
        let s_table = self.params.extend(&s_ext);
        let u_vars: Vec<VarId> = u_names.iter().map(|nm| u_table.id(nm).unwrap()).collect();
        let s_vars: Vec<VarId> = s_names.iter().map(|nm| s_table.id(nm).unwrap()).collect();
        let carry: Vec<(VarId, VarId)> = self
            .params
            .ids()
            .map(|p| {
                (
                    u_table.id(self.params.name(p)).unwrap(),
                    s_table.id(self.params.name(p)).unwrap(),
                )
            })
            .collect();
        Ok(to_elementary_symmetric(
            &prod, &u_vars, &s_table, &s_vars, &carry,
        )?)
    }

    /// `√h(s_1..s_n)`: the unique square root of the h-series with
    /// constant term 1.
    pub fn sqrt_h_series(&self, n: usize) -> Result<Poly, FglError> {
        let h = self.h_series(n)?;
        Ok(series_sqrt(&h, self.cap)?)
    }

    /// Substitute the Chern classes of a split bundle into `√h`:
    /// the operation `√h(V) = √h(c_1(V), .., c_n(V))` on the bundle's
    /// base, as a class with law parameters adjoined.
    pub fn sqrt_h_apply(&self, v: &Bundle) -> Result<FglClass, FglError> {
        let roots = self.theory_roots(v, &[])?;
        self.sqrt_h_apply_roots(v.base(), &roots)
    }

    /// `√h(V∨)`: the dual taken inside the theory, whose Chern roots are
    /// the formal inverses `χ(u_i)` (for the additive law this is the
    /// ordinary negation). Equals `√h(V)^{-1}` modulo the cap.
    pub fn sqrt_h_apply_dual(&self, v: &Bundle) -> Result<FglClass, FglError> {
        let all: Vec<usize> = (0..v.rank()).collect();
        let roots = self.theory_roots(v, &all)?;
        self.sqrt_h_apply_roots(v.base(), &roots)
    }

    /// The bundle's Chern roots as theory classes on the parameter-
    /// extended table, with the roots at `dualize` replaced by their
    /// formal inverses `χ(u_i)`.
    pub fn theory_roots(&self, v: &Bundle, dualize: &[usize]) -> Result<Vec<Poly>, FglError> {
        let table = extended_table(v.base(), &self.params)?;
        let chi = self.inverse_to(v.base().dim());
        let mut out = Vec::with_capacity(v.rank());
        for (i, r) in v.roots().iter().enumerate() {
            let root = reindex(r.poly(), &table);
            if dualize.contains(&i) {
                // substitute u ↦ root into χ
                let mut images: Vec<Poly> = Vec::with_capacity(chi.vars().len());
                for cv in chi.vars().ids() {
                    let name = chi.vars().name(cv);
                    if name == "u" {
                        images.push(root.clone());
                    } else {
                        images.push(Poly::var_named(&table, name).ok_or_else(|| {
                            FglError::Domain(format!("parameter {name} missing"))
                        })?);
                    }
                }
                out.push(chi.substitute(&table, &images, Some(v.base().dim())));
            } else {
                out.push(root);
            }
        }
        Ok(out)
    }

    /// `√h` evaluated on explicit theory roots: substitute the elementary
    /// symmetric polynomials of the roots into the series.
    pub fn sqrt_h_apply_roots(
        &self,
        variety: &Variety,
        roots: &[Poly],
    ) -> Result<FglClass, FglError> {
        let n = roots.len().max(1);
        let series = self.sqrt_h_series(n)?;
        self.apply_series_roots(&series, variety, roots)
    }

    /// Substitute `s_i ↦ e_i(roots)` into any series in `s_1..s_n`.
    pub fn apply_series_roots(
        &self,
        series: &Poly,
        variety: &Variety,
        roots: &[Poly],
    ) -> Result<FglClass, FglError> {
        let table = extended_table(variety, &self.params)?;
        // elementary symmetric polynomials of the roots
        let mut elem: Vec<Poly> = vec![Poly::one(&table)];
        for r in roots {
            let mut next = Vec::with_capacity(elem.len() + 1);
            next.push(elem[0].clone());
            for i in 1..=elem.len() {
                let keep = if i < elem.len() {
                    elem[i].clone()
                } else {
                    Poly::zero(&table)
                };
                let add = elem[i - 1]
                    .checked_mul(r, Some(variety.dim()))
                    .map_err(FglError::Arith)?;
                next.push(&keep + &add);
            }
            elem = next;
        }
        let mut images: Vec<Poly> = Vec::with_capacity(series.vars().len());
        for var in series.vars().ids() {
            let name = series.vars().name(var);
            if let Some(idx) = name.strip_prefix('s').and_then(|t| t.parse::<usize>().ok()) {
                images.push(elem.get(idx).cloned().unwrap_or_else(|| Poly::zero(&table)));
            } else {
                images.push(Poly::var_named(&table, name).ok_or_else(|| {
                    FglError::Domain(format!("variable {name} missing from the extended table"))
                })?);
            }
        }
        let raw = series.substitute(&table, &images, Some(variety.dim()));
        FglClass::new(variety, raw)
    }

    /// The theory's Euler class of a list of roots: their product.
    pub fn euler_roots(&self, variety: &Variety, roots: &[Poly]) -> Result<FglClass, FglError> {
        let table = extended_table(variety, &self.params)?;
        let mut acc = Poly::one(&table);
        for r in roots {
            acc = acc
                .checked_mul(r, Some(variety.dim()))
                .map_err(FglError::Arith)?;
        }
        FglClass::new(variety, acc)
    }
}

fn extended_table(variety: &Variety, params: &VarSet) -> Result<VarSet, FglError> {
    let extra: Vec<(&str, i64)> = params.entries().collect();
    for (name, _) in &extra {
        if variety.vars().id(name).is_some() {
            return Err(FglError::Domain(format!(
                "parameter {name} collides with a generator of {}",
                variety.name()
            )));
        }
    }
    Ok(variety.vars().extend(&extra))
}

/// A class on a model variety with formal-group-law parameters adjoined
/// (e.g. `β`-coefficients in the multiplicative specialization), kept in
/// normal form with respect to the variety's relations.
#[derive(Clone, PartialEq)]
pub struct FglClass {
    variety: Variety,
    poly: Poly,
}

impl FglClass {
    fn new(variety: &Variety, raw: Poly) -> Result<FglClass, FglError> {
        let poly = variety.normalize_extended(&raw)?;
        Ok(FglClass {
            variety: variety.clone(),
            poly,
        })
    }

    /// Lift a plain class (no parameters) into the extended table.
    pub fn from_class(c: &crate::chow::Class, law: &FormalGroupLaw) -> Result<FglClass, FglError> {
        let table = extended_table(c.variety(), &law.params)?;
        FglClass::new(c.variety(), reindex(c.poly(), &table))
    }

    pub fn variety(&self) -> &Variety {
        &self.variety
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn mul(&self, other: &FglClass) -> Result<FglClass, FglError> {
        if self.variety != other.variety {
            return Err(FglError::Domain("classes on different varieties".into()));
        }
        let raw = self
            .poly
            .checked_mul(&other.poly, Some(self.variety.dim()))
            .map_err(FglError::Arith)?;
        FglClass::new(&self.variety, raw)
    }

    pub fn add(&self, other: &FglClass) -> Result<FglClass, FglError> {
        if self.variety != other.variety {
            return Err(FglError::Domain("classes on different varieties".into()));
        }
        Ok(FglClass {
            variety: self.variety.clone(),
            poly: &self.poly + &other.poly,
        })
    }

    /// Multiplicative inverse modulo the variety dimension (constant
    /// term must be a nonzero rational).
    pub fn inverse(&self) -> Result<FglClass, FglError> {
        let inv = series_inverse(&self.poly, self.variety.dim())?;
        FglClass::new(&self.variety, inv)
    }

    pub fn render(&self) -> String {
        self.poly.render()
    }
}

impl fmt::Debug for FglClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {}", self.poly.render(), self.variety.name())
    }
}

impl fmt::Display for FglClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.render())
    }
}

/// Evidence record for the Fulton-conjecture probe: whether
/// `√h(Λ_1) e(Λ_1) = √h(Λ_2) e(Λ_2)` for a hand-built pair of maximal
/// isotropics in a split model. Draws no theoretical conclusion.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub law: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

/// Compare the twisted Euler classes `√h(Λ)·e(Λ)` of two maximal
/// isotropic subbundles of `hyperbolic(V)`: `Λ_1 = V` and `Λ_2` obtained
/// by replacing the roots at `dualize` with their formal inverses
/// (an even number, so `Λ_2` is again positive).
pub fn fulton_probe(
    law: &FormalGroupLaw,
    v: &Bundle,
    dualize: &[usize],
) -> Result<ProbeReport, FglError> {
    if dualize.len() % 2 != 0 {
        return Err(FglError::Domain(
            "dualizing an odd number of planes yields a negative maximal isotropic".into(),
        ));
    }
    if dualize.iter().any(|&i| i >= v.rank()) {
        return Err(FglError::Domain("root index out of range".into()));
    }
    let r1 = law.theory_roots(v, &[])?;
    let r2 = law.theory_roots(v, dualize)?;
    let lhs = law
        .sqrt_h_apply_roots(v.base(), &r1)?
        .mul(&law.euler_roots(v.base(), &r1)?)?;
    let rhs = law
        .sqrt_h_apply_roots(v.base(), &r2)?
        .mul(&law.euler_roots(v.base(), &r2)?)?;
    Ok(ProbeReport {
        law: law.name().to_string(),
        lhs: lhs.render(),
        rhs: rhs.render(),
        equal: lhs == rhs,
    })
}
