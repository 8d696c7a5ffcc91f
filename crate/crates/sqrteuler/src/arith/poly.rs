use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::monomial::Monomial;
use super::vars::{VarId, VarSet};
use super::{ArithError, Rat};

/// Sparse multivariate polynomial over exact rationals, graded by the
/// weighted degree of its [`VarSet`].
///
/// Invariants: no zero coefficients are stored, and when `cap` is set no
/// term exceeds it; addition and multiplication truncate to respect the
/// cap. The cap is carried explicitly and never inferred. Equality is
/// structural on the normalized term map (the cap does not participate).
#[derive(Debug, Clone)]
pub struct Poly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rat>,
    cap: Option<i64>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}
impl Eq for Poly {}

impl Poly {
    pub fn zero(vars: &VarSet) -> Self {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
            cap: None,
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Poly::constant(vars, Rat::one())
    }

    pub fn constant(vars: &VarSet, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly {
            vars: vars.clone(),
            terms,
            cap: None,
        }
    }

    /// The variable `v` as a polynomial.
    pub fn var(vars: &VarSet, v: VarId) -> Self {
        Poly::term(vars, Monomial::var(vars, v, 1), Rat::one())
    }

    pub fn var_named(vars: &VarSet, name: &str) -> Option<Self> {
        vars.id(name).map(|v| Poly::var(vars, v))
    }

    pub fn term(vars: &VarSet, m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly {
            vars: vars.clone(),
            terms,
            cap: None,
        }
    }

    pub fn from_terms(vars: &VarSet, it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero(vars);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn cap(&self) -> Option<i64> {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> + '_ {
        self.terms.iter()
    }

    /// Largest term in graded-lex order, if any.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Total weighted degree of the largest term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// True when every term has the given weighted degree.
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        if let Some(cap) = self.cap {
            if m.degree() > cap {
                return;
            }
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Return a copy with the cap set (dropping any terms above it).
    pub fn with_cap(&self, cap: Option<i64>) -> Poly {
        let mut out = self.clone();
        out.cap = cap;
        if let Some(c) = cap {
            out.terms.retain(|m, _| m.degree() <= c);
        }
        out
    }

    /// Drop terms of weighted degree above `cap` (keeps the stored cap).
    pub fn truncate(&self, cap: i64) -> Poly {
        let mut out = self.clone();
        out.terms.retain(|m, _| m.degree() <= cap);
        out
    }

    /// The homogeneous component of weighted degree `d`.
    pub fn component(&self, d: i64) -> Poly {
        let mut out = Poly::zero(&self.vars);
        out.cap = self.cap;
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    fn merged_cap(&self, other: &Poly) -> Option<i64> {
        match (self.cap, other.cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, b) => b,
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, ArithError> {
        if self.vars != other.vars {
            return Err(ArithError::VarSetMismatch);
        }
        let mut out = Poly {
            vars: self.vars.clone(),
            terms: self.terms.clone(),
            cap: self.merged_cap(other),
        };
        if let Some(c) = out.cap {
            out.terms.retain(|m, _| m.degree() <= c);
        }
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly, cap: Option<i64>) -> Result<Poly, ArithError> {
        if self.vars != other.vars {
            return Err(ArithError::VarSetMismatch);
        }
        let cap = match (self.merged_cap(other), cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, b) => b,
        };
        let mut out = Poly::zero(&self.vars);
        out.cap = cap;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(k) = cap {
                    if ma.degree() + mb.degree() > k {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            let mut z = Poly::zero(&self.vars);
            z.cap = self.cap;
            return z;
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c;
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.vars).with_cap(self.cap);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base, None).expect("same table");
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base, None).expect("same table");
            }
        }
        acc
    }

    /// Substitute each variable by the polynomial `images[var.index()]`
    /// (over the target table) and expand, truncating at `cap`.
    pub fn substitute(&self, target: &VarSet, images: &[Poly], cap: Option<i64>) -> Poly {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let mut out = Poly::zero(target);
        out.cap = cap;
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(target, c.clone()).with_cap(cap);
            for (v, e) in m.iter() {
                let img = images[v.index()].with_cap(cap);
                acc = acc
                    .checked_mul(&img.pow(e), cap)
                    .expect("images over target table");
                if acc.is_zero() {
                    break;
                }
            }
            for (m2, c2) in acc.terms {
                out.add_term(m2, c2);
            }
        }
        out
    }

    /// Exponent of `v` split off each term: returns `(exp, cofactor)` pairs
    /// grouped by the exponent, ascending. Used by bundle pushforwards.
    pub fn split_by_var(&self, v: VarId) -> BTreeMap<u32, Poly> {
        let mut groups: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            let rest = m
                .try_div(&Monomial::var(&self.vars, v, e))
                .expect("divides by construction");
            groups
                .entry(e)
                .or_insert_with(|| Poly::zero(&self.vars))
                .add_term(rest, c.clone());
        }
        groups
    }

    /// Canonical rendering: terms ascending in graded-lex order.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = m.render(&self.vars);
            let (sign, abs) = if c < &Rat::zero() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(if sign == "-" { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }
}

/// Exact product truncated above `cap`; errors when the operands live
/// over different variable tables.
pub fn poly_mul(a: &Poly, b: &Poly, cap: Option<i64>) -> Result<Poly, ArithError> {
    a.checked_mul(b, cap)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("variable table mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_add(&rhs.neg()).expect("variable table mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs, None).expect("variable table mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
