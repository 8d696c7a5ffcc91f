use std::cmp::Ordering;
use std::fmt;

use super::vars::{VarId, VarSet};

/// A sparse monomial: sorted `(variable, exponent)` pairs with no zero
/// exponents, plus the cached weighted degree against the ambient table.
///
/// Ordering is graded lexicographic: first by weighted degree, then by
/// exponent vectors (earlier variables weigh more). This is the canonical
/// term order used for printing and equality throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<(VarId, u32)>,
    degree: i64,
}

impl Monomial {
    /// The empty monomial `1`.
    pub fn one() -> Self {
        Monomial {
            exps: Vec::new(),
            degree: 0,
        }
    }

    /// A single variable to the given power.
    pub fn var(vars: &VarSet, v: VarId, exp: u32) -> Self {
        Monomial::from_pairs(vars, vec![(v, exp)])
    }

    /// Build from `(var, exp)` pairs; zero exponents dropped, duplicates merged.
    pub fn from_pairs(vars: &VarSet, mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.sort_by_key(|(v, _)| *v);
        let mut exps: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            match exps.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => exps.push((v, e)),
            }
        }
        let degree = exps
            .iter()
            .map(|(v, e)| vars.degree(*v) * *e as i64)
            .sum();
        Monomial { exps, degree }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.exps
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.exps.iter().copied()
    }

    /// Product of two monomials over the same table.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            match self.exps[i].0.cmp(&other.exps[j].0) {
                Ordering::Less => {
                    exps.push(self.exps[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push(other.exps[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((self.exps[i].0, self.exps[i].1 + other.exps[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// `self / other` if `other` divides `self`.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut j = 0;
        for &(v, e) in &self.exps {
            let mut rem = e;
            while j < other.exps.len() && other.exps[j].0 < v {
                return None; // divisor has a variable we lack
            }
            if j < other.exps.len() && other.exps[j].0 == v {
                if other.exps[j].1 > e {
                    return None;
                }
                rem = e - other.exps[j].1;
                j += 1;
            }
            if rem > 0 {
                exps.push((v, rem));
            }
        }
        if j < other.exps.len() {
            return None;
        }
        Some(Monomial {
            exps,
            degree: self.degree - other.degree,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        other.try_div(self).is_some()
    }

    /// Render against a table, e.g. `H^2*d`.
    pub fn render(&self, vars: &VarSet) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::with_capacity(self.exps.len());
        for &(v, e) in &self.exps {
            if e == 1 {
                parts.push(vars.name(v).to_string());
            } else {
                parts.push(format!("{}^{}", vars.name(v), e));
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.degree != other.degree {
            return self.degree.cmp(&other.degree);
        }
        // lex on full exponent vectors: iterate merged variable ids
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        // earlier variable present counts as larger in lex
                        return if va < vb {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Display without a table is only for debugging; use `render` in user output.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(v, e)| format!("x{}^{}", v.0, e))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}
