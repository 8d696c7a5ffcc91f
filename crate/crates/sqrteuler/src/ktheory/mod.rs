//! K-theoretic square-root Euler classes on split bundles.
//!
//! K-classes live in augmentation coordinates: one nilpotent variable
//! `l = 1 - L` per ambient line bundle, truncated above a nilpotence cap
//! (the dimension of the model). The K-ring of a model is a presented
//! ring exactly like a Chow ring, just with its own relations, so the
//! [`crate::chow::Variety`] machinery carries the presentations and
//! `Class` the elements.
//!
//! The square root of a line class is the binomial series
//! `√L = 1 - Σ a_i (1-L)^i` with `a_i = C(2i-2, i-1) / (i·2^{2i-1})`;
//! the Euler class of a split bundle is `𝔢(V) = Λ_{-1}(V∨) = Π(1 - L_j∨)`,
//! and for a hyperbolic orthogonal bundle `√𝔢(F) = √det(V) · 𝔢(V)` up to
//! the orientation sign.

mod model;

pub use model::{
    klinear, kproj_space, sqrt_euler_k_localized, sqrt_euler_k_two_sections, twist_line, KBlowup,
    KTwoSectionModel,
};

use num::One;

use crate::arith::{binomial, series_inverse, Poly, Rat, VarSet};
use crate::chow::{Class, ChowError, Embedding, Variety};
use crate::orth::Orientation;

/// Errors from the K-theory layer.
#[derive(Debug, thiserror::Error)]
pub enum KError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
}

/// An element of a presented K-ring (augmentation coordinates).
pub type KClass = Class;

/// The free nilpotent K-ring on the given augmentation variables,
/// truncated above `cap`.
pub fn augmentation_ring(names: &[&str], cap: i64) -> Variety {
    let vars: Vec<(&str, i64)> = names.iter().map(|n| (*n, 1)).collect();
    let vars = VarSet::new(&vars);
    let point = crate::arith::Monomial::one();
    Variety::with_data(crate::chow::VarietyData {
        name: format!("K<{}>", names.join(",")),
        vars,
        dim: cap,
        rules: vec![],
        point,
        blow: None,
    })
}

/// The line-bundle class `L = 1 - l` for an augmentation variable.
pub fn line_class(ring: &Variety, name: &str) -> Result<KClass, KError> {
    let l = ring
        .generator(name)
        .ok_or_else(|| KError::Domain(format!("no augmentation variable {name}")))?;
    Ok(&ring.one() - &l)
}

/// Dual of a unit K-class: the truncated inverse series.
pub fn dual_line(l: &KClass) -> Result<KClass, KError> {
    let inv = series_inverse(l.poly(), l.variety().dim())?;
    Ok(l.variety().class(inv))
}

/// The i-th coefficient of the square-root series,
/// `a_i = C(2i-2, i-1) / (i · 2^{2i-1})`.
pub fn sqrt_line_coefficient(i: i64) -> Result<Rat, KError> {
    if i < 1 {
        return Err(KError::Domain(format!(
            "coefficient index must be >= 1, got {i}"
        )));
    }
    let i = i as u64;
    let num = binomial(2 * i - 2, i - 1);
    let denom = num::BigInt::from(i) * num::BigInt::from(2u8).pow((2 * i - 1) as u32);
    Ok(Rat::new(num, denom))
}

/// The square root of a line-bundle class:
/// `√L = 1 - Σ_{i>=1} a_i (1-L)^i`, truncated at the ring's cap.
/// Satisfies `√L² = L` and `√(L⊗L') = √L·√L'` modulo the cap.
pub fn sqrt_line(l: &KClass) -> Result<KClass, KError> {
    if !l.poly().constant_term().is_one() {
        return Err(KError::Domain(format!(
            "not a line-bundle class (constant term {} ≠ 1)",
            l.poly().constant_term()
        )));
    }
    let ring = l.variety();
    let cap = ring.dim();
    let u = &ring.one() - l; // 1 - L, nilpotent
    let mut acc = ring.one();
    let mut upow = ring.one();
    for i in 1..=cap {
        upow = &upow * &u;
        if upow.is_zero() {
            break;
        }
        acc = &acc - &upow.scale(&sqrt_line_coefficient(i)?);
    }
    Ok(acc)
}

/// A split bundle in K-theory: a list of line-bundle classes over one
/// presented K-ring.
#[derive(Debug, Clone, PartialEq)]
pub struct KBundle {
    ring: Variety,
    lines: Vec<KClass>,
}

impl KBundle {
    pub fn new(ring: &Variety, lines: Vec<KClass>) -> Result<Self, KError> {
        for l in &lines {
            if l.variety() != ring {
                return Err(KError::Domain("line class over a different K-ring".into()));
            }
            if !l.poly().constant_term().is_one() {
                return Err(KError::Domain(format!(
                    "line class must have constant term 1: {}",
                    l.render()
                )));
            }
        }
        Ok(KBundle {
            ring: ring.clone(),
            lines,
        })
    }

    /// Formal lines on the free ring: one augmentation variable each.
    pub fn formal(ring: &Variety, names: &[&str]) -> Result<Self, KError> {
        let lines = names
            .iter()
            .map(|n| line_class(ring, n))
            .collect::<Result<Vec<_>, _>>()?;
        KBundle::new(ring, lines)
    }

    pub fn ring(&self) -> &Variety {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[KClass] {
        &self.lines
    }

    pub fn concat(&self, other: &KBundle) -> Result<KBundle, KError> {
        if self.ring != other.ring {
            return Err(KError::Domain("K-rings differ".into()));
        }
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().cloned());
        KBundle::new(&self.ring, lines)
    }

    pub fn select(&self, indices: &[usize]) -> KBundle {
        KBundle {
            ring: self.ring.clone(),
            lines: indices.iter().map(|&i| self.lines[i].clone()).collect(),
        }
    }

    pub fn drop_lines(&self, indices: &[usize]) -> KBundle {
        KBundle {
            ring: self.ring.clone(),
            lines: self
                .lines
                .iter()
                .enumerate()
                .filter(|(i, _)| !indices.contains(i))
                .map(|(_, l)| l.clone())
                .collect(),
        }
    }

    pub fn dual(&self) -> Result<KBundle, KError> {
        let lines = self
            .lines
            .iter()
            .map(dual_line)
            .collect::<Result<Vec<_>, _>>()?;
        KBundle::new(&self.ring, lines)
    }

    /// `det V = ⊗ L_j` as a line class.
    pub fn det(&self) -> KClass {
        let mut acc = self.ring.one();
        for l in &self.lines {
            acc = &acc * l;
        }
        acc
    }

    pub fn restrict(&self, emb: &Embedding) -> Result<KBundle, KError> {
        let lines = self.lines.iter().map(|l| emb.gysin(l)).collect();
        Ok(KBundle {
            ring: emb.sub().clone(),
            lines,
        })
    }
}

/// `𝔢(V) = Λ_{-1}(V∨) = Π_j (1 - L_j∨)`, multiplicative over direct sums.
pub fn euler_k(v: &KBundle) -> Result<KClass, KError> {
    let mut acc = v.ring().one();
    for l in v.lines() {
        acc = &acc * &(&v.ring().one() - &dual_line(l)?);
    }
    Ok(acc)
}

/// `Sym^a` of a split bundle: the sum of all degree-`a` monomials in the
/// line classes.
pub(crate) fn sym_class(ring: &Variety, lines: &[KClass], a: usize) -> KClass {
    if a == 0 {
        return ring.one();
    }
    if lines.is_empty() {
        return ring.zero();
    }
    // recursion: Sym^a(L_1..L_n) = Sym^a(L_2..L_n) + L_1 · Sym^{a-1}(L_1..L_n)
    let without = sym_class(ring, &lines[1..], a);
    let with = &lines[0] * &sym_class(ring, lines, a - 1);
    &without + &with
}

/// Elementary symmetric class `e_i` of a list of line classes (`Λ^i`).
pub(crate) fn lambda_class(ring: &Variety, lines: &[KClass], i: usize) -> KClass {
    if i == 0 {
        return ring.one();
    }
    if i > lines.len() {
        return ring.zero();
    }
    // e_i(L_1..L_n) = e_i(L_2..L_n) + L_1 e_{i-1}(L_2..L_n)
    let rest = &lines[1..];
    let without = lambda_class(ring, rest, i);
    let with = &lines[0] * &lambda_class(ring, rest, i - 1);
    &without + &with
}

/// A hyperbolic orthogonal bundle lifted to K-theory.
#[derive(Debug, Clone, PartialEq)]
pub struct KOrthBundle {
    positive: KBundle,
    orientation: Orientation,
}

impl KOrthBundle {
    pub fn hyperbolic(v: KBundle) -> Self {
        KOrthBundle {
            positive: v,
            orientation: Orientation::Positive,
        }
    }

    pub fn with_orientation(v: KBundle, orientation: Orientation) -> Self {
        KOrthBundle {
            positive: v,
            orientation,
        }
    }

    pub fn flip(&self) -> Self {
        KOrthBundle {
            positive: self.positive.clone(),
            orientation: self.orientation.flip(),
        }
    }

    pub fn positive_part(&self) -> &KBundle {
        &self.positive
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn ring(&self) -> &Variety {
        self.positive.ring()
    }

    pub fn half_rank(&self) -> usize {
        self.positive.rank()
    }

    /// `𝔢(F) = 𝔢(V)·𝔢(V∨)`.
    pub fn euler(&self) -> Result<KClass, KError> {
        Ok(&euler_k(&self.positive)? * &euler_k(&self.positive.dual()?)?)
    }

    /// `√𝔢(F) = sign · √det(V) · 𝔢(V)` for the positive maximal
    /// isotropic `V` (the `K = Λ` case of the reduction formula).
    pub fn sqrt_euler(&self) -> Result<KClass, KError> {
        let s = sqrt_line(&self.positive.det())?;
        Ok((&s * &euler_k(&self.positive)?).scale(&self.orientation.rat()))
    }

    /// `√𝔢(F)² = (-1)^n 𝔢(F)` modulo the cap.
    pub fn sqrt_euler_squared_check(&self) -> Result<bool, KError> {
        let n = self.half_rank() as u32;
        let sign = if n % 2 == 1 { -Rat::one() } else { Rat::one() };
        Ok(self.sqrt_euler()?.pow(2) == self.euler()?.scale(&sign))
    }

    /// Reduction by an isotropic subbundle `K ⊆ V` (a sub-multiset of
    /// lines): `√𝔢(F) = √det(K)·𝔢(K)·√𝔢(K^⊥/K)`.
    pub fn reduce(&self, indices: &[usize]) -> Result<KOrthBundle, KError> {
        if indices.iter().any(|&i| i >= self.half_rank()) {
            return Err(KError::Domain("line index out of range".into()));
        }
        Ok(KOrthBundle {
            positive: self.positive.drop_lines(indices),
            orientation: self.orientation,
        })
    }

    pub fn restrict(&self, emb: &Embedding) -> Result<KOrthBundle, KError> {
        Ok(KOrthBundle {
            positive: self.positive.restrict(emb)?,
            orientation: self.orientation,
        })
    }
}

/// Convenience: a free ring on numbered augmentation variables `l1..ln`.
pub fn formal_ring(n: usize, cap: i64) -> (Variety, Vec<String>) {
    let names: Vec<String> = (1..=n).map(|i| format!("l{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    (augmentation_ring(&refs, cap), names)
}

// keep Poly in the public signature surface for model.rs
pub(crate) type KPoly = Poly;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn coefficients_match_taylor_oracle() {
        // oracle: the Taylor series of sqrt(1-x) has coefficients -a_i
        assert_eq!(sqrt_line_coefficient(1).unwrap(), ratio(1, 2));
        assert_eq!(sqrt_line_coefficient(2).unwrap(), ratio(1, 8));
        assert_eq!(sqrt_line_coefficient(3).unwrap(), ratio(1, 16));
        assert_eq!(sqrt_line_coefficient(4).unwrap(), ratio(5, 128));
        assert!(sqrt_line_coefficient(0).is_err());
    }

    #[test]
    fn sqrt_line_squares_to_line() {
        let (ring, _) = formal_ring(1, 8);
        let l = line_class(&ring, "l1").unwrap();
        let s = sqrt_line(&l).unwrap();
        assert_eq!(s.pow(2), l);
        // trivial line: √1 = 1
        assert_eq!(sqrt_line(&ring.one()).unwrap(), ring.one());
        // non-line input rejected
        assert!(sqrt_line(&ring.generator("l1").unwrap()).is_err());
    }

    #[test]
    fn sqrt_line_multiplicative() {
        let (ring, _) = formal_ring(2, 10);
        let l1 = line_class(&ring, "l1").unwrap();
        let l2 = line_class(&ring, "l2").unwrap();
        let lhs = sqrt_line(&(&l1 * &l2)).unwrap();
        let rhs = &sqrt_line(&l1).unwrap() * &sqrt_line(&l2).unwrap();
        assert_eq!(lhs, rhs);
        // √L · √(L∨) = 1
        let dual = dual_line(&l1).unwrap();
        assert_eq!(
            &sqrt_line(&l1).unwrap() * &sqrt_line(&dual).unwrap(),
            ring.one()
        );
    }

    #[test]
    fn euler_k_basics() {
        let (ring, _) = formal_ring(2, 6);
        // trivial line: 𝔢 = 1 - 1 = 0
        let trivial = KBundle::new(&ring, vec![ring.one()]).unwrap();
        assert!(euler_k(&trivial).unwrap().is_zero());
        // single line: 1 - L∨
        let v = KBundle::formal(&ring, &["l1"]).unwrap();
        let l = line_class(&ring, "l1").unwrap();
        assert_eq!(euler_k(&v).unwrap(), &ring.one() - &dual_line(&l).unwrap());
        // product rule
        let v2 = KBundle::formal(&ring, &["l1", "l2"]).unwrap();
        let l2 = line_class(&ring, "l2").unwrap();
        let expect = &(&ring.one() - &dual_line(&l).unwrap())
            * &(&ring.one() - &dual_line(&l2).unwrap());
        assert_eq!(euler_k(&v2).unwrap(), expect);
    }

    #[test]
    fn sqrt_euler_k_square() {
        let (ring, _) = formal_ring(1, 8);
        let v = KBundle::formal(&ring, &["l1"]).unwrap();
        let f = KOrthBundle::hyperbolic(v);
        assert!(f.sqrt_euler_squared_check().unwrap());
        assert!(f.flip().sqrt_euler_squared_check().unwrap());
        let (ring2, _) = formal_ring(2, 8);
        let v2 = KBundle::formal(&ring2, &["l1", "l2"]).unwrap();
        assert!(KOrthBundle::hyperbolic(v2)
            .sqrt_euler_squared_check()
            .unwrap());
    }

    #[test]
    fn trivial_positive_line_gives_zero() {
        let (ring, _) = formal_ring(1, 6);
        let v = KBundle::new(&ring, vec![ring.one()]).unwrap();
        assert!(KOrthBundle::hyperbolic(v).sqrt_euler().unwrap().is_zero());
    }

    #[test]
    fn reduction_formula() {
        // √𝔢(F) = √det(K)·𝔢(K)·√𝔢(K⊥/K) for every K ⊂ V
        let (ring, _) = formal_ring(3, 8);
        let v = KBundle::formal(&ring, &["l1", "l2", "l3"]).unwrap();
        let f = KOrthBundle::hyperbolic(v.clone());
        for k_idx in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 1, 2]] {
            let k = v.select(&k_idx);
            let reduced = f.reduce(&k_idx).unwrap();
            let lhs = f.sqrt_euler().unwrap();
            let rhs = &(&sqrt_line(&k.det()).unwrap() * &euler_k(&k).unwrap())
                * &reduced.sqrt_euler().unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sym_and_lambda_classes() {
        let (ring, _) = formal_ring(2, 6);
        let l1 = line_class(&ring, "l1").unwrap();
        let l2 = line_class(&ring, "l2").unwrap();
        let lines = vec![l1.clone(), l2.clone()];
        assert_eq!(sym_class(&ring, &lines, 0), ring.one());
        assert_eq!(sym_class(&ring, &lines, 1), &l1 + &l2);
        let s2 = &(&l1.pow(2) + &(&l1 * &l2)) + &l2.pow(2);
        assert_eq!(sym_class(&ring, &lines, 2), s2);
        assert_eq!(lambda_class(&ring, &lines, 2), &l1 * &l2);
        assert!(lambda_class(&ring, &lines, 3).is_zero());
    }
}
