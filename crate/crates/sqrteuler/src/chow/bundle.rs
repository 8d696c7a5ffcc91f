use num::One;

use crate::arith::{rat, Rat};

use super::maps::Embedding;
use super::variety::{Class, Variety};
use super::ChowError;

/// A split vector bundle, represented by its Chern roots (degree-1 classes
/// on the base, the splitting-principle stand-in for an arbitrary bundle).
///
/// The total Chern class is `prod (1 + r_i)`; dualizing negates the roots;
/// Whitney additivity under concatenation holds on the nose.
#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    base: Variety,
    roots: Vec<Class>,
}

impl Bundle {
    pub fn new(base: &Variety, roots: Vec<Class>) -> Result<Self, ChowError> {
        for r in &roots {
            if r.variety() != base {
                return Err(ChowError::VarietyMismatch(
                    r.variety().name().to_string(),
                    base.name().to_string(),
                ));
            }
            if !r.is_zero() && !r.is_homogeneous_of(1) {
                return Err(ChowError::Domain(format!(
                    "Chern root must be homogeneous of degree 1: {}",
                    r.render()
                )));
            }
        }
        Ok(Bundle {
            base: base.clone(),
            roots,
        })
    }

    /// `O(d_1) ⊕ ... ⊕ O(d_k)` on a base with hyperplane generator `H`.
    pub fn twists(base: &Variety, ds: &[i64]) -> Result<Self, ChowError> {
        let h = base.generator("H").ok_or_else(|| {
            ChowError::Domain(format!("{} has no hyperplane generator H", base.name()))
        })?;
        let roots = ds.iter().map(|&d| h.scale(&rat(d))).collect();
        Bundle::new(base, roots)
    }

    pub fn trivial(base: &Variety, rank: usize) -> Self {
        Bundle {
            base: base.clone(),
            roots: vec![base.zero(); rank],
        }
    }

    pub fn line(root: Class) -> Self {
        Bundle {
            base: root.variety().clone(),
            roots: vec![root],
        }
    }

    pub fn base(&self) -> &Variety {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Class] {
        &self.roots
    }

    pub fn dual(&self) -> Bundle {
        Bundle {
            base: self.base.clone(),
            roots: self
                .roots
                .iter()
                .map(|r| r.scale(&-Rat::one()))
                .collect(),
        }
    }

    /// Whitney concatenation `E ⊕ F`.
    pub fn concat(&self, other: &Bundle) -> Result<Bundle, ChowError> {
        if self.base != other.base {
            return Err(ChowError::VarietyMismatch(
                self.base.name().to_string(),
                other.base.name().to_string(),
            ));
        }
        let mut roots = self.roots.clone();
        roots.extend(other.roots.iter().cloned());
        Ok(Bundle {
            base: self.base.clone(),
            roots,
        })
    }

    /// Sub-bundle spanned by the roots at the given indices.
    pub fn select(&self, indices: &[usize]) -> Bundle {
        Bundle {
            base: self.base.clone(),
            roots: indices.iter().map(|&i| self.roots[i].clone()).collect(),
        }
    }

    /// Complement of the given root indices.
    pub fn drop_roots(&self, indices: &[usize]) -> Bundle {
        Bundle {
            base: self.base.clone(),
            roots: self
                .roots
                .iter()
                .enumerate()
                .filter(|(i, _)| !indices.contains(i))
                .map(|(_, r)| r.clone())
                .collect(),
        }
    }

    /// Total Chern class `prod (1 + r_i)`, truncated by the base dimension.
    pub fn total_chern(&self) -> Class {
        let mut acc = self.base.one();
        for r in &self.roots {
            acc = &acc * &(&self.base.one() + r);
        }
        acc
    }

    /// `c_i`, the degree-`i` part of the total Chern class.
    pub fn chern(&self, i: i64) -> Class {
        if i == 0 {
            return self.base.one();
        }
        if i < 0 || i > self.rank() as i64 {
            return self.base.zero();
        }
        self.total_chern().component(i)
    }

    /// Euler class: the product of the roots (`c_top`).
    pub fn euler(&self) -> Class {
        let mut acc = self.base.one();
        for r in &self.roots {
            acc = &acc * r;
        }
        acc
    }

    /// Segre class `s_j`, with `s_j = 0` for `j < 0`, `s_0 = 1` and
    /// `s(E) = 1/c(E)`; computed by the recursion
    /// `s_j = -sum_{i>=1} c_i s_{j-i}`.
    pub fn segre(&self, j: i64) -> Class {
        if j < 0 {
            return self.base.zero();
        }
        let mut s: Vec<Class> = vec![self.base.one()];
        for d in 1..=j {
            let mut acc = self.base.zero();
            for i in 1..=d.min(self.rank() as i64) {
                acc = &acc + &(&self.chern(i) * &s[(d - i) as usize]);
            }
            s.push(acc.scale(&-Rat::one()));
        }
        s[j as usize].clone()
    }

    /// Restrict along an embedding of the base's subvariety.
    pub fn restrict(&self, emb: &Embedding) -> Result<Bundle, ChowError> {
        if emb.ambient() != &self.base {
            return Err(ChowError::VarietyMismatch(
                emb.ambient().name().to_string(),
                self.base.name().to_string(),
            ));
        }
        Bundle::new(
            emb.sub(),
            self.roots.iter().map(|r| emb.gysin(r)).collect(),
        )
    }

    /// Short textual form used in derived variety names.
    pub(crate) fn describe(&self) -> String {
        let parts: Vec<String> = self.roots.iter().map(|r| r.render()).collect();
        format!("<{}>", parts.join(", "))
    }
}

/// Pushforward of `h^k` down a projective bundle `P(E) -> Y` for `E` of
/// rank `r`: the Segre class `s_{k-r+1}(E)`.
pub fn proj_bundle_pushforward(e: &Bundle, k: i64) -> Result<Class, ChowError> {
    if k < 0 {
        return Err(ChowError::Domain(format!("h-power must be >= 0, got {k}")));
    }
    Ok(e.segre(k - e.rank() as i64 + 1))
}

/// Pushforward from the quadric bundle `Q ⊂ P(F)` of an even-rank bundle
/// `F` down to the base: a class `sum_k ξ_k h^k` on `Q` first pushes into
/// `P(F)` by multiplication with the divisor class `2h`, then down by the
/// Segre pushforward. Instantiates the identity
/// `p_*(h^{2n-2}/2 · p^* ξ) = ξ`.
pub fn quadric_pushforward(f: &Bundle, h_coeffs: &[Class]) -> Result<Class, ChowError> {
    let rank = f.rank() as i64;
    if rank < 2 || rank % 2 != 0 {
        return Err(ChowError::Domain(format!(
            "quadric bundles need even rank >= 2, got {rank}"
        )));
    }
    let mut acc = f.base().zero();
    for (k, xi) in h_coeffs.iter().enumerate() {
        if xi.variety() != f.base() {
            return Err(ChowError::VarietyMismatch(
                xi.variety().name().to_string(),
                f.base().name().to_string(),
            ));
        }
        // ι_*(h^k) = 2 h^{k+1} on P(F), then p_*(h^{k+1}) = s_{k+2-rank}(F)
        let s = f.segre(k as i64 + 2 - rank);
        acc = &acc + &(&s * xi).scale(&rat(2));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn segre_of_trivial_bundle() {
        let p3 = Variety::proj_space(3).unwrap();
        let e = Bundle::trivial(&p3, 3);
        assert_eq!(proj_bundle_pushforward(&e, 2).unwrap(), p3.one()); // s_0
        assert_eq!(proj_bundle_pushforward(&e, 3).unwrap(), p3.zero()); // s_1
    }

    #[test]
    fn segre_on_p1() {
        // E = O ⊕ O(-1) on P^1: s(E) = 1/(1-H) = 1 + H, so p_*(h^2) = H
        let p1 = Variety::proj_space(1).unwrap();
        let e = Bundle::twists(&p1, &[0, -1]).unwrap();
        let h = p1.generator("H").unwrap();
        assert_eq!(proj_bundle_pushforward(&e, 2).unwrap(), h);
    }

    #[test]
    fn whitney_total_chern() {
        let p3 = Variety::proj_space(3).unwrap();
        let a = Bundle::twists(&p3, &[1, 2]).unwrap();
        let b = Bundle::twists(&p3, &[-1]).unwrap();
        let both = a.concat(&b).unwrap();
        assert_eq!(
            both.total_chern(),
            &a.total_chern() * &b.total_chern()
        );
    }

    #[test]
    fn quadric_pushforward_point_base() {
        // rank 4 trivial F over a point: h^2/2 ↦ 1, h/2 ↦ 0
        let pt = Variety::point();
        let f = Bundle::trivial(&pt, 4);
        let half = pt.constant(ratio(1, 2));
        let zero = pt.zero();
        assert_eq!(
            quadric_pushforward(&f, &[zero.clone(), zero.clone(), half.clone()]).unwrap(),
            pt.one()
        );
        assert_eq!(
            quadric_pushforward(&f, &[zero.clone(), half]).unwrap(),
            pt.zero()
        );
        assert!(quadric_pushforward(&Bundle::trivial(&pt, 3), &[zero]).is_err());
    }

    #[test]
    fn quadric_pushforward_on_p1() {
        // F = O(1)⊕O⊕O⊕O(-1) on P^1, input h^2/2 ↦ s_0 = 1
        let p1 = Variety::proj_space(1).unwrap();
        let f = Bundle::twists(&p1, &[1, 0, 0, -1]).unwrap();
        let half = p1.constant(ratio(1, 2));
        let zero = p1.zero();
        assert_eq!(
            quadric_pushforward(&f, &[zero.clone(), zero, half]).unwrap(),
            p1.one()
        );
    }

    #[test]
    fn dual_negates_roots() {
        let p2 = Variety::proj_space(2).unwrap();
        let e = Bundle::twists(&p2, &[1, 2]).unwrap();
        let h = p2.generator("H").unwrap();
        assert_eq!(e.dual().euler(), h.pow(2).scale(&rat(2)));
        assert_eq!(e.euler(), h.pow(2).scale(&rat(2)));
    }
}
