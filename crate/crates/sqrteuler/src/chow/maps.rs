use crate::arith::{Poly, VarSet};

use super::variety::{Class, Variety};
use super::ChowError;

/// A ring homomorphism out of a variable table into a variety, given by
/// one image polynomial per source generator.
#[derive(Debug, Clone, PartialEq)]
pub struct RingMap {
    source: VarSet,
    target: Variety,
    images: Vec<Poly>,
}

impl RingMap {
    pub fn new(source: &VarSet, target: &Variety, images: Vec<Class>) -> Result<Self, ChowError> {
        if images.len() != source.len() {
            return Err(ChowError::Domain(format!(
                "ring map needs {} images, got {}",
                source.len(),
                images.len()
            )));
        }
        let mut polys = Vec::with_capacity(images.len());
        for c in images {
            if c.variety() != target {
                return Err(ChowError::VarietyMismatch(
                    c.variety().name().to_string(),
                    target.name().to_string(),
                ));
            }
            polys.push(c.poly().clone());
        }
        Ok(RingMap {
            source: source.clone(),
            target: target.clone(),
            images: polys,
        })
    }

    pub fn source(&self) -> &VarSet {
        &self.source
    }

    pub fn target(&self) -> &Variety {
        &self.target
    }

    pub(crate) fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn apply_poly(&self, p: &Poly) -> Class {
        assert_eq!(p.vars(), &self.source, "polynomial over a foreign table");
        let img = p.substitute(self.target.vars(), &self.images, Some(self.target.dim()));
        self.target.class(img)
    }

    pub fn apply(&self, c: &Class) -> Class {
        self.apply_poly(c.poly())
    }
}

/// A regularly embedded model subvariety `X ⊂ Y` together with the maps
/// the intersection calculus needs: the restriction (Gysin) map, a ring
/// section of it, and the fundamental class `[X]` in the ambient ring.
///
/// Construction verifies `restrict ∘ lift = id` and the projection formula
/// `ι_*(ι^* y · x) = y · ι_* x` on the ambient monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    ambient: Variety,
    sub: Variety,
    restrict: RingMap,
    lift: RingMap,
    class: Class,
}

impl Embedding {
    pub fn new(
        ambient: &Variety,
        sub: &Variety,
        restrict: RingMap,
        lift: RingMap,
        class: Class,
    ) -> Result<Self, ChowError> {
        let codim = ambient.dim() - sub.dim();
        if codim < 0 {
            return Err(ChowError::BadEmbedding(format!(
                "sub has larger dimension than ambient ({} > {})",
                sub.dim(),
                ambient.dim()
            )));
        }
        if restrict.source() != ambient.vars() || restrict.target() != sub {
            return Err(ChowError::BadEmbedding("restriction map shape".into()));
        }
        if lift.source() != sub.vars() || lift.target() != ambient {
            return Err(ChowError::BadEmbedding("lift map shape".into()));
        }
        if class.variety() != ambient {
            return Err(ChowError::BadEmbedding("[X] must live on the ambient".into()));
        }
        if !class.is_zero() && !class.is_homogeneous_of(codim) {
            return Err(ChowError::BadEmbedding(format!(
                "[X] must be homogeneous of degree {codim}"
            )));
        }
        let emb = Embedding {
            ambient: ambient.clone(),
            sub: sub.clone(),
            restrict,
            lift,
            class,
        };
        emb.self_check()?;
        Ok(emb)
    }

    /// The identity embedding of a variety in itself.
    pub fn identity(v: &Variety) -> Result<Self, ChowError> {
        let gens: Vec<Class> = v.vars().ids().map(|i| v.class(Poly::var(v.vars(), i))).collect();
        let restrict = RingMap::new(v.vars(), v, gens.clone())?;
        let lift = RingMap::new(v.vars(), v, gens)?;
        Embedding::new(v, v, restrict, lift, v.one())
    }

    /// The linear embedding `P^k ⊂ P^m`: `H ↦ H`, `[X] = H^{m-k}`.
    pub fn linear(ambient: &Variety, sub: &Variety) -> Result<Self, ChowError> {
        let h_sub = sub
            .generator("H")
            .ok_or_else(|| ChowError::BadEmbedding("sub is not a projective space".into()))?;
        let h_amb = ambient
            .generator("H")
            .ok_or_else(|| ChowError::BadEmbedding("ambient is not a projective space".into()))?;
        let codim = ambient.dim() - sub.dim();
        if codim < 0 {
            return Err(ChowError::BadEmbedding(
                "sub has larger dimension than ambient".into(),
            ));
        }
        let restrict = RingMap::new(ambient.vars(), sub, vec![h_sub])?;
        let lift = RingMap::new(sub.vars(), ambient, vec![h_amb.clone()])?;
        Embedding::new(ambient, sub, restrict, lift, h_amb.pow(codim as u32))
    }

    fn self_check(&self) -> Result<(), ChowError> {
        // restrict ∘ lift = id on the sub generators
        for v in self.sub.vars().ids() {
            let gen = Poly::var(self.sub.vars(), v);
            let back = self.restrict.apply(&self.lift.apply_poly(&gen));
            if back != self.sub.class(gen) {
                return Err(ChowError::BadEmbedding(format!(
                    "restrict(lift({})) differs from the generator",
                    self.sub.vars().name(v)
                )));
            }
        }
        // projection formula on the ambient monomial basis
        for m in self.ambient.monomial_basis() {
            let y = self
                .ambient
                .class(Poly::term(self.ambient.vars(), m, num::One::one()));
            let lhs = self.pushforward(&self.restrict.apply(&y));
            let rhs = &y * &self.class;
            if lhs != rhs {
                return Err(ChowError::BadEmbedding(format!(
                    "projection formula fails on {}",
                    y.render()
                )));
            }
        }
        Ok(())
    }

    pub fn ambient(&self) -> &Variety {
        &self.ambient
    }

    pub fn sub(&self) -> &Variety {
        &self.sub
    }

    pub fn codim(&self) -> i64 {
        self.ambient.dim() - self.sub.dim()
    }

    /// The fundamental class `[X]` in the ambient ring.
    pub fn class(&self) -> &Class {
        &self.class
    }

    pub(crate) fn restrict_map(&self) -> &RingMap {
        &self.restrict
    }

    pub(crate) fn lift_map(&self) -> &RingMap {
        &self.lift
    }

    /// Gysin restriction `ι^!`: on these smooth models, the ring restriction.
    pub fn gysin(&self, y: &Class) -> Class {
        assert_eq!(y.variety(), &self.ambient, "class not on the ambient");
        self.restrict.apply(y)
    }

    /// Proper pushforward `ι_* x = lift(x) · [X]`.
    pub fn pushforward(&self, x: &Class) -> Class {
        assert_eq!(x.variety(), &self.sub, "class not on the sub");
        &self.lift.apply(x) * &self.class
    }

    /// Lift a class through the ring section (no multiplication by `[X]`).
    pub fn lift_class(&self, x: &Class) -> Class {
        self.lift.apply(x)
    }

    /// The composite embedding `W ⊂ X ⊂ Y` from `W ⊂ X` and `self: X ⊂ Y`.
    pub fn compose(&self, inner: &Embedding) -> Result<Embedding, ChowError> {
        if inner.ambient() != self.sub() {
            return Err(ChowError::BadEmbedding(
                "composition needs inner.ambient = outer.sub".into(),
            ));
        }
        let restrict = RingMap::new(
            self.ambient.vars(),
            inner.sub(),
            self.ambient
                .vars()
                .ids()
                .map(|v| inner.restrict.apply_poly(&self.restrict.images()[v.index()].clone()))
                .collect(),
        )?;
        let lift = RingMap::new(
            inner.sub().vars(),
            &self.ambient,
            inner
                .sub()
                .vars()
                .ids()
                .map(|v| self.lift.apply_poly(&inner.lift.images()[v.index()].clone()))
                .collect(),
        )?;
        let class = self.pushforward(inner.class());
        Embedding::new(&self.ambient, inner.sub(), restrict, lift, class)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn linear_subspace_maps() {
        let p4 = Variety::proj_space(4).unwrap();
        let p2 = Variety::proj_space(2).unwrap();
        let emb = Embedding::linear(&p4, &p2).unwrap();
        assert_eq!(emb.codim(), 2);
        let h4 = p4.generator("H").unwrap();
        let h2 = p2.generator("H").unwrap();
        // ι_*(H_X^j) = H^{2+j}
        assert_eq!(emb.pushforward(&h2.pow(1)), h4.pow(3));
        assert_eq!(emb.gysin(&h4.pow(3)), p2.zero());
        assert_eq!(emb.gysin(&h4), h2);
    }

    #[test]
    fn conic_in_p2_with_rational_lift() {
        // degree-2 curve in P^2, abstractly P^1 with H|_C = 2h
        let p2 = Variety::proj_space(2).unwrap();
        let p1 = Variety::proj_space(1).unwrap();
        let h1 = p1.generator("H").unwrap();
        let h2 = p2.generator("H").unwrap();
        let restrict = RingMap::new(p2.vars(), &p1, vec![h1.scale(&rat(2))]).unwrap();
        let lift = RingMap::new(p1.vars(), &p2, vec![h2.scale(&ratio(1, 2))]).unwrap();
        let emb = Embedding::new(&p2, &p1, restrict, lift, h2.scale(&rat(2))).unwrap();
        // ι_*(1) = 2H, ι_*(h) = H^2
        assert_eq!(emb.pushforward(&p1.one()), h2.scale(&rat(2)));
        assert_eq!(emb.pushforward(&h1), h2.pow(2));
    }

    #[test]
    fn composition_of_linear_embeddings() {
        let p4 = Variety::proj_space(4).unwrap();
        let p3 = Variety::proj_space(3).unwrap();
        let p1 = Variety::proj_space(1).unwrap();
        let outer = Embedding::linear(&p4, &p3).unwrap();
        let inner = Embedding::linear(&p3, &p1).unwrap();
        let both = outer.compose(&inner).unwrap();
        let direct = Embedding::linear(&p4, &p1).unwrap();
        assert_eq!(both.class(), direct.class());
    }
}
