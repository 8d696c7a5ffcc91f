use num::One;

use crate::arith::{series_inverse, Monomial, Poly, Rat, VarId};

use super::bundle::Bundle;
use super::maps::{Embedding, RingMap};
use super::variety::{deindex, reindex, BlowupNorm, Class, Rule, Variety, VarietyData};
use super::ChowError;

/// The blowup `ρ: Ỹ -> Y` of a model variety along a regularly embedded
/// center `X` with normal bundle `N`, presented by the generators of `Y`
/// plus the exceptional class `d`.
///
/// Carries the exceptional divisor `D = P(N)` (fiber generator `hD`) and
/// the full set of structure maps: `ρ^*`, `ρ_*`, `j^*`, `j_*`, `ρ̂_*`
/// (the `P(N)`-bundle pushforward `D -> X`) and `ρ'^*`. Pushforward uses
/// the signed Segre convention `ρ_*(d^k · ρ^*y) = (-1)^{k-1} ι_*(s_{k-c}(N) · y|_X)`.
///
/// Construction self-tests: the self-intersection formula
/// `ι^*[X] = e(N)`, `ρ_* ∘ ρ^* = id`, `j^* j_* γ = -hD · γ`, and the
/// blowup push-pull formula `ρ^* ι_* x = j_*(e(Q) · ρ'^* x)` for the
/// excess bundle `Q = ρ'^*N / O(-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Blowup {
    center: Embedding,
    normal: Bundle,
    total: Variety,
    excep: Variety,
    d: VarId,
    h: VarId,
    j_map: RingMap,
}

impl Blowup {
    pub fn new(center: Embedding, normal: Bundle) -> Result<Blowup, ChowError> {
        let ambient = center.ambient().clone();
        let sub = center.sub().clone();
        if normal.base() != &sub {
            return Err(ChowError::BadBlowup(
                "normal bundle must live on the center".into(),
            ));
        }
        let c = center.codim();
        if c < 1 {
            return Err(ChowError::BadBlowup(format!(
                "blowup center must have codimension >= 1, got {c}"
            )));
        }
        if normal.rank() as i64 != c {
            return Err(ChowError::BadBlowup(format!(
                "normal bundle rank {} != codimension {c}",
                normal.rank()
            )));
        }
        // self-intersection formula ι^*ι_*(1) = e(N)
        if center.gysin(center.class()) != normal.euler() {
            return Err(ChowError::BadBlowup(
                "self-intersection of the center disagrees with e(N)".into(),
            ));
        }

        let excep = Variety::proj_bundle(&normal, "hD")?;
        let h = excep.vars().id("hD").unwrap();

        let vars = ambient.vars().extend(&[("d", 1)]);
        let d = vars.id("d").unwrap();
        let rules: Vec<Rule> = ambient_rules(&ambient)
            .iter()
            .map(|r| Rule {
                lead: r.lead.clone(),
                rhs: reindex(&r.rhs, &vars),
            })
            .collect();

        // d^c = (-1)^{c-1} ρ^*[X] - sum_{i=1}^{c-1} (-1)^i ρ^*(lift c_i(N)) d^{c-i}
        let mut dc_rhs = reindex(center.class().poly(), &vars);
        if (c - 1) % 2 == 1 {
            dc_rhs = dc_rhs.scale(&-Rat::one());
        }
        for i in 1..c {
            let ci = center.lift_class(&normal.chern(i));
            let sign = if i % 2 == 1 { -Rat::one() } else { Rat::one() };
            let term = reindex(ci.poly(), &vars)
                .scale(&sign)
                .checked_mul(
                    &Poly::term(&vars, Monomial::var(&vars, d, (c - i) as u32), Rat::one()),
                    None,
                )
                .expect("same table");
            dc_rhs = &dc_rhs - &term;
        }

        // restrict / lift images for the projection next to d
        let mut restrict_images = Vec::with_capacity(vars.len());
        for v in ambient.vars().ids() {
            restrict_images.push(
                center
                    .restrict_map()
                    .apply_poly(&Poly::var(ambient.vars(), v))
                    .poly()
                    .clone(),
            );
        }
        restrict_images.push(Poly::zero(sub.vars())); // d never appears in cofactors
        let lift_images: Vec<Poly> = sub
            .vars()
            .ids()
            .map(|v| {
                reindex(
                    center.lift_map().apply_poly(&Poly::var(sub.vars(), v)).poly(),
                    &vars,
                )
            })
            .collect();

        let total = Variety::with_data(VarietyData {
            name: format!("Bl_{} {}", sub.name(), ambient.name()),
            vars: vars.clone(),
            dim: ambient.dim(),
            rules,
            point: ambient.point_monomial().clone(),
            blow: Some(BlowupNorm {
                d,
                codim: c as u32,
                dc_rhs,
                center: sub.clone(),
                restrict_images,
                lift_images,
            }),
        });

        // j^*: generators of Y restrict to X (pulled to D), d ↦ -hD
        let mut j_images = Vec::with_capacity(vars.len());
        for v in ambient.vars().ids() {
            let on_x = center
                .restrict_map()
                .apply_poly(&Poly::var(ambient.vars(), v));
            j_images.push(excep.class(reindex(on_x.poly(), excep.vars())));
        }
        j_images.push(excep.generator("hD").unwrap().scale(&-Rat::one()));
        let j_map = RingMap::new(&vars, &excep, j_images)?;

        let bl = Blowup {
            center,
            normal,
            total,
            excep,
            d,
            h,
            j_map,
        };
        bl.self_check()?;
        Ok(bl)
    }

    fn self_check(&self) -> Result<(), ChowError> {
        // ρ_* ρ^* = id
        for m in self.base().monomial_basis() {
            let y = self
                .base()
                .class(Poly::term(self.base().vars(), m, Rat::one()));
            if self.pushforward(&self.pullback(&y)) != y {
                return Err(ChowError::BadBlowup(format!(
                    "ρ_* ρ^* differs from the identity on {}",
                    y.render()
                )));
            }
        }
        // excess bundle Q = ρ'^*N/O(-1), e(Q) = sum c_i(N) hD^{c-1-i}
        let c = self.codim() as u32;
        let mut eq = self.excep.zero();
        for i in 0..c {
            let ci = self.excep_pullback(&self.normal.chern(i as i64));
            let hpow = self.excep_hyperplane().pow(c - 1 - i);
            eq = &eq + &(&ci * &hpow);
        }
        for m in self.center.sub().monomial_basis() {
            let x = self
                .center
                .sub()
                .class(Poly::term(self.center.sub().vars(), m, Rat::one()));
            // blowup push-pull formula through the square
            let lhs = self.pullback(&self.center.pushforward(&x));
            let rhs = self.j_pushforward(&(&eq * &self.excep_pullback(&x)));
            if lhs != rhs {
                return Err(ChowError::BadBlowup(format!(
                    "ρ^* ι_* disagrees with j_*(e(Q) ρ'^*-) on {}",
                    x.render()
                )));
            }
        }
        // j^* j_* = -hD
        for m in self.excep.monomial_basis() {
            let g = self
                .excep
                .class(Poly::term(self.excep.vars(), m, Rat::one()));
            let lhs = self.j_pullback(&self.j_pushforward(&g));
            let rhs = &self.excep_hyperplane().scale(&-Rat::one()) * &g;
            if lhs != rhs {
                return Err(ChowError::BadBlowup(format!(
                    "j^* j_* differs from -hD on {}",
                    g.render()
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Variety {
        self.center.ambient()
    }

    pub fn center(&self) -> &Embedding {
        &self.center
    }

    pub fn center_space(&self) -> &Variety {
        self.center.sub()
    }

    pub fn normal(&self) -> &Bundle {
        &self.normal
    }

    /// The blown-up total space `Ỹ`.
    pub fn total(&self) -> &Variety {
        &self.total
    }

    /// The exceptional divisor `D = P(N)` as a variety over the center.
    pub fn excep(&self) -> &Variety {
        &self.excep
    }

    pub fn codim(&self) -> i64 {
        self.center.codim()
    }

    /// The exceptional divisor class `d` on `Ỹ`.
    pub fn exceptional_class(&self) -> Class {
        self.total.generator("d").unwrap()
    }

    /// `hD = c_1(O_{P(N)}(1))` on the exceptional divisor.
    pub fn excep_hyperplane(&self) -> Class {
        self.excep.generator("hD").unwrap()
    }

    /// Flat pullback `ρ^*`.
    pub fn pullback(&self, y: &Class) -> Class {
        assert_eq!(y.variety(), self.base(), "class not on the base");
        self.total.class(reindex(y.poly(), self.total.vars()))
    }

    /// Proper pushforward `ρ_*`, by the signed Segre convention.
    pub fn pushforward(&self, t: &Class) -> Class {
        assert_eq!(t.variety(), &self.total, "class not on the total space");
        let c = self.codim();
        let mut out = self.base().zero();
        for (a, cof) in t.poly().split_by_var(self.d) {
            let q = deindex(&cof, self.base().vars()).expect("cofactor is a base polynomial");
            if a == 0 {
                out = &out + &self.base().class(q);
                continue;
            }
            let x = self.center.restrict_map().apply_poly(&q);
            let seg = self.normal.segre(a as i64 - c);
            let sign = if (a - 1) % 2 == 1 {
                -Rat::one()
            } else {
                Rat::one()
            };
            out = &out + &self.center.pushforward(&(&seg * &x)).scale(&sign);
        }
        out
    }

    /// Gysin restriction `j^*: A(Ỹ) -> A(D)`.
    pub fn j_pullback(&self, t: &Class) -> Class {
        assert_eq!(t.variety(), &self.total, "class not on the total space");
        self.j_map.apply(t)
    }

    /// Pushforward `j_*: A(D) -> A(Ỹ)`, via `j_*(hD^k ρ'^*x) = (-1)^k d^{k+1} ρ^* lift(x)`.
    pub fn j_pushforward(&self, g: &Class) -> Class {
        assert_eq!(g.variety(), &self.excep, "class not on the exceptional divisor");
        let vars = self.total.vars();
        let mut acc = Poly::zero(vars);
        for (k, cof) in g.poly().split_by_var(self.h) {
            let x = deindex(&cof, self.center.sub().vars()).expect("cofactor on the center");
            let lifted = self.center.lift_map().apply_poly(&x);
            let sign = if k % 2 == 1 { -Rat::one() } else { Rat::one() };
            let term = reindex(lifted.poly(), vars)
                .scale(&sign)
                .checked_mul(
                    &Poly::term(vars, Monomial::var(vars, self.d, k + 1), Rat::one()),
                    None,
                )
                .expect("same table");
            acc = &acc + &term;
        }
        self.total.class(acc)
    }

    /// Bundle pushforward `ρ̂_*: A(D) -> A(X)`, `hD^k ↦ s_{k-c+1}(N)`.
    pub fn excep_pushforward(&self, g: &Class) -> Class {
        assert_eq!(g.variety(), &self.excep, "class not on the exceptional divisor");
        let c = self.codim();
        let mut out = self.center.sub().zero();
        for (k, cof) in g.poly().split_by_var(self.h) {
            let x = deindex(&cof, self.center.sub().vars()).expect("cofactor on the center");
            let seg = self.normal.segre(k as i64 - c + 1);
            out = &out + &(&seg * &self.center.sub().class(x));
        }
        out
    }

    /// Flat pullback `ρ'^*: A(X) -> A(D)`.
    pub fn excep_pullback(&self, x: &Class) -> Class {
        assert_eq!(x.variety(), self.center.sub(), "class not on the center");
        self.excep.class(reindex(x.poly(), self.excep.vars()))
    }
}

fn ambient_rules(v: &Variety) -> &[Rule] {
    &v.0.rules
}

/// The localized Euler class `e(V, s)` of a vector bundle with a regular
/// section vanishing on the blowup center, evaluated on a decomposition
/// `ξ = ρ_* α + ι_* β`:
///
/// `e(V,s)(ξ) = ρ̂_*(j^*(e(V̄) · α)) + e(V)|_X · β`,
///
/// where `V̄ = V|_Ỹ / O(D)` so `c(V̄) = c(V)/(1+d)`. Errors when the
/// decomposition does not reassemble to `ξ`.
pub fn localized_euler_blowup(
    v: &Bundle,
    bl: &Blowup,
    xi: &Class,
    alpha: &Class,
    beta: &Class,
) -> Result<Class, ChowError> {
    if v.base() != bl.base() {
        return Err(ChowError::VarietyMismatch(
            v.base().name().to_string(),
            bl.base().name().to_string(),
        ));
    }
    let assembled = &bl.pushforward(alpha) + &bl.center().pushforward(beta);
    if &assembled != xi {
        return Err(ChowError::Domain(format!(
            "decomposition mismatch: ρ_*α + ι_*β = {} but ξ = {}",
            assembled.render(),
            xi.render()
        )));
    }
    let ebar = bar_euler(v, bl, &[]);
    let first = bl.excep_pushforward(&bl.j_pullback(&(&ebar * alpha)));
    let ex = v.restrict(bl.center())?.euler();
    Ok(&first + &(&ex * beta))
}

/// The zero-section degenerate case of the localized Euler class:
/// `s = 0` makes `X = Y` and `e(V, 0) = e(V)`.
pub fn localized_euler_zero_section(v: &Bundle, xi: &Class) -> Result<Class, ChowError> {
    if xi.variety() != v.base() {
        return Err(ChowError::VarietyMismatch(
            xi.variety().name().to_string(),
            v.base().name().to_string(),
        ));
    }
    Ok(&v.euler() * xi)
}

/// Euler class of `V|_Ỹ / (O(D) ⊕ span of dropped roots)` on the total
/// space: the top-degree part of `c(V)/( (1+d) · prod(1+r_i) )`.
pub(crate) fn bar_euler(v: &Bundle, bl: &Blowup, drop: &[usize]) -> Class {
    let total = bl.total();
    let dim = total.dim();
    let mut num = Poly::one(total.vars()).with_cap(Some(dim));
    for (i, r) in v.roots().iter().enumerate() {
        if drop.contains(&i) {
            continue;
        }
        let rt = reindex(r.poly(), total.vars());
        num = &num * &(&Poly::one(total.vars()) + &rt);
    }
    let denom = &Poly::one(total.vars()) + &Poly::var(total.vars(), bl.total().vars().id("d").unwrap());
    let inv = series_inverse(&denom, dim).expect("unit constant term");
    let rank_left = v.rank() - drop.len();
    total
        .class(&num * &inv)
        .component(rank_left as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn bl_point_p2() -> Blowup {
        let p2 = Variety::proj_space(2).unwrap();
        let pt = Variety::point();
        let emb = Embedding::linear(&p2, &pt).unwrap();
        let n = Bundle::trivial(&pt, 2);
        Blowup::new(emb, n).unwrap()
    }

    fn bl_p2_p4() -> Blowup {
        let p4 = Variety::proj_space(4).unwrap();
        let p2 = Variety::proj_space(2).unwrap();
        let emb = Embedding::linear(&p4, &p2).unwrap();
        let n = Bundle::twists(&p2, &[1, 1]).unwrap();
        Blowup::new(emb, n).unwrap()
    }

    #[test]
    fn pushforward_of_exceptional_powers_on_bl_pt_p2() {
        let bl = bl_point_p2();
        let d = bl.exceptional_class();
        // ρ_*(d) = 0 (s_{-1}), ρ_*(d^2) = -[pt]
        assert!(bl.pushforward(&d).is_zero());
        let pt_class = bl.center().class().clone();
        assert_eq!(bl.pushforward(&d.pow(2)), pt_class.scale(&rat(-1)));
    }

    #[test]
    fn exceptional_square_rewrites() {
        let bl = bl_point_p2();
        let d = bl.exceptional_class();
        let h = bl.total().generator("H").unwrap();
        assert_eq!(d.pow(2), h.pow(2).scale(&rat(-1)));
        // d · ρ^*H = 0: the line moves off the point
        assert!((&d * &h).is_zero());
    }

    #[test]
    fn bl_p2_p4_segre_pushforwards() {
        let bl = bl_p2_p4();
        let d = bl.exceptional_class();
        let h = bl.total().generator("H").unwrap();
        // s(N) = 1/(1+H)^2 = 1 - 2H + 3H^2 on P^2
        assert!(bl.pushforward(&d).is_zero());
        assert_eq!(
            bl.pushforward(&d.pow(2)),
            bl.center().pushforward(&bl.center_space().one()).scale(&rat(-1))
        );
        let s1 = bl.center_space().generator("H").unwrap().scale(&rat(-2));
        assert_eq!(bl.pushforward(&d.pow(3)), bl.center().pushforward(&s1));
        // integrate d^4 = -3, H d^3 = -2
        assert_eq!(d.pow(4).integrate(), rat(-3));
        assert_eq!((&h * &d.pow(3)).integrate(), rat(-2));
    }

    #[test]
    fn excep_maps_on_bl_p2_p4() {
        let bl = bl_p2_p4();
        // ρ̂_*(1) = 0, ρ̂_*(hD) = [P^2] (i.e. 1 on the center)
        assert!(bl.excep_pushforward(&bl.excep().one()).is_zero());
        assert_eq!(
            bl.excep_pushforward(&bl.excep_hyperplane()),
            bl.center_space().one()
        );
    }

    #[test]
    fn divisor_center_blowup_is_trivial() {
        // blowing up a hyperplane P^2 ⊂ P^3: d rewrites to H
        let p3 = Variety::proj_space(3).unwrap();
        let p2 = Variety::proj_space(2).unwrap();
        let emb = Embedding::linear(&p3, &p2).unwrap();
        let n = Bundle::twists(&p2, &[1]).unwrap();
        let bl = Blowup::new(emb, n).unwrap();
        let d = bl.exceptional_class();
        let h = bl.total().generator("H").unwrap();
        assert_eq!(d, h);
    }

    #[test]
    fn localized_euler_recovers_center() {
        // V = O(1) on P^2, X = a line: e(V,s)[P^2] = [line]
        let p2 = Variety::proj_space(2).unwrap();
        let p1 = Variety::proj_space(1).unwrap();
        let emb = Embedding::linear(&p2, &p1).unwrap();
        let v = Bundle::twists(&p2, &[1]).unwrap();
        let n = Bundle::twists(&p1, &[1]).unwrap();
        let bl = Blowup::new(emb, n).unwrap();
        let xi = p2.one();
        let alpha = bl.total().one();
        let beta = p1.zero();
        let got = localized_euler_blowup(&v, &bl, &xi, &alpha, &beta).unwrap();
        assert_eq!(got, p1.one());
        // β-only route: e(V)β
        let got2 = localized_euler_blowup(
            &v,
            &bl,
            &bl.center().pushforward(&p1.one()),
            &bl.total().zero(),
            &p1.one(),
        )
        .unwrap();
        assert_eq!(got2, v.restrict(bl.center()).unwrap().euler());
    }

    #[test]
    fn inconsistent_decomposition_rejected() {
        let p2 = Variety::proj_space(2).unwrap();
        let p1 = Variety::proj_space(1).unwrap();
        let emb = Embedding::linear(&p2, &p1).unwrap();
        let v = Bundle::twists(&p2, &[1]).unwrap();
        let n = Bundle::twists(&p1, &[1]).unwrap();
        let bl = Blowup::new(emb, n).unwrap();
        let bad = localized_euler_blowup(&v, &bl, &p2.one(), &bl.total().zero(), &p1.zero());
        assert!(bad.is_err());
    }

    #[test]
    fn inconsistent_normal_bundle_rejected() {
        let p4 = Variety::proj_space(4).unwrap();
        let p2 = Variety::proj_space(2).unwrap();
        let emb = Embedding::linear(&p4, &p2).unwrap();
        let wrong = Bundle::twists(&p2, &[1, 2]).unwrap(); // e = 2H^2 ≠ H^2
        assert!(Blowup::new(emb, wrong).is_err());
    }
}
