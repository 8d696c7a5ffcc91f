//! Presented K-rings of the model varieties and the K-theoretic blowup.
//!
//! `K(P^n) = Q[l]/(l^{n+1})` with `l = 1 - [O(-1)]` the class of a
//! hyperplane structure sheaf. The exceptional divisor `D = P(N)` carries
//! the variable `w = 1 - [O_{P(N)}(-1)]` subject to the Koszul relation
//! `Σ (-1)^i [Λ^i N∨] (1-w)^i = 0`, and the blown-up ring carries
//! `lD = [O_D] = 1 - [O(-D)]` with the degree-c relation derived from the
//! K-theoretic excess formula `ρ^*ι_*x = j_*(𝔢(Q)·ρ'^*x)`,
//! `Q = ρ'^*N/O(-1)`. Pushforwards:
//!
//! * `j_*(w^k·x) = (-1)^k lift(x)·lD^{k+1}·(1-lD)^{-k}`
//! * `p_!(w^k·x) = x + Σ_{j=c}^{k} (-1)^{j+c-1} C(k,j) [Sym^{j-c}N⊗det N]·x`
//! * `ρ_*(lD^a·ρ^*y) = ι_*( p_!((j^*lD)^{a-1})·y|_X )`

use num::One;

use crate::arith::{binomial, rat, series_inverse, Monomial, Poly, Rat, VarId, VarSet};
use crate::chow::{
    deindex, reindex, BlowupNorm, Embedding, RingMap, Rule, Variety, VarietyData,
};

use super::{
    dual_line, euler_k, lambda_class, sqrt_line, sym_class, KBundle, KClass, KError, KOrthBundle,
};

/// `K(P^n)`: one augmentation variable `l` with `l^{n+1} = 0`.
pub fn kproj_space(n: i64) -> Result<Variety, KError> {
    if n < 0 {
        return Err(KError::Domain(format!(
            "projective space needs n >= 0, got {n}"
        )));
    }
    let vars = VarSet::new(&[("l", 1)]);
    let l = vars.id("l").unwrap();
    let rules = vec![Rule {
        lead: Monomial::var(&vars, l, n as u32 + 1),
        rhs: Poly::zero(&vars),
    }];
    let point = Monomial::var(&vars, l, n as u32);
    Ok(Variety::with_data(VarietyData {
        name: format!("K(P{n})"),
        vars,
        dim: n,
        rules,
        point,
        blow: None,
    }))
}

/// `[O(a)]` on a K-ring with augmentation variable `l`.
pub fn twist_line(ring: &Variety, a: i64) -> Result<KClass, KError> {
    let l = ring
        .generator("l")
        .ok_or_else(|| KError::Domain("ring has no augmentation variable l".into()))?;
    let base = &ring.one() - &l; // [O(-1)]
    if a <= 0 {
        Ok(base.pow((-a) as u32))
    } else {
        dual_line(&base.pow(a as u32))
    }
}

/// The linear K-embedding `P^k ⊂ P^m`: `l ↦ l`, `[O_X] = l^{m-k}`.
pub fn klinear(ambient: &Variety, sub: &Variety) -> Result<Embedding, KError> {
    let l_sub = sub
        .generator("l")
        .ok_or_else(|| KError::Domain("sub is not a projective K-ring".into()))?;
    let l_amb = ambient
        .generator("l")
        .ok_or_else(|| KError::Domain("ambient is not a projective K-ring".into()))?;
    let codim = ambient.dim() - sub.dim();
    if codim < 0 {
        return Err(KError::Domain("sub has larger dimension".into()));
    }
    let restrict = RingMap::new(ambient.vars(), sub, vec![l_sub])?;
    let lift = RingMap::new(sub.vars(), ambient, vec![l_amb.clone()])?;
    Ok(Embedding::new(
        ambient,
        sub,
        restrict,
        lift,
        l_amb.pow(codim as u32),
    )?)
}

/// `K(P(N))` for a split bundle `N` on a K-ring `X`: the Koszul relation
/// in the variable `w = 1 - [O(-1)]`.
fn kproj_bundle_ring(n: &KBundle, w_name: &str) -> Result<Variety, KError> {
    let x = n.ring();
    let c = n.rank();
    if c == 0 {
        return Err(KError::Domain("projective bundle of rank 0".into()));
    }
    if x.vars().id(w_name).is_some() {
        return Err(KError::Domain(format!("generator {w_name} already used")));
    }
    let vars = x.vars().extend(&[(w_name, 1)]);
    let w = vars.id(w_name).unwrap();
    let dim = x.dim() + c as i64 - 1;

    // Koszul: sum_i (-1)^i [Λ^i N∨] (1-w)^i = 0
    let duals: Vec<KClass> = n
        .lines()
        .iter()
        .map(dual_line)
        .collect::<Result<Vec<_>, _>>()?;
    let one_minus_w = &Poly::one(&vars) - &Poly::var(&vars, w);
    let mut koszul = Poly::zero(&vars);
    for i in 0..=c {
        let li = lambda_class(x, &duals, i);
        let term = reindex(li.poly(), &vars)
            .checked_mul(&one_minus_w.pow(i as u32), Some(dim))
            .expect("same table");
        if i % 2 == 0 {
            koszul = &koszul + &term;
        } else {
            koszul = &koszul - &term;
        }
    }
    let mut rules: Vec<Rule> = x
        .rules_cloned()
        .into_iter()
        .map(|r| Rule {
            lead: r.lead,
            rhs: reindex(&r.rhs, &vars),
        })
        .collect();
    // solve for w^c (leading coefficient [det N∨], a unit); when c exceeds
    // the nilpotence cap the relation is vacuous and no rule is needed
    let mut groups = koszul.split_by_var(w);
    if let Some(lead) = groups.remove(&(c as u32)) {
        let lead_inv = series_inverse(&lead, dim)?;
        let mut rhs = Poly::zero(&vars);
        for (k, q) in groups {
            let term = q
                .checked_mul(&lead_inv, Some(dim))
                .expect("same table")
                .checked_mul(
                    &Poly::term(&vars, Monomial::var(&vars, w, k), Rat::one()),
                    Some(dim),
                )
                .expect("same table");
            rhs = &rhs - &term;
        }
        rules.push(Rule {
            lead: Monomial::var(&vars, w, c as u32),
            rhs,
        });
    } else if (c as i64) <= dim {
        return Err(KError::Domain(
            "Koszul relation lost its leading w-power".into(),
        ));
    }
    let point = x.point_monomial().mul(&Monomial::var(&vars, w, c as u32 - 1));
    Ok(Variety::with_data(VarietyData {
        name: format!("K(P({} over {}))", c, x.name()),
        vars,
        dim,
        rules,
        point,
        blow: None,
    }))
}

/// The K-theory of a blowup along a regularly embedded center, mirroring
/// the Chow-level [`crate::chow::Blowup`] one level up.
#[derive(Debug, Clone)]
pub struct KBlowup {
    center: Embedding,
    normal: KBundle,
    total: Variety,
    excep: Variety,
    ld: VarId,
    w: VarId,
    j_map: RingMap,
}

impl KBlowup {
    #[doc(hidden)]
    pub fn new_unchecked_debug(center: Embedding, normal: KBundle) -> Result<KBlowup, KError> {
        Self::build(center, normal)
    }

    pub fn new(center: Embedding, normal: KBundle) -> Result<KBlowup, KError> {
        let kbl = Self::build(center, normal)?;
        kbl.self_check()?;
        Ok(kbl)
    }

    fn build(center: Embedding, normal: KBundle) -> Result<KBlowup, KError> {
        let ambient = center.ambient().clone();
        let sub = center.sub().clone();
        if normal.ring() != &sub {
            return Err(KError::Domain("normal bundle must live on the center".into()));
        }
        let c = center.codim();
        if c < 1 || normal.rank() as i64 != c {
            return Err(KError::Domain(format!(
                "normal bundle rank {} must equal the codimension {c} >= 1",
                normal.rank()
            )));
        }

        let excep = kproj_bundle_ring(&normal, "w")?;
        let w = excep.vars().id("w").unwrap();

        let vars = ambient.vars().extend(&[("lD", 1)]);
        let ld = vars.id("lD").unwrap();
        let dim = ambient.dim();
        let rules: Vec<Rule> = ambient
            .rules_cloned()
            .into_iter()
            .map(|r| Rule {
                lead: r.lead,
                rhs: reindex(&r.rhs, &vars),
            })
            .collect();

        // excess bundle class 𝔢(Q) on D, in the w-basis
        let duals: Vec<KClass> = normal
            .lines()
            .iter()
            .map(dual_line)
            .collect::<Result<Vec<_>, _>>()?;
        let v_class = {
            // v = [O(1)] = (1-w)^{-1}
            let one_minus_w = &excep.one() - &excep.generator("w").unwrap();
            excep.class(series_inverse(one_minus_w.poly(), excep.dim())?)
        };
        let mut eq = excep.zero();
        for i in 0..c as usize {
            // Λ^i(Q∨) = Σ_k (-1)^k Λ^{i-k}(N∨) v^k
            let mut li = excep.zero();
            for k in 0..=i {
                let lam = lambda_class(&sub, &duals, i - k);
                let lam_d = excep.class(reindex(lam.poly(), excep.vars()));
                let term = &lam_d * &v_class.pow(k as u32);
                if k % 2 == 0 {
                    li = &li + &term;
                } else {
                    li = &li - &term;
                }
            }
            if i % 2 == 0 {
                eq = &eq + &li;
            } else {
                eq = &eq - &li;
            }
        }

        // the lD^c relation from (1-lD)^{c-1}·[O_X] = Σ_k (-1)^k g̃_k lD^{k+1} (1-lD)^{c-1-k}
        let g = eq.poly().split_by_var(w);
        let one_minus_ld = &Poly::one(&vars) - &Poly::var(&vars, ld);
        let mut p_poly = Poly::zero(&vars);
        let mut s_sum = Poly::zero(&vars);
        for (k, gk) in &g {
            let gk_x = deindex(gk, sub.vars()).expect("coefficient on the center");
            let lifted = reindex(center.lift_map().apply_poly(&gk_x).poly(), &vars);
            s_sum = &s_sum + &lifted;
            let sign = if k % 2 == 1 { -Rat::one() } else { Rat::one() };
            let term = lifted
                .scale(&sign)
                .checked_mul(
                    &Poly::term(&vars, Monomial::var(&vars, ld, k + 1), Rat::one()),
                    None,
                )
                .expect("same table")
                .checked_mul(&one_minus_ld.pow(c as u32 - 1 - k), None)
                .expect("same table");
            p_poly = &p_poly + &term;
        }
        if (c - 1) % 2 == 1 {
            s_sum = s_sum.scale(&-Rat::one());
        }
        if s_sum.constant_term() == rat(0) {
            return Err(KError::Domain(
                "excess class is not a unit; blowup relation cannot be solved".into(),
            ));
        }
        let s_inv = series_inverse(&s_sum, dim)?;
        let class_x = reindex(center.class().poly(), &vars);
        let lhs = class_x
            .checked_mul(&one_minus_ld.pow(c as u32 - 1), Some(dim))
            .expect("same table");
        let ld_c = Poly::term(&vars, Monomial::var(&vars, ld, c as u32), Rat::one());
        let bracket = &(&lhs - &p_poly) + &s_sum.checked_mul(&ld_c, Some(dim)).expect("same table");
        let dc_rhs = s_inv.checked_mul(&bracket, Some(dim)).expect("same table");

        // restrict / lift images for the π-projection
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
        restrict_images.push(Poly::zero(sub.vars()));
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
            name: format!("K(Bl_{} {})", sub.name(), ambient.name()),
            vars: vars.clone(),
            dim,
            rules,
            point: ambient.point_monomial().clone(),
            blow: Some(BlowupNorm {
                d: ld,
                codim: c as u32,
                dc_rhs,
                center: sub.clone(),
                restrict_images,
                lift_images,
            }),
        });

        // j^*: generators restrict, lD ↦ 1 - (1-w)^{-1}
        let mut j_images = Vec::with_capacity(vars.len());
        for v in ambient.vars().ids() {
            let on_x = center
                .restrict_map()
                .apply_poly(&Poly::var(ambient.vars(), v));
            j_images.push(excep.class(reindex(on_x.poly(), excep.vars())));
        }
        j_images.push(&excep.one() - &v_class);
        let j_map = RingMap::new(&vars, &excep, j_images)?;

        Ok(KBlowup {
            center,
            normal,
            total,
            excep,
            ld,
            w,
            j_map,
        })
    }

    fn self_check(&self) -> Result<(), KError> {
        for m in self.base().monomial_basis() {
            let y = self.base().class(Poly::term(self.base().vars(), m, Rat::one()));
            if self.pushforward(&self.pullback(&y)) != y {
                return Err(KError::Domain(format!(
                    "K-blowup: ρ_* ρ^* differs from the identity on {}",
                    y.render()
                )));
            }
        }
        // push-pull: ρ^* ι_* x = j_*(𝔢(Q)·ρ'^* x)
        let eq = self.excess_euler()?;
        for m in self.center.sub().monomial_basis() {
            let x = self
                .center
                .sub()
                .class(Poly::term(self.center.sub().vars(), m, Rat::one()));
            let lhs = self.pullback(&self.center.pushforward(&x));
            let rhs = self.j_pushforward(&(&eq * &self.excep_pullback(&x)));
            if lhs != rhs {
                return Err(KError::Domain(format!(
                    "K-blowup: ρ^* ι_* disagrees with j_*(𝔢(Q) ρ'^* -) on {}",
                    x.render()
                )));
            }
        }
        // j^* j_* γ = γ · j^*(lD)
        let jld = self.j_pullback(&self.exceptional_class());
        for m in self.excep.monomial_basis() {
            let g = self.excep.class(Poly::term(self.excep.vars(), m, Rat::one()));
            let lhs = self.j_pullback(&self.j_pushforward(&g));
            if lhs != &g * &jld {
                return Err(KError::Domain(format!(
                    "K-blowup: j^* j_* differs from multiplication by j^*[O_D] on {}",
                    g.render()
                )));
            }
        }
        Ok(())
    }

    /// `𝔢(Q)` of the excess bundle `Q = ρ'^*N/O(-1)` on `D`.
    fn excess_euler(&self) -> Result<KClass, KError> {
        let duals: Vec<KClass> = self
            .normal
            .lines()
            .iter()
            .map(dual_line)
            .collect::<Result<Vec<_>, _>>()?;
        let one_minus_w = &self.excep.one() - &self.excep.generator("w").unwrap();
        let v_class = self
            .excep
            .class(series_inverse(one_minus_w.poly(), self.excep.dim())?);
        let c = self.codim() as usize;
        let mut eq = self.excep.zero();
        for i in 0..c {
            let mut li = self.excep.zero();
            for k in 0..=i {
                let lam = lambda_class(self.center.sub(), &duals, i - k);
                let lam_d = self.excep.class(reindex(lam.poly(), self.excep.vars()));
                let term = &lam_d * &v_class.pow(k as u32);
                if k % 2 == 0 {
                    li = &li + &term;
                } else {
                    li = &li - &term;
                }
            }
            if i % 2 == 0 {
                eq = &eq + &li;
            } else {
                eq = &eq - &li;
            }
        }
        Ok(eq)
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

    pub fn normal(&self) -> &KBundle {
        &self.normal
    }

    pub fn total(&self) -> &Variety {
        &self.total
    }

    pub fn excep(&self) -> &Variety {
        &self.excep
    }

    pub fn codim(&self) -> i64 {
        self.center.codim()
    }

    /// `[O_D] = lD` on the blown-up ring.
    pub fn exceptional_class(&self) -> KClass {
        self.total.generator("lD").unwrap()
    }

    /// `[O_Ỹ(D)] = (1 - lD)^{-1}`.
    pub fn exceptional_line(&self) -> Result<KClass, KError> {
        let base = &self.total.one() - &self.exceptional_class();
        dual_line(&base)
    }

    pub fn pullback(&self, y: &KClass) -> KClass {
        assert_eq!(y.variety(), self.base(), "class not on the base");
        self.total.class(reindex(y.poly(), self.total.vars()))
    }

    /// `Rρ_*`: the derived pushforward down the blowup.
    pub fn pushforward(&self, t: &KClass) -> KClass {
        assert_eq!(t.variety(), &self.total, "class not on the total space");
        let mut out = self.base().zero();
        let jld = self.j_pullback(&self.exceptional_class());
        for (a, cof) in t.poly().split_by_var(self.ld) {
            let q = deindex(&cof, self.base().vars()).expect("cofactor is a base polynomial");
            if a == 0 {
                out = &out + &self.base().class(q);
                continue;
            }
            let x = self.center.restrict_map().apply_poly(&q);
            let pk = self.excep_pushforward(&jld.pow(a - 1));
            out = &out + &self.center.pushforward(&(&pk * &x));
        }
        out
    }

    pub fn j_pullback(&self, t: &KClass) -> KClass {
        assert_eq!(t.variety(), &self.total, "class not on the total space");
        self.j_map.apply(t)
    }

    /// `j_*(w^k·x) = (-1)^k lift(x) · lD^{k+1} · (1-lD)^{-k}`.
    pub fn j_pushforward(&self, g: &KClass) -> KClass {
        assert_eq!(g.variety(), &self.excep, "class not on the exceptional divisor");
        let vars = self.total.vars();
        let dim = self.total.dim();
        let one_minus_ld = &Poly::one(vars) - &Poly::var(vars, self.ld);
        let inv = series_inverse(&one_minus_ld, dim).expect("unit");
        let mut acc = Poly::zero(vars);
        for (k, cof) in g.poly().split_by_var(self.w) {
            let x = deindex(&cof, self.center.sub().vars()).expect("cofactor on the center");
            let lifted = reindex(self.center.lift_map().apply_poly(&x).poly(), vars);
            let sign = if k % 2 == 1 { -Rat::one() } else { Rat::one() };
            let term = lifted
                .scale(&sign)
                .checked_mul(
                    &Poly::term(vars, Monomial::var(vars, self.ld, k + 1), Rat::one()),
                    Some(dim),
                )
                .expect("same table")
                .checked_mul(&inv.pow(k), Some(dim))
                .expect("same table");
            acc = &acc + &term;
        }
        self.total.class(acc)
    }

    /// `p_! : K(D) -> K(X)`, on the `w`-basis.
    pub fn excep_pushforward(&self, g: &KClass) -> KClass {
        assert_eq!(g.variety(), &self.excep, "class not on the exceptional divisor");
        let x_ring = self.center.sub().clone();
        let c = self.codim() as u64;
        let det_n = self.normal.det();
        let mut out = x_ring.zero();
        for (k, cof) in g.poly().split_by_var(self.w) {
            let x = x_ring.class(deindex(&cof, x_ring.vars()).expect("cofactor on the center"));
            let mut val = x.clone();
            for j in c..=k as u64 {
                let sym = sym_class(&x_ring, self.normal.lines(), (j - c) as usize);
                let coeff = Rat::from_integer(binomial(k as u64, j))
                    * if (j + c - 1) % 2 == 1 {
                        -Rat::one()
                    } else {
                        Rat::one()
                    };
                val = &val + &(&(&sym * &det_n) * &x).scale(&coeff);
            }
            out = &out + &val;
        }
        out
    }

    pub fn excep_pullback(&self, x: &KClass) -> KClass {
        assert_eq!(x.variety(), self.center.sub(), "class not on the center");
        self.excep.class(reindex(x.poly(), self.excep.vars()))
    }
}

/// The localized K-theoretic square-root Euler class
/// `√𝔢(F,s)(ρ_*α + ι_*β) = ρ̂_* j^*( √L · √𝔢(F̃) · α ) + √𝔢(F) β`
/// evaluated on a model blowup, with `L = O(D)` and
/// `√𝔢(F̃) = sign · √det(V/L) · 𝔢(V/L)`.
pub fn sqrt_euler_k_localized(
    f: &KOrthBundle,
    kbl: &KBlowup,
    xi: &KClass,
    alpha: &KClass,
    beta: &KClass,
) -> Result<KClass, KError> {
    if f.ring() != kbl.base() {
        return Err(KError::Domain("F must live on the base K-ring".into()));
    }
    let assembled = &kbl.pushforward(alpha) + &kbl.center().pushforward(beta);
    if &assembled != xi {
        return Err(KError::Domain(format!(
            "decomposition mismatch: ρ_*α + ι_*β = {} but ξ = {}",
            assembled.render(),
            xi.render()
        )));
    }
    let sqrt_l = sqrt_line(&kbl.exceptional_line()?)?;
    let tilde = sqrt_euler_tilde(f, kbl, &[])?;
    let first = kbl.excep_pushforward(&kbl.j_pullback(&(&(&sqrt_l * &tilde) * alpha)));
    let second = &f.restrict(kbl.center())?.sqrt_euler()? * beta;
    Ok(&first + &second)
}

/// `√𝔢` of the reduction of `F|_Ỹ` by `L = O(D)` and the given dropped
/// lines: `sign · √det(V/(L⊕W)) · 𝔢(V/(L⊕W))` on the total ring.
fn sqrt_euler_tilde(f: &KOrthBundle, kbl: &KBlowup, drop: &[usize]) -> Result<KClass, KError> {
    let total = kbl.total();
    let dim = total.dim();
    let lines: Vec<KClass> = f
        .positive_part()
        .lines()
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, l)| total.class(reindex(l.poly(), total.vars())))
        .collect();
    let m = lines.len();
    if m == 0 {
        return Err(KError::Domain(
            "reduction by O(D) needs V of positive rank".into(),
        ));
    }
    let o_minus_d = &total.one() - &kbl.exceptional_class(); // [O(-D)]
    // det(V/L) = det(V') ⊗ O(-D)
    let mut det = o_minus_d.clone();
    for l in &lines {
        det = &det * l;
    }
    let sqrt_det = sqrt_line(&det)?;
    // 𝔢(V'/L) = Σ_i (-1)^i Λ^i((V'/L)∨), Λ^i = Σ_k (-1)^k Λ^{i-k}(V'∨)·[O(-D)]^k
    let duals: Vec<KClass> = lines
        .iter()
        .map(|l| Ok(total.class(series_inverse(l.poly(), dim)?)))
        .collect::<Result<Vec<_>, KError>>()?;
    let mut euler = total.zero();
    for i in 0..m {
        let mut li = total.zero();
        for k in 0..=i {
            let lam = lambda_class(total, &duals, i - k);
            let term = &lam * &o_minus_d.pow(k as u32);
            if k % 2 == 0 {
                li = &li + &term;
            } else {
                li = &li - &term;
            }
        }
        if i % 2 == 0 {
            euler = &euler + &li;
        } else {
            euler = &euler - &li;
        }
    }
    Ok((&sqrt_det * &euler).scale(&f.orientation().rat()))
}

/// Model data for the K-theoretic two-section localization (the analogue
/// of the Chow-level `TwoSectionModel`).
#[derive(Debug, Clone)]
pub struct KTwoSectionModel {
    z: Embedding,
    xz_in_x: Embedding,
    dz: Variety,
    from_d: RingMap,
    normal_xz: KBundle,
}

impl KTwoSectionModel {
    pub fn new(kbl: &KBlowup, z: Embedding, xz_in_x: Embedding) -> Result<Self, KError> {
        if z.ambient() != kbl.base() {
            return Err(KError::Domain("Z must be embedded in the base".into()));
        }
        if xz_in_x.ambient() != kbl.center_space() {
            return Err(KError::Domain("X∩Z must be embedded in the center".into()));
        }
        let xz_in_y = kbl.center().compose(&xz_in_x)?;
        if xz_in_y.class() != &(kbl.center().class() * z.class()) {
            return Err(KError::Domain(
                "X and Z are not transverse: [O_{X∩Z}] ≠ [O_X]·[O_Z]".into(),
            ));
        }
        let normal_xz = kbl.normal().restrict(&xz_in_x)?;
        let dz = kproj_bundle_ring(&normal_xz, "w")?;
        let d_vars = kbl.excep().vars();
        let mut images: Vec<KClass> = Vec::with_capacity(d_vars.len());
        for v in kbl.center_space().vars().ids() {
            let on_xz = xz_in_x
                .restrict_map()
                .apply_poly(&Poly::var(kbl.center_space().vars(), v));
            images.push(dz.class(reindex(on_xz.poly(), dz.vars())));
        }
        images.push(dz.generator("w").unwrap());
        let from_d = RingMap::new(d_vars, &dz, images)?;
        Ok(KTwoSectionModel {
            z,
            xz_in_x,
            dz,
            from_d,
            normal_xz,
        })
    }

    pub fn intersection(&self) -> &Variety {
        self.xz_in_x.sub()
    }

    pub fn intersection_in_x(&self) -> &Embedding {
        &self.xz_in_x
    }

    fn dz_push(&self, g: &KClass) -> KClass {
        let w = self.dz.vars().id("w").unwrap();
        let c = self.normal_xz.rank() as u64;
        let det_n = self.normal_xz.det();
        let ring = self.intersection().clone();
        let mut out = ring.zero();
        for (k, cof) in g.poly().split_by_var(w) {
            let x = ring.class(deindex(&cof, ring.vars()).expect("cofactor on X∩Z"));
            let mut val = x.clone();
            for j in c..=k as u64 {
                let sym = sym_class(&ring, self.normal_xz.lines(), (j - c) as usize);
                let coeff = Rat::from_integer(binomial(k as u64, j))
                    * if (j + c - 1) % 2 == 1 {
                        -Rat::one()
                    } else {
                        Rat::one()
                    };
                val = &val + &(&(&sym * &det_n) * &x).scale(&coeff);
            }
            out = &out + &val;
        }
        out
    }
}

/// K-theoretic localization by two independent sections,
/// `√𝔢(F,s;t)(ρ_*α+ι_*β) = ρ''_* √𝔢(F̃,t̃) j^*(√L·α) + ι''_* √𝔢(F,t) β`,
/// for sections valued in disjoint line sets of `V` (`s` in `s_lines`
/// with zero locus the blowup center, `t` in `t_lines` with zero locus
/// `Z`). Lands on `X ∩ Z`.
#[allow(clippy::too_many_arguments)]
pub fn sqrt_euler_k_two_sections(
    f: &KOrthBundle,
    s_lines: &[usize],
    t_lines: &[usize],
    kbl: &KBlowup,
    model: &KTwoSectionModel,
    xi: &KClass,
    alpha: &KClass,
    beta: &KClass,
) -> Result<KClass, KError> {
    if s_lines.iter().any(|i| t_lines.contains(i)) {
        return Err(KError::Domain(
            "sections must occupy disjoint line sets".into(),
        ));
    }
    let assembled = &kbl.pushforward(alpha) + &kbl.center().pushforward(beta);
    if &assembled != xi {
        return Err(KError::Domain(format!(
            "decomposition mismatch: ρ_*α + ι_*β = {} but ξ = {}",
            assembled.render(),
            xi.render()
        )));
    }
    let v = f.positive_part();
    let sign = f.orientation().rat();

    // ι''_* √𝔢(F,t) β = [√det(W_t)·√det(V∖W_t)·𝔢(V∖W_t)]|_{X∩Z} · β|_{X∩Z} · sign
    let wt_on_x = v.select(t_lines).restrict(kbl.center())?;
    let rest_on_x = v.drop_lines(t_lines).restrict(kbl.center())?;
    let factor_x = &(&sqrt_line(&wt_on_x.det())? * &sqrt_line(&rest_on_x.det())?)
        * &euler_k(&rest_on_x)?;
    let term2 = (&model.intersection_in_x().gysin(&factor_x)
        * &model.intersection_in_x().gysin(beta))
        .scale(&sign);

    // ρ''_* √𝔢(F̃,t̃) j^*(√L·α)
    let sqrt_l = sqrt_line(&kbl.exceptional_line()?)?;
    let wt_total = {
        let total = kbl.total();
        let lines: Vec<KClass> = t_lines
            .iter()
            .map(|&i| total.class(reindex(v.lines()[i].poly(), total.vars())))
            .collect();
        KBundle::new(total, lines)?
    };
    let tilde_rest = sqrt_euler_tilde(f, kbl, t_lines)?;
    let m_total = &(&sqrt_line(&wt_total.det())? * &tilde_rest) * &(&sqrt_l * alpha);
    let on_d = kbl.j_pullback(&m_total);
    let on_dz = model.from_d.apply(&on_d);
    let term1 = model.dz_push(&on_dz);
    Ok(&term1 + &term2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kproj_normalization() {
        let k2 = kproj_space(2).unwrap();
        let l = k2.generator("l").unwrap();
        assert!(l.pow(3).is_zero());
        // [O(1)]·[O(-1)] = 1
        let o1 = twist_line(&k2, 1).unwrap();
        let om1 = twist_line(&k2, -1).unwrap();
        assert_eq!(&o1 * &om1, k2.one());
    }

    #[test]
    fn klinear_projection_formula() {
        let k4 = kproj_space(4).unwrap();
        let k2 = kproj_space(2).unwrap();
        let emb = klinear(&k4, &k2).unwrap();
        // [O_{P^2}] = l^2
        let l = k4.generator("l").unwrap();
        assert_eq!(emb.class(), &l.pow(2));
        assert_eq!(emb.pushforward(&k2.one()), l.pow(2));
    }

    #[test]
    fn kblowup_point_in_p2() {
        let k2 = kproj_space(2).unwrap();
        let k0 = kproj_space(0).unwrap();
        let emb = klinear(&k2, &k0).unwrap();
        let n = KBundle::new(&k0, vec![k0.one(), k0.one()]).unwrap();
        let kbl = KBlowup::new(emb, n).unwrap();
        let ld = kbl.exceptional_class();
        // Rρ_*[O_D] = [O_pt], Rρ_*(lD^2) = -[O_pt]
        let pt = kbl.center().class().clone();
        assert_eq!(kbl.pushforward(&ld), pt);
        assert_eq!(kbl.pushforward(&ld.pow(2)), pt.scale(&crate::arith::rat(-1)));
    }

    #[test]
    fn kblowup_p2_in_p4() {
        let k4 = kproj_space(4).unwrap();
        let k2 = kproj_space(2).unwrap();
        let emb = klinear(&k4, &k2).unwrap();
        let n = KBundle::new(
            &k2,
            vec![twist_line(&k2, 1).unwrap(), twist_line(&k2, 1).unwrap()],
        )
        .unwrap();
        // constructor self-checks ρ_*ρ^*, push-pull and j^*j_*
        KBlowup::new(emb, n).unwrap();
    }
}
