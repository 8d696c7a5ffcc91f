//! Orthogonal-bundle calculus: hyperbolic `SO(2n)`-bundles with a chosen
//! orientation, isotropic reduction, the square-root Euler class and its
//! localizations by one or two isotropic sections, and the unit-pairing
//! vanishing certificates.
//!
//! An [`OrthBundle`] is always in the reduced hyperbolic form `V ⊕ V∨`
//! with `V` the designated positive maximal isotropic and an orientation
//! sign; flipping the sign negates every square-root class. Sections are
//! symbolic models ([`SectionModel`]): a set of root lines of `V ⊕ V∨`
//! plus zero-locus data. The square-root Euler class of `F` is
//! `sign · e(V)`, and the localized variants follow the blowup formula
//! `ξ = ρ_*α + ι_*β  ↦  ρ̂_* j^* √e(F̃) α + √e(F) β` with
//! `F̃ = L^⊥/L`, `L = O(D)`.

use serde::Serialize;

use crate::arith::{Poly, Rat};
use crate::chow::{
    bar_euler, deindex, reindex, Blowup, Bundle, Class, ChowError, Embedding, RingMap, Variety,
};

/// Errors from the orthogonal calculus.
#[derive(Debug, thiserror::Error)]
pub enum OrthError {
    #[error("unsupported model: {0}")]
    Unsupported(String),
    #[error("sections are not independent: {0}")]
    Independence(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Chow(#[from] ChowError),
}

/// Orientation of an `SO(2n)`-bundle relative to its designated positive
/// maximal isotropic; the negative choice negates `sqrt_euler`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    pub fn rat(self) -> Rat {
        match self {
            Orientation::Positive => Rat::from_integer(1.into()),
            Orientation::Negative => Rat::from_integer((-1).into()),
        }
    }
}

/// A hyperbolic special orthogonal bundle `V ⊕ V∨` with the evaluation
/// pairing and a designated orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthBundle {
    positive: Bundle,
    orientation: Orientation,
}

impl OrthBundle {
    /// `hyperbolic(V)` with the positive orientation.
    pub fn hyperbolic(v: Bundle) -> Self {
        OrthBundle {
            positive: v,
            orientation: Orientation::Positive,
        }
    }

    pub fn with_orientation(v: Bundle, orientation: Orientation) -> Self {
        OrthBundle {
            positive: v,
            orientation,
        }
    }

    pub fn flip(&self) -> Self {
        OrthBundle {
            positive: self.positive.clone(),
            orientation: self.orientation.flip(),
        }
    }

    pub fn base(&self) -> &Variety {
        self.positive.base()
    }

    /// The designated positive maximal isotropic `V`.
    pub fn positive_part(&self) -> &Bundle {
        &self.positive
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `2n`, the rank of `V ⊕ V∨`.
    pub fn rank(&self) -> usize {
        2 * self.positive.rank()
    }

    pub fn half_rank(&self) -> usize {
        self.positive.rank()
    }

    /// The restriction of the whole structure along an embedding.
    pub fn restrict(&self, emb: &Embedding) -> Result<OrthBundle, OrthError> {
        Ok(OrthBundle {
            positive: self.positive.restrict(emb)?,
            orientation: self.orientation,
        })
    }

    /// Whitney sum `F ⊕ F'`; orientations multiply.
    pub fn direct_sum(&self, other: &OrthBundle) -> Result<OrthBundle, OrthError> {
        let orientation = if self.orientation == other.orientation {
            Orientation::Positive
        } else {
            Orientation::Negative
        };
        Ok(OrthBundle {
            positive: self.positive.concat(&other.positive)?,
            orientation,
        })
    }

    /// The Euler class of the underlying rank-`2n` bundle:
    /// `e(F) = e(V) e(V∨) = (-1)^n e(V)^2`.
    pub fn euler(&self) -> Class {
        &self.positive.euler() * &self.positive.dual().euler()
    }

    /// Edidin-Graham square-root Euler class: `sign · e(V)` for the
    /// positive maximal isotropic `V`. The empty product gives
    /// `sign · 1` in rank 0.
    pub fn sqrt_euler(&self) -> Class {
        self.positive.euler().scale(&self.orientation.rat())
    }

    /// Verify the defining relation `sqrt_euler(F)^2 = (-1)^n e(F)` in the
    /// ambient ring.
    pub fn sqrt_euler_squared_check(&self) -> bool {
        let n = self.half_rank() as u32;
        let sign = if n % 2 == 1 {
            -Rat::from_integer(1.into())
        } else {
            Rat::from_integer(1.into())
        };
        self.sqrt_euler().pow(2) == self.euler().scale(&sign)
    }

    /// Canonical JSON form: base, orientation, positive roots.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base": self.base().name(),
            "orientation": match self.orientation {
                Orientation::Positive => 1,
                Orientation::Negative => -1,
            },
            "positive_roots": self
                .positive
                .roots()
                .iter()
                .map(|r| r.render())
                .collect::<Vec<_>>(),
        })
    }
}

/// An isotropic subbundle `K ⊆ V`, as a sub-multiset of the Chern roots
/// of the positive part. Containment in `V` makes isotropy automatic,
/// and `K^⊥/K` is hyperbolic on `V/K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicSub {
    indices: Vec<usize>,
}

impl IsotropicSub {
    pub fn new(f: &OrthBundle, mut indices: Vec<usize>) -> Result<Self, OrthError> {
        indices.sort_unstable();
        let before = indices.len();
        indices.dedup();
        if indices.len() != before {
            return Err(OrthError::Domain("repeated root index in K".into()));
        }
        if indices.iter().any(|&i| i >= f.half_rank()) {
            return Err(OrthError::Domain(format!(
                "K is not a sub-multiset of the roots of V (rank(V) = {})",
                f.half_rank()
            )));
        }
        Ok(IsotropicSub { indices })
    }

    pub fn empty() -> Self {
        IsotropicSub { indices: vec![] }
    }

    pub fn full(f: &OrthBundle) -> Self {
        IsotropicSub {
            indices: (0..f.half_rank()).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// The bundle `K` itself.
    pub fn bundle(&self, f: &OrthBundle) -> Bundle {
        f.positive.select(&self.indices)
    }
}

/// Isotropic reduction `F ↦ K^⊥/K`: the hyperbolic bundle on `V/K` with
/// the induced orientation (the image of `V` stays positive). Satisfies
/// `sqrt_euler(F) = e(K) · sqrt_euler(K^⊥/K)` in the ring.
pub fn isotropic_reduce(f: &OrthBundle, k: &IsotropicSub) -> Result<OrthBundle, OrthError> {
    if k.indices.iter().any(|&i| i >= f.half_rank()) {
        return Err(OrthError::Domain(
            "K is not a sub-multiset of the roots of V".into(),
        ));
    }
    Ok(OrthBundle {
        positive: f.positive.drop_roots(&k.indices),
        orientation: f.orientation,
    })
}

/// Which root line of `V ⊕ V∨` a section component occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SummandRef {
    /// the i-th root line of `V`
    Pos(usize),
    /// the dual of the i-th root line
    Dual(usize),
}

/// Zero-locus data of a symbolic section.
#[derive(Debug, Clone, PartialEq)]
pub enum SectionKind {
    /// the zero section: `X = Y`
    Zero,
    /// regular section with smooth zero locus `X`, normal bundle the
    /// restriction of the occupied summand
    Regular { zeros: Embedding },
    /// nowhere vanishing; only consistent when every occupied root line
    /// is trivial
    NowhereVanishing,
}

/// A symbolic isotropic section: the root lines it occupies and its
/// zero-locus model. Chow-level formulas depend only on this data.
/// Sections valued in `V` are isotropic automatically.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionModel {
    summand: Vec<SummandRef>,
    kind: SectionKind,
}

impl SectionModel {
    /// The zero section.
    pub fn zero() -> Self {
        SectionModel {
            summand: vec![],
            kind: SectionKind::Zero,
        }
    }

    /// A regular section valued in the given roots of `V`, with smooth
    /// zero locus `X`; consistency requires `codim(X) = #roots` and the
    /// regularity identity `[X] = e(span of the roots)`.
    pub fn regular(
        v: &Bundle,
        roots: Vec<usize>,
        zeros: Embedding,
    ) -> Result<SectionModel, OrthError> {
        let mut sorted = roots;
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.iter().any(|&i| i >= v.rank()) {
            return Err(OrthError::Domain("root index out of range".into()));
        }
        if zeros.ambient() != v.base() {
            return Err(OrthError::Domain(
                "zero locus must be embedded in the base of V".into(),
            ));
        }
        if zeros.codim() != sorted.len() as i64 {
            return Err(OrthError::Domain(format!(
                "zero locus has codimension {}, expected {}",
                zeros.codim(),
                sorted.len()
            )));
        }
        let w = v.select(&sorted);
        if w.euler() != *zeros.class() {
            return Err(OrthError::Domain(format!(
                "section is not regular: e(W) = {} but [X] = {}",
                w.euler().render(),
                zeros.class().render()
            )));
        }
        Ok(SectionModel {
            summand: sorted.into_iter().map(SummandRef::Pos).collect(),
            kind: SectionKind::Regular { zeros },
        })
    }

    /// A nowhere-vanishing section of the given roots of `V`; consistent
    /// only when each occupied root line is trivial.
    pub fn nowhere_vanishing(v: &Bundle, roots: Vec<usize>) -> Result<SectionModel, OrthError> {
        for &i in &roots {
            if i >= v.rank() {
                return Err(OrthError::Domain("root index out of range".into()));
            }
            if !v.roots()[i].is_zero() {
                return Err(OrthError::Domain(format!(
                    "a nowhere-vanishing section needs a trivial root line, but root {i} is {}",
                    v.roots()[i].render()
                )));
            }
        }
        Ok(SectionModel {
            summand: roots.into_iter().map(SummandRef::Pos).collect(),
            kind: SectionKind::NowhereVanishing,
        })
    }

    /// The unit-pairing section `t = (t_2, t_1)` spanning a trivial
    /// hyperbolic plane: nowhere-vanishing components in the `z`-th root
    /// line and its dual, pairing to a nonzero constant (`t^2 = 2`).
    pub fn unit_pairing(v: &Bundle, z: usize) -> Result<SectionModel, OrthError> {
        if z >= v.rank() {
            return Err(OrthError::Domain("root index out of range".into()));
        }
        if !v.roots()[z].is_zero() {
            return Err(OrthError::Domain(format!(
                "unit pairing needs a trivial root line, but root {z} is {}",
                v.roots()[z].render()
            )));
        }
        Ok(SectionModel {
            summand: vec![SummandRef::Pos(z), SummandRef::Dual(z)],
            kind: SectionKind::NowhereVanishing,
        })
    }

    pub fn kind(&self) -> &SectionKind {
        &self.kind
    }

    pub fn summand(&self) -> &[SummandRef] {
        &self.summand
    }

    /// The zero-locus embedding, when the section is regular.
    pub fn zeros(&self) -> Option<&Embedding> {
        match &self.kind {
            SectionKind::Regular { zeros } => Some(zeros),
            _ => None,
        }
    }

    /// Root indices in `V`, failing if any component lies in `V∨`.
    fn positive_roots(&self) -> Result<Vec<usize>, OrthError> {
        let mut out = Vec::with_capacity(self.summand.len());
        for s in &self.summand {
            match s {
                SummandRef::Pos(i) => out.push(*i),
                SummandRef::Dual(_) => {
                    return Err(OrthError::Unsupported(
                        "general isotropic sections not valued in V are rejected; \
                         reduce the model first"
                            .into(),
                    ))
                }
            }
        }
        Ok(out)
    }

    /// Number of matched `Pos/Dual` pairs; each trivial plane contributes
    /// a unit to the pairing `t^2 / 2`.
    fn pairing_constant(&self) -> i64 {
        let mut pairs = 0;
        for s in &self.summand {
            if let SummandRef::Pos(i) = s {
                if self.summand.contains(&SummandRef::Dual(*i)) {
                    pairs += 1;
                }
            }
        }
        pairs
    }
}

fn check_blowup_matches(
    v: &Bundle,
    roots: &[usize],
    zeros: &Embedding,
    bl: &Blowup,
) -> Result<(), OrthError> {
    if bl.center() != zeros {
        return Err(OrthError::Domain(
            "blowup center differs from the section's zero locus".into(),
        ));
    }
    let w_on_x = v.select(roots).restrict(zeros)?;
    if &w_on_x != bl.normal() {
        return Err(OrthError::Domain(
            "blowup normal bundle differs from the restricted summand".into(),
        ));
    }
    Ok(())
}

/// `√e(F, s)` via the lci formula `√e(N^⊥/N) ∘ ι^!` for a regular section
/// with smooth zero locus (`N` the span of the occupied root lines).
/// The zero section degenerates to `√e(F)` with `X = Y`.
pub fn sqrt_euler_localized_lci(
    f: &OrthBundle,
    s: &SectionModel,
    xi: &Class,
) -> Result<Class, OrthError> {
    match &s.kind {
        SectionKind::Zero => Ok(&f.sqrt_euler() * xi),
        SectionKind::Regular { zeros } => {
            let roots = s.positive_roots()?;
            let rest = f.positive.drop_roots(&roots).restrict(zeros)?;
            Ok(&rest.euler().scale(&f.orientation.rat()) * &zeros.gysin(xi))
        }
        SectionKind::NowhereVanishing => Err(OrthError::Unsupported(
            "a nowhere-vanishing section has an empty zero locus".into(),
        )),
    }
}

/// `√e(F, s)` by the blowup construction, on a decomposition
/// `ξ = ρ_*α + ι_*β`:
///
/// `√e(F,s)(ξ) = ρ̂_*( j^*( √e(F̃) · α ) ) + √e(F) β`,
///
/// with `F̃ = hyperbolic(V|_Ỹ / O(D))`, so `√e(F̃) = sign · [c(V)/(1+d)]_{n-1}`.
/// Errors when the decomposition does not reassemble to `ξ`.
pub fn sqrt_euler_localized_blowup(
    f: &OrthBundle,
    s: &SectionModel,
    bl: &Blowup,
    xi: &Class,
    alpha: &Class,
    beta: &Class,
) -> Result<Class, OrthError> {
    let roots = s.positive_roots()?;
    let zeros = match &s.kind {
        SectionKind::Regular { zeros } => zeros,
        SectionKind::Zero => {
            return Err(OrthError::Unsupported(
                "zero section: sqrt_euler_localized_lci degenerates to √e(F)".into(),
            ))
        }
        SectionKind::NowhereVanishing => {
            return Err(OrthError::Unsupported(
                "a nowhere-vanishing section has an empty zero locus".into(),
            ))
        }
    };
    check_blowup_matches(&f.positive, &roots, zeros, bl)?;
    let assembled = &bl.pushforward(alpha) + &bl.center().pushforward(beta);
    if &assembled != xi {
        return Err(OrthError::Domain(format!(
            "decomposition mismatch: ρ_*α + ι_*β = {} but ξ = {}",
            assembled.render(),
            xi.render()
        )));
    }
    let sqrt_tilde = bar_euler(&f.positive, bl, &[]).scale(&f.orientation.rat());
    let first = bl.excep_pushforward(&bl.j_pullback(&(&sqrt_tilde * alpha)));
    let ex = f
        .positive
        .restrict(bl.center())?
        .euler()
        .scale(&f.orientation.rat());
    Ok(&first + &(&ex * beta))
}

/// Model data for localization by two independent sections: the blowup
/// along `X = s^{-1}(0)`, the subvariety `Z ⊇ t^{-1}(0)`, and the
/// transverse intersection `X ∩ Z` inside `X`. The degenerate form
/// (`s = 0`, no blowup) carries only `Z`.
#[derive(Debug, Clone)]
pub struct TwoSectionModel {
    blowup: Option<Blowup>,
    z: Embedding,
    xz_in_x: Embedding,
    dz: Option<DzData>,
    transverse: bool,
}

#[derive(Debug, Clone)]
struct DzData {
    variety: Variety,
    from_d: RingMap,
    normal_xz: Bundle,
}

impl TwoSectionModel {
    pub fn new(blowup: Blowup, z: Embedding, xz_in_x: Embedding) -> Result<Self, OrthError> {
        if z.ambient() != blowup.base() {
            return Err(OrthError::Domain("Z must be embedded in the base".into()));
        }
        if xz_in_x.ambient() != blowup.center_space() {
            return Err(OrthError::Domain(
                "X∩Z must be embedded in the blowup center X".into(),
            ));
        }
        // transversality [X∩Z] = [X]·[Z]; only required once t actually
        // vanishes (the nowhere-vanishing case may take Z = X)
        let xz_in_y = blowup.center().compose(&xz_in_x)?;
        let transverse = xz_in_y.class() == &(blowup.center().class() * z.class());
        // exceptional divisor restricted over X∩Z, plus the map from D
        let normal_xz = blowup.normal().restrict(&xz_in_x)?;
        let variety = Variety::proj_bundle(&normal_xz, "hD")?;
        let d_vars = blowup.excep().vars();
        let mut images: Vec<Class> = Vec::with_capacity(d_vars.len());
        for v in blowup.center_space().vars().ids() {
            let on_xz = xz_in_x
                .restrict_map()
                .apply_poly(&Poly::var(blowup.center_space().vars(), v));
            images.push(variety.class(reindex(on_xz.poly(), variety.vars())));
        }
        images.push(variety.generator("hD").unwrap());
        let from_d = RingMap::new(d_vars, &variety, images)?;
        Ok(TwoSectionModel {
            blowup: Some(blowup),
            z,
            xz_in_x,
            dz: Some(DzData {
                variety,
                from_d,
                normal_xz,
            }),
            transverse,
        })
    }

    /// The `s = 0` degenerate model: `X = Y`, so `X ∩ Z = Z`.
    pub fn degenerate(z: Embedding) -> Self {
        TwoSectionModel {
            blowup: None,
            z: z.clone(),
            xz_in_x: z,
            dz: None,
            transverse: true,
        }
    }

    /// The variety `X ∩ Z` the localized class lives on.
    pub fn intersection(&self) -> &Variety {
        self.xz_in_x.sub()
    }

    /// The embedding `X∩Z ⊂ X`, for pushing the output back to `X`.
    pub fn intersection_in_x(&self) -> &Embedding {
        &self.xz_in_x
    }

    pub fn z(&self) -> &Embedding {
        &self.z
    }

    /// Pushforward `D|_{X∩Z} -> X∩Z` along the projective bundle.
    fn dz_push(&self, g: &Class) -> Class {
        let dz = self.dz.as_ref().expect("general model");
        let h = dz.variety.vars().id("hD").unwrap();
        let c = dz.normal_xz.rank() as i64;
        let mut out = self.intersection().zero();
        for (k, cof) in g.poly().split_by_var(h) {
            let x = deindex(&cof, self.intersection().vars()).expect("cofactor on X∩Z");
            let seg = dz.normal_xz.segre(k as i64 - c + 1);
            out = &out + &(&seg * &self.intersection().class(x));
        }
        out
    }
}

fn disjoint_summands(s: &SectionModel, t: &SectionModel) -> Result<(), OrthError> {
    for a in &s.summand {
        let i = match a {
            SummandRef::Pos(i) | SummandRef::Dual(i) => *i,
        };
        if t.summand.contains(&SummandRef::Pos(i)) || t.summand.contains(&SummandRef::Dual(i)) {
            return Err(OrthError::Independence(
                "sections occupy a common hyperbolic plane".into(),
            ));
        }
    }
    Ok(())
}

/// `√e(F, s; t)`: the square-root Euler class localized by two
/// independent isotropic sections,
///
/// `√e(F,s;t)(ρ_*α + ι_*β) = ρ''_* √e(F̃, t̃) j^* α + ι''_* √e(F, t) β`,
///
/// landing on `X ∩ Z`. Pushing forward to `X` recovers
/// [`sqrt_euler_localized_blowup`].
pub fn sqrt_euler_two_sections(
    f: &OrthBundle,
    s: &SectionModel,
    t: &SectionModel,
    model: &TwoSectionModel,
    xi: &Class,
    alpha: &Class,
    beta: &Class,
) -> Result<Class, OrthError> {
    two_sections_impl(
        &f.positive,
        Some(f.orientation),
        s,
        t,
        model,
        xi,
        alpha,
        beta,
    )
}

/// Vector-bundle analogue `e(V, s; t)`:
/// `e(V,s;t)(ρ_*α + ι_*β) = ρ''_* e(V̄, t̄) j^*α + e(V, t) β`.
pub fn localized_euler_two_sections(
    v: &Bundle,
    s: &SectionModel,
    t: &SectionModel,
    model: &TwoSectionModel,
    xi: &Class,
    alpha: &Class,
    beta: &Class,
) -> Result<Class, OrthError> {
    two_sections_impl(v, None, s, t, model, xi, alpha, beta)
}

#[allow(clippy::too_many_arguments)]
fn two_sections_impl(
    v: &Bundle,
    orientation: Option<Orientation>,
    s: &SectionModel,
    t: &SectionModel,
    model: &TwoSectionModel,
    xi: &Class,
    alpha: &Class,
    beta: &Class,
) -> Result<Class, OrthError> {
    disjoint_summands(s, t)?;
    let sign = orientation
        .map(|o| o.rat())
        .unwrap_or_else(|| Rat::from_integer(1.into()));
    let t_roots = t.positive_roots()?;

    let t_vanishes_somewhere = match &t.kind {
        SectionKind::Regular { zeros } => {
            if zeros != &model.z {
                return Err(OrthError::Unsupported(
                    "supported models require Z = t^{-1}(0)".into(),
                ));
            }
            if !model.transverse {
                return Err(OrthError::Domain(
                    "X and Z are not transverse: [X∩Z] ≠ [X]·[Z]".into(),
                ));
            }
            true
        }
        SectionKind::NowhereVanishing => false,
        SectionKind::Zero => {
            return Err(OrthError::Domain(
                "t = 0 gives no extra localization; use the one-section class".into(),
            ))
        }
    };

    match &s.kind {
        SectionKind::Zero => {
            // X = Y, ξ = β: the class is √e(F,t) β on Z
            if model.blowup.is_some() {
                return Err(OrthError::Domain(
                    "zero section s needs the degenerate model".into(),
                ));
            }
            if beta != xi || !alpha.is_zero() {
                return Err(OrthError::Domain(
                    "degenerate decomposition requires α = 0, β = ξ".into(),
                ));
            }
            if !t_vanishes_somewhere {
                return Ok(model.intersection().zero());
            }
            let rest = v.drop_roots(&t_roots).restrict(&model.xz_in_x)?;
            Ok(&rest.euler().scale(&sign) * &model.xz_in_x.gysin(beta))
        }
        SectionKind::Regular { zeros } => {
            let s_roots = s.positive_roots()?;
            let bl = model.blowup.as_ref().ok_or_else(|| {
                OrthError::Domain("regular section s needs the full two-section model".into())
            })?;
            check_blowup_matches(v, &s_roots, zeros, bl)?;
            let assembled = &bl.pushforward(alpha) + &bl.center().pushforward(beta);
            if &assembled != xi {
                return Err(OrthError::Domain(format!(
                    "decomposition mismatch: ρ_*α + ι_*β = {} but ξ = {}",
                    assembled.render(),
                    xi.render()
                )));
            }
            if !t_vanishes_somewhere {
                return Ok(model.intersection().zero());
            }
            // ι''_* √e(F,t) β: restrict to X∩Z, multiply the reduced Euler class
            let rest2 = v
                .drop_roots(&t_roots)
                .restrict(bl.center())?
                .restrict(&model.xz_in_x)?;
            let term2 = &rest2.euler().scale(&sign) * &model.xz_in_x.gysin(beta);
            // ρ''_* √e(F̃, t̃) j^* α, with F̃ reduced by both L and the t-summand
            let ebar = bar_euler(v, bl, &t_roots).scale(&sign);
            let on_d = bl.j_pullback(&(&ebar * alpha));
            let dz = model.dz.as_ref().expect("general model");
            let on_dz = dz.from_d.apply(&on_d);
            let term1 = model.dz_push(&on_dz);
            Ok(&term1 + &term2)
        }
        SectionKind::NowhereVanishing => Err(OrthError::Unsupported(
            "s must have a nonempty zero locus".into(),
        )),
    }
}

/// One verified identity: both sides in normal form plus the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    pub verdict: bool,
}

impl Verification {
    pub fn check(identity: impl Into<String>, lhs: &Class, rhs: &Class) -> Self {
        Verification {
            identity: identity.into(),
            lhs: lhs.render(),
            rhs: rhs.render(),
            verdict: lhs == rhs,
        }
    }
}

/// Report certifying the unit-pairing vanishing lemmas.
#[derive(Debug, Clone, Serialize)]
pub struct VanishingReport {
    pub items: Vec<Verification>,
    pub vanishes: bool,
}

/// Vanishing by a unit-pairing section: when `F` carries a section `t`
/// with `t^2` a nonzero constant (modeled as unit components in a trivial
/// root line and its dual), `√e(F) = 0` because `V` has a nowhere-
/// vanishing section; and for a compatible isotropic `s` with `s·t = 0`,
/// both terms of the blowup formula vanish, so `√e(F, s) = 0`.
pub fn vanishing_by_unit_section(
    f: &OrthBundle,
    t: &SectionModel,
    s: Option<(&SectionModel, &Blowup)>,
) -> Result<VanishingReport, OrthError> {
    if f.half_rank() == 0 {
        return Err(OrthError::NotApplicable(
            "rank-0 bundles carry no unit-pairing section".into(),
        ));
    }
    if t.pairing_constant() == 0 {
        return Err(OrthError::NotApplicable(
            "t^2 = 0: the vanishing lemma needs a nonzero square".into(),
        ));
    }
    let z = t
        .summand
        .iter()
        .find_map(|r| match r {
            SummandRef::Pos(i) if t.summand.contains(&SummandRef::Dual(*i)) => Some(*i),
            _ => None,
        })
        .expect("pairing constant nonzero");
    if !f.positive.roots()[z].is_zero() {
        return Err(OrthError::Domain(
            "unit-pairing components must span a trivial plane".into(),
        ));
    }

    let zero_y = f.base().zero();
    let mut items = vec![Verification::check(
        "sqrt_euler(F) = 0 (V has a nowhere-vanishing section)",
        &f.sqrt_euler(),
        &zero_y,
    )];

    if let Some((s_model, bl)) = s {
        let s_roots = s_model.positive_roots()?;
        if s_roots.contains(&z) {
            return Err(OrthError::Independence(
                "s·t ≠ 0: s occupies the unit-pairing plane".into(),
            ));
        }
        let zeros = s_model
            .zeros()
            .ok_or_else(|| OrthError::Domain("compatible s must be a regular section".into()))?;
        check_blowup_matches(&f.positive, &s_roots, zeros, bl)?;
        // first term of the blowup formula: √e(F̃) = 0 on Ỹ
        let tilde = bar_euler(&f.positive, bl, &[]).scale(&f.orientation.rat());
        items.push(Verification::check(
            "sqrt_euler(L^⊥/L) = 0 on the blowup",
            &tilde,
            &bl.total().zero(),
        ));
        // second term: √e(F)|_X = 0
        let ex = f
            .positive
            .restrict(bl.center())?
            .euler()
            .scale(&f.orientation.rat());
        items.push(Verification::check(
            "sqrt_euler(F)|_X = 0",
            &ex,
            &bl.center_space().zero(),
        ));
    }

    let vanishes = items.iter().all(|i| i.verdict);
    Ok(VanishingReport { items, vanishes })
}
