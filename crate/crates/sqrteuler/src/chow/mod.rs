//! Model Chow rings and the structure maps between them.
//!
//! A [`Variety`] is a finite presentation of the Chow ring of one of the
//! supported models: a point, a projective space, a projective bundle over
//! such a base, or a blowup along a regularly embedded center. Classes are
//! normal forms in the presentation; integration reads off the coefficient
//! of the canonical point monomial. [`Embedding`] and [`Blowup`] package
//! the pullback / pushforward / Gysin maps the localization formulas need,
//! and verify the standard compatibilities (projection formula, the
//! self-intersection formula, `j^* j_* = -h`) at construction time.

mod blowup;
mod bundle;
mod maps;
mod serialize;
mod variety;

pub use blowup::{localized_euler_blowup, localized_euler_zero_section, Blowup};
pub use bundle::{proj_bundle_pushforward, quadric_pushforward, Bundle};
pub use maps::{Embedding, RingMap};
pub use variety::{Class, Variety};

pub(crate) use blowup::bar_euler;
pub(crate) use variety::{deindex, reindex, BlowupNorm, Rule, VarietyData};

/// Errors from model construction and the structure maps.
#[derive(Debug, Clone, thiserror::Error)]
pub enum ChowError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("classes live on different varieties: {0} vs {1}")]
    VarietyMismatch(String, String),
    #[error("embedding data inconsistent: {0}")]
    BadEmbedding(String),
    #[error("blowup data inconsistent: {0}")]
    BadBlowup(String),
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
}
