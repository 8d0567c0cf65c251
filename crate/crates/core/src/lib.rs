//! Exact-arithmetic evaluation of index pairings for twisted Dirac operators
//! `D_W` on a Riemannian symmetric space `G/K`.
//!
//! The crate is organised bottom up:
//!
//! * [`rootsys`] builds root systems with a compact/noncompact grading,
//! * [`weyl`] enumerates Weyl groups of (sub)systems as exact matrices,
//! * [`charalg`] is the Laurent character ring over the weight lattice,
//! * [`indexss`] evaluates semisimple orbital integrals `τ_γ(ind D_W)`,
//! * [`indexhigher`] evaluates higher orbital integrals for cuspidal
//!   parabolics,
//! * [`indexnonss`] evaluates the real-rank-one non-semisimple terms,
//! * [`assemble`] holds the group catalog and sums everything into the
//!   index of `D_W^Γ` on `Γ\G/K`.
//!
//! All weights are exact rationals. Complex values only appear when a
//! character is evaluated at a torus element.

pub mod assemble;
pub mod charalg;
pub mod indexhigher;
pub mod indexnonss;
pub mod indexss;
pub mod q;
pub mod rootsys;
pub mod weyl;

pub use assemble::{
    assemble_index, catalog_lookup, catalog_names, AssembleOptions, CatalogEntry, GroupSpec, IndexReport,
    LabeledTerm,
};
pub use charalg::{ElementDescriptor, LaurentChar, TorusElement};
pub use indexhigher::{DecompTerm, LeviData, LeviSpec};
pub use indexnonss::{BernoulliConvention, GammaData, LambdaNorm, NonSsOptions, RankOneData, Subscript};
pub use indexss::{DiracInput, ElementSpec, SignConvention, SsContribution};
pub use num_complex::Complex64;
pub use q::Q;
pub use rootsys::{BilinearForm, Root, SymmetricPair, WeightVec};
pub use weyl::{PositiveSystem, WeylElement, WeylGroup};

/// Absolute tolerance for comparing complex values produced by character
/// evaluation.
pub const ZERO_TOL: f64 = 1e-9;

/// Tolerance of the near-integer check on an assembled index.
pub const NEAR_INTEGER_TOL: f64 = 1e-6;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("Weyl group exceeds the size bound of {bound} elements")]
    GroupTooLarge { bound: usize },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("weight is not dominant: {0}")]
    NotDominant(String),
    #[error("character is not Weyl-invariant")]
    NotInvariant,
    #[error("wrong element kind: expected {expected}, got {got}")]
    WrongElementKind { expected: &'static str, got: &'static str },
    #[error("rank(G) != rank(K): {0}")]
    RankMismatch(String),
    #[error("element claimed central but {0}")]
    MisclassifiedElement(String),
    #[error("levi `{0}` is not a maximal cuspidal parabolic")]
    RequiresMaximal(String),
    #[error("missing Γ data: {0}")]
    MissingGammaData(String),
    #[error("Z_0 is orthogonal to a noncompact positive root")]
    DegenerateZ0,
    #[error("k(μ) is not an integer: ⟨μ, Z⟩ = {0}")]
    NonIntegralK(String),
    #[error("k(w(λ+ρ_c)) vanishes for a coset representative; sign is ambiguous")]
    AmbiguousSign,
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("invalid Dirac input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Stable identifier of the variant, used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidRootDatum(_) => "InvalidRootDatum",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::NotASubgroup(_) => "NotASubgroup",
            Error::NotDominant(_) => "NotDominant",
            Error::NotInvariant => "NotInvariant",
            Error::WrongElementKind { .. } => "WrongElementKind",
            Error::RankMismatch(_) => "RankMismatch",
            Error::MisclassifiedElement(_) => "MisclassifiedElement",
            Error::RequiresMaximal(_) => "RequiresMaximal",
            Error::MissingGammaData(_) => "MissingGammaData",
            Error::DegenerateZ0 => "DegenerateZ0",
            Error::NonIntegralK(_) => "NonIntegralK",
            Error::AmbiguousSign => "AmbiguousSign",
            Error::NotSupported(_) => "NotSupported",
            Error::UnknownGroup(_) => "UnknownGroup",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse(_) => "Parse",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
