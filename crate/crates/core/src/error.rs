use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failures surfaced by the numerical routines.
///
/// The general contract is: a routine either certifies its result at the
/// requested tolerance or refuses with one of these. Refusal is part of the
/// numerics, not an afterthought — callers can retry with looser tolerances
/// or different parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Gamma evaluated at a non-positive integer.
    GammaPole { at: i64 },
    /// A series/quadrature could not certify the requested tolerance.
    AccuracyNotAchievable { what: &'static str, detail: String },
    /// An iteration failed to converge within its budget.
    NonConvergence { what: &'static str, detail: String },
    /// A parameter is outside a routine's admissible range.
    InvalidInput { what: &'static str, detail: String },
    /// A transformation hit a parameter degeneracy (for the hypergeometric
    /// kernel: `c` a non-positive integer).
    ParameterDegeneracy { detail: String },
    /// A gamma-factor weight is not a positive multiple of 1/2, so the
    /// normalized form does not exist.
    UnsupportedWeight { w: f64 },
    /// Gauss sums are defined here only for primitive characters.
    NonPrimitiveCharacter { modulus: u64, conductor: u64 },
    /// No Dirichlet character matches the supplied coefficients.
    NoSuchCharacter { modulus: u64, detail: String },
    /// Coefficient data does not extend far enough for the request.
    InsufficientData { what: &'static str, detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GammaPole { at } => write!(f, "gamma pole at non-positive integer {at}"),
            Error::AccuracyNotAchievable { what, detail } => {
                write!(f, "{what}: cannot certify requested accuracy ({detail})")
            }
            Error::NonConvergence { what, detail } => {
                write!(f, "{what}: iteration did not converge ({detail})")
            }
            Error::InvalidInput { what, detail } => write!(f, "{what}: invalid input ({detail})"),
            Error::ParameterDegeneracy { detail } => {
                write!(f, "hypergeometric parameter degeneracy: {detail}")
            }
            Error::UnsupportedWeight { w } => {
                write!(f, "gamma-factor weight {w} is not a positive multiple of 1/2")
            }
            Error::NonPrimitiveCharacter { modulus, conductor } => write!(
                f,
                "character mod {modulus} is imprimitive (conductor {conductor})"
            ),
            Error::NoSuchCharacter { modulus, detail } => {
                write!(f, "no character mod {modulus} matches: {detail}")
            }
            Error::InsufficientData { what, detail } => {
                write!(f, "{what}: insufficient coefficient data ({detail})")
            }
        }
    }
}

impl std::error::Error for Error {}
