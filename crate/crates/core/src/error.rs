use thiserror::Error;

/// A pair of standard basis indices `(e_ij, e_kl)`, stored as element indices.
pub type BasisPair = ((usize, usize), (usize, usize));

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring `{0}`: expected \"Q\", \"Z\" or \"Z/<n>\" with n >= 2")]
    InvalidRing(String),

    #[error("cannot parse `{text}` as an element of {ring}")]
    InvalidScalar { text: String, ring: String },

    #[error("{value} is not invertible in {ring}")]
    NotInvertible { value: String, ring: String },

    #[error("{0} is not a field; exact nullspaces need Q or Z/p with p prime")]
    NotAField(String),

    #[error("{0} has 2-torsion")]
    TwoTorsion(String),

    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown element label `{0}`")]
    UnknownLabel(String),

    #[error("relation is not reflexive at `{0}`")]
    NotReflexive(String),

    #[error("relation is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(String, String, String),

    #[error("{0} is not below {1}")]
    NotComparable(String, String),

    #[error("operands live on different preorders or rings")]
    Mismatch,

    #[error("preorder is not connected")]
    Disconnected,

    #[error("preorder is not antisymmetric: {0} and {1} are equivalent")]
    NotAPoset(String, String),

    #[error("enumeration supports 1 <= n <= 5, got {0}")]
    SizeOutOfRange(usize),

    #[error("operator is not a Lie derivation: Leibniz rule fails at {0:?}")]
    NotLieDerivation(BasisPair),

    #[error("operator is not in structural form at column {column:?}, position {position:?}")]
    NotStructural {
        column: (usize, usize),
        position: (usize, usize),
    },

    #[error("locality at a diagonal pair is only defined for derivations")]
    DiagonalLocality,

    #[error("pair ({0}, {1}) lies outside the window interior")]
    OutsideInterior(String, String),

    #[error("{0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
