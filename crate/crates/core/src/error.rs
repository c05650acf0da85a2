use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("point group mismatch: order {left} vs order {right}")]
    GroupMismatch { left: usize, right: usize },

    #[error("{m} does not divide the point group order {n}")]
    NotADivisor { n: usize, m: usize },

    #[error("action matrix does not have order dividing {order}")]
    ActionOrder { order: usize },

    #[error("ideal exponent {k} out of range 0..={n}")]
    IdealExponent { k: usize, n: usize },

    #[error("unknown block `{0}`")]
    UnknownBlock(String),

    #[error("invalid block `{name}`: {reason}")]
    InvalidBlock { name: String, reason: String },

    #[error("invalid module map: {0}")]
    InvalidMap(String),

    #[error("d^2 != 0 from degree {degree} to degree {}", degree + 2)]
    NonzeroSquare { degree: usize },

    #[error("module has torsion {group}; a lattice presentation is not available")]
    Torsion { group: String },

    #[error("cohomology in degree {degree} has torsion ({group}); refusing to fold further")]
    TorsionObstruction { degree: usize, group: String },

    #[error("pullback needs at least one block")]
    EmptyPullback,

    #[error("oracle mismatch at fold {fold}, degree {degree}: kunneth gives {kunneth}, product complex gives {product}")]
    OracleMismatch {
        fold: usize,
        degree: usize,
        kunneth: String,
        product: String,
    },

    #[error(
        "Eilenberg-Moore E2 does not collapse at fold {fold}: entry (p={p}, q={q}) is {group}"
    )]
    NoCollapse {
        fold: usize,
        p: usize,
        q: usize,
        group: String,
    },
}
