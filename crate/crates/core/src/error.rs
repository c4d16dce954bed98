use thiserror::Error;

use crate::lattice::Site;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("embedding index {index} invalid for register of {n_total} qubits")]
    BadEmbedding { index: usize, n_total: usize },
    #[error("cannot parse Pauli literal {0:?}")]
    PauliParse(String),
    #[error("operator is not Hermitian (phase exponent {0})")]
    NonHermitian(u8),

    #[error("generators {0} and {1} anticommute")]
    AnticommutingGenerators(usize, usize),
    #[error("-1 is an element of the stabilizer group")]
    MinusOneInGroup,
    #[error("code encodes no logical qubits")]
    NoLogicals,
    #[error("exhaustive search over {n} qubits exceeds limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("plaquette coloring invalid: {0}")]
    InvalidColoring(String),
    #[error("lattice needs {needed} hardware qubits, register has {available}")]
    HardwareTooSmall { needed: usize, available: usize },
    #[error("plaquette ({0}, {1}) is missing")]
    MissingPlaquette(i32, i32),
    #[error("malformed string path: {0}")]
    MalformedPath(String),
    #[error("string is open (has endpoints)")]
    OpenString,
    #[error("strings must have opposite colors")]
    SameColor,

    #[error("deformation changes topology: k {before} -> {after}")]
    TopologyChange { before: usize, after: usize },
    #[error("site {0} is interior; it touches no border")]
    InteriorSite(Site),
    #[error("site {0} is already active")]
    ActiveSite(Site),
    #[error("site {0} is not active")]
    InactiveSite(Site),
    #[error("cut string does not connect two borders of its color")]
    NotBorderToBorder,
    #[error("junction does not join two borders of one color")]
    ColorMismatch,
    #[error("region touches the border")]
    RegionOnBorder,
    #[error("no hole with id {0}")]
    NoSuchHole(usize),
    #[error("hole path blocked at step {0}")]
    PathBlocked(usize),
    #[error("no shrink path for logical qubit {0}")]
    NoShrinkPath(usize),
    #[error("no room for a hole qubit at the requested location")]
    NoRoom,
    #[error("qubits {0} and {1} overlap")]
    QubitsOverlap(usize, usize),
    #[error("cut string eigenvalue is not +1")]
    EigenvalueNotFixed,
    #[error("no logical qubit with id {0}")]
    NoSuchQubit(usize),
    #[error("logical representative cannot be rerouted off the deformed region")]
    RerouteFailed,
    #[error("step {index} failed: {cause}")]
    Step { index: usize, cause: Box<Error> },

    #[error("oracle state norm vanished")]
    NormZero,
    #[error("signed generators are inconsistent")]
    InconsistentSigns,

    #[error("schedule document: {0}")]
    Document(String),
    #[error("unknown snapshot id {0}")]
    UnknownSnapshot(String),
}
