use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("lattice has no elements")]
    Empty,
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("cover pair references unknown element `{0}`")]
    UnknownName(String),
    #[error("cover relation contains a cycle through `{0}`")]
    CycleError(String),
    #[error("`{a}` and `{b}` have no unique {op}")]
    NotALattice { a: String, b: String, op: &'static str },
    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("top element is join-irreducible")]
    TopIrreducible,
    #[error("no (p, q) decomposition of the top element: {0}")]
    NoDecomposition(String),
    #[error("subset is not a filter")]
    NotAFilter,
    #[error("subset is not an ideal")]
    NotAnIdeal,
    #[error("map is not an isomorphism: {0}")]
    NotIso(String),
    #[error("lattice is not a chain")]
    NotAChain,
    #[error("directed kernel does not match the color quasiorder: {0}")]
    KernelTooBig(String),
    #[error("shared color `{0}` is not witnessed by an overlap edge")]
    SharedColorUnwitnessed(String),
    #[error("color quasiorder is not antisymmetric")]
    NotAnOrder,
    #[error("top element is not join-irreducible")]
    TopNotJoinIrreducible,
    #[error("labeled chain does not represent the requested subset: {0}")]
    Unrepresentable(String),
    #[error("substituted lattice is not simple")]
    MNotSimple,
    #[error("endpoints do not form a prime interval")]
    NotAnInterval,
    #[error("rigid simple family has only {0} members")]
    ExhaustedFamily(usize),
    #[error("cap lattice must be simple with at least three elements")]
    CapNotSimple,
    #[error("frame plan is invalid: {0}")]
    PlanInvalid(String),
    #[error("alter-ego class of `{0}` cannot be witnessed in two branches")]
    UnwitnessablePair(String),
    #[error("color `{0}` does not occur on any branch edge")]
    ColorNotFound(String),
    #[error("flag colors lie in the same branch")]
    SameBranch,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("lattice violates the planarity/coatom condition: {0}")]
    ConditionViolated(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("automorphism group mismatch: {0}")]
    AutMismatch(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}
