use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate object id `{0}`")]
    DuplicateId(String),
    #[error("universe must contain at least one object")]
    EmptyUniverse,
    #[error("{requested} tuples exceed the size cap of {cap}")]
    SizeCapExceeded { requested: u128, cap: u64 },
    #[error("a partition needs a nonempty index space")]
    EmptyDomain,
    #[error("partitions over different index spaces ({left} vs {right})")]
    DomainMismatch { left: usize, right: usize },
    #[error("assignment is not total: tuple ({0}) has no sign")]
    IncompleteMap(String),
    #[error("table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("tuple ({0}) is assigned more than once")]
    DuplicateAssignment(String),
    #[error("unknown sign `{0}`")]
    UnknownSign(String),
    #[error("duplicate sign `{0}`")]
    DuplicateSign(String),
    #[error("sign set must not be empty")]
    EmptySignSet,
    #[error("`{0}` is used both as an object and as a sign")]
    SignObjectClash(String),
    #[error("quantity name must not be empty")]
    EmptyName,
    #[error("expected arity {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("`{0}` is not an object of the parent universe")]
    NotASubset(String),
    #[error("target arity {target} must be larger than {arity}")]
    ArityNotLarger { arity: usize, target: usize },
    #[error("bad coordinate selection: {0}")]
    BadCoordinates(String),
    #[error("outer universe does not match the inner sign set")]
    UniverseSignMismatch,
    #[error("quantities are defined on different universes")]
    UniverseMismatch,
    #[error("the set of quantities is empty")]
    EmptySet,
    #[error("strict systems need at least one quantity of arity > 1")]
    NoRelationQuantity,
    #[error("not a part of the enclosing system")]
    NotAPart,
    #[error("measure index {0} is out of range")]
    BadIndex(usize),
    #[error("systems have incompatible shapes: {0}")]
    ShapeMismatch(String),
    #[error("vertex map is not total: `{0}` has no image")]
    MapNotTotal(String),
    #[error("canonical forms are not defined for systems with nested systems as vertices")]
    NestedSystem,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document ({context}): {source}")]
    Validation { context: String, source: Box<Error> },
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("{0} not found")]
    NotFound(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("row {row} has {found} fields, expected {expected}")]
    RaggedRows {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("duplicate key value `{0}`")]
    DuplicateKey(String),
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("{0}")]
    Io(String),
}
