use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),

    #[error("unknown element name `{0}`")]
    UnknownName(String),

    #[error("invalid element name `{0}` (names match [A-Za-z0-9_]+)")]
    InvalidName(String),

    #[error("cover relation contains a cycle")]
    CycleDetected,

    #[error("element index {0} is out of range")]
    UnknownElement(usize),

    #[error("element `{0}` is not alive in this position")]
    DeadElement(String),

    #[error("poset has {0} elements, the engine supports at most 64")]
    PosetTooLarge(usize),

    #[error("alive set is not downward closed")]
    NotAnIdeal,

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("label `{0}` names no element of the target poset")]
    LabelNotInTarget(String),

    #[error("labeling is partial: element `{0}` carries no label")]
    PartialLabeling(String),

    #[error("`{0}` is not maximal in the target poset")]
    AlphaNotMaximal(String),

    #[error("the selected factor is not an up-set of the source poset")]
    FactorNotUpSet,

    #[error("element `{0}` is below part of the factor but not all of it")]
    InconsistentExternalRelations(String),

    #[error("replacement produced a labeling that fails verification")]
    ResultNotCompressing,

    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("the two maps target different posets")]
    TargetMismatch,

    #[error("poset has {0} elements, compression search supports at most {1}")]
    PosetTooLargeForSearch(usize, usize),

    #[error("right factor is inadmissible: {0}")]
    InadmissibleB(String),

    #[error("map is not verified")]
    NotVerified,

    #[error("no fixture named `{0}`")]
    MissingFixture(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
