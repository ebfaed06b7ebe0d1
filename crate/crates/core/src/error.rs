use thiserror::Error;

/// Errors raised by group constructions and the analyses built on them.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generator image table does not define an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("operator assignment does not extend to a homomorphism into Aut(A): {0}")]
    ActionNotHomomorphism(String),
    #[error("budget exceeded: {what} needs {needed} but the budget is {limit}")]
    BudgetExceeded { what: String, needed: String, limit: u64 },
    #[error("elements belong to different groups")]
    MixedOwner,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{0} is not bound by the assignment")]
    UnboundVariable(usize),
    #[error("descriptor does not describe a finite group")]
    DescriptorNotFinite,
    #[error("supplied elements do not generate the group ({generated} of {order} elements reached)")]
    GeneratorsDoNotGenerate { generated: u64, order: u64 },
    #[error("law check inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: impl ToString, limit: u64) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed: needed.to_string(),
            limit,
        }
    }

    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
