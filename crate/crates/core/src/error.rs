use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A table, grid or point set would exceed its configured size budget.
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
    /// An argument lies outside the range covered by the sieve tables.
    Range {
        what: &'static str,
        value: f64,
        max: f64,
    },
    /// A parameter violates an operation's precondition.
    Parameter(&'static str),
    /// A point set with no points, or with two points equal modulo one.
    DegenerateSet,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Capacity {
                what,
                requested,
                limit,
            } => write!(
                f,
                "{what}: {requested} entries requested, budget is {limit}"
            ),
            Error::Range { what, value, max } => {
                write!(
                    f,
                    "{what}: {value} is outside the tabulated range (max {max})"
                )
            }
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::DegenerateSet => f.write_str("point set is empty or has coincident points"),
        }
    }
}

impl core::error::Error for Error {}
