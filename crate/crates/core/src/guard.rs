//! Resource guards for operations whose cost is driven by element counts.

use crate::Error;

/// Default ceiling on the number of elements any single operation may
/// enumerate (free-object bases, brute-force products, limit carriers).
pub const DEFAULT_MAX_ENUMERATION: u128 = 1 << 20;

/// Ceiling on the *log2* size of any object we are willing to represent even
/// symbolically.  Beyond this, index arithmetic itself would overflow.
pub const MAX_LOG2_OBJECT_SIZE: u128 = 48;

/// Tunable resource limits, threaded through constructions that enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guards {
    /// Maximum number of elements an operation may enumerate.
    pub max_enumeration: u128,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_enumeration: DEFAULT_MAX_ENUMERATION,
        }
    }
}

impl Guards {
    /// Guards with a custom enumeration ceiling.
    pub fn with_max_enumeration(max_enumeration: u128) -> Self {
        Guards { max_enumeration }
    }

    /// Check that enumerating `size` elements is allowed.
    pub fn check_enumeration(&self, context: impl Into<String>, size: u128) -> Result<(), Error> {
        if size > self.max_enumeration {
            Err(Error::EnumerationTooLarge {
                context: context.into(),
                size,
                guard: self.max_enumeration,
            })
        } else {
            Ok(())
        }
    }
}
