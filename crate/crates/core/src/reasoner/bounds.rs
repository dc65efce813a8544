use std::time::Duration;

use serde::Serialize;

/// Limits that keep saturation terminating. Running out of any of them
/// yields a partial result and an `Unknown` verdict, never a wrong one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProverBounds {
    pub max_rounds: usize,
    /// Maximum nesting of belief contexts opened during saturation.
    pub max_depth: usize,
    pub max_term_depth: usize,
    #[serde(with = "millis")]
    pub budget: Duration,
}

impl Default for ProverBounds {
    fn default() -> Self {
        ProverBounds {
            max_rounds: 16,
            max_depth: 8,
            max_term_depth: 8,
            budget: Duration::from_secs(10),
        }
    }
}

impl ProverBounds {
    /// True when every bound of `self` is at least the matching bound of `other`.
    pub fn dominates(&self, other: &ProverBounds) -> bool {
        self.max_rounds >= other.max_rounds
            && self.max_depth >= other.max_depth
            && self.max_term_depth >= other.max_term_depth
            && self.budget >= other.budget
    }
}

mod millis {
    use std::time::Duration;

    use serde::Serializer;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }
}
