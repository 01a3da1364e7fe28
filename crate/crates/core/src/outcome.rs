//! Dichotomic measurement outcomes, the value set `S = {-1, +1}`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One of the two admissible outcomes of a dichotomic observable.
///
/// Ordering follows the search convention used throughout the crate:
/// `Plus < Minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn from_int(v: i64) -> Option<Self> {
        match v {
            1 => Some(Outcome::Plus),
            -1 => Some(Outcome::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn flip(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    /// Product in the multiplicative group `{+1, -1}`.
    pub fn times(self, other: Outcome) -> Outcome {
        if self == other {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }
}

impl std::ops::Neg for Outcome {
    type Output = Outcome;
    fn neg(self) -> Outcome {
        self.flip()
    }
}

impl std::ops::Mul for Outcome {
    type Output = Outcome;
    fn mul(self, rhs: Outcome) -> Outcome {
        self.times(rhs)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Plus => write!(f, "+1"),
            Outcome::Minus => write!(f, "-1"),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i32(self.value())
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Outcome::from_int(v).ok_or_else(|| serde::de::Error::custom(format!("outcome must be +1 or -1, got {v}")))
    }
}
