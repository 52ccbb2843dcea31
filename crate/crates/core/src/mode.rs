use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error};

/// Half-integer angular-momentum projection `m`, stored exactly as `2m`.
///
/// The sign of `m` is read as the direction of the price trend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "ModeRepr", into = "i32")]
pub struct ModeIndex {
    twice_m: i32,
}

impl ModeIndex {
    pub fn from_twice(twice_m: i32) -> Result<Self, Error> {
        if twice_m % 2 == 0 {
            return Err(invalid("twice_m", format!("{twice_m} is even; m must be a half-integer")));
        }
        Ok(Self { twice_m })
    }

    pub fn twice_m(self) -> i32 {
        self.twice_m
    }

    pub fn m(self) -> f64 {
        self.twice_m as f64 / 2.0
    }

    pub fn abs(self) -> Self {
        Self {
            twice_m: self.twice_m.abs(),
        }
    }

    pub fn is_positive(self) -> bool {
        self.twice_m > 0
    }

    pub fn reflected(self) -> Self {
        Self {
            twice_m: -self.twice_m,
        }
    }
}

/// Accepted input forms: the integer `2m` or the string `"p/2"`.
#[derive(Deserialize)]
#[serde(untagged)]
enum ModeRepr {
    Twice(i32),
    Text(String),
}

impl TryFrom<ModeRepr> for ModeIndex {
    type Error = Error;
    fn try_from(v: ModeRepr) -> Result<Self, Error> {
        match v {
            ModeRepr::Twice(t) => Self::from_twice(t),
            ModeRepr::Text(s) => s.parse(),
        }
    }
}

impl TryFrom<i32> for ModeIndex {
    type Error = Error;
    fn try_from(v: i32) -> Result<Self, Error> {
        Self::from_twice(v)
    }
}

impl From<ModeIndex> for i32 {
    fn from(m: ModeIndex) -> i32 {
        m.twice_m
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice_m)
    }
}

/// Parses `"p/2"` (e.g. `"3/2"`, `"-1/2"`, `"+5/2"`).
impl FromStr for ModeIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let Some(num) = s.strip_suffix("/2") else {
            return Err(invalid("m", format!("'{s}' is not of the form p/2")));
        };
        let num = num.strip_prefix('+').unwrap_or(num);
        let p: i32 = num
            .parse()
            .map_err(|_| invalid("m", format!("'{s}' is not of the form p/2")))?;
        Self::from_twice(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!("1/2".parse::<ModeIndex>().unwrap().twice_m(), 1);
        assert_eq!("-3/2".parse::<ModeIndex>().unwrap().twice_m(), -3);
        assert_eq!("+5/2".parse::<ModeIndex>().unwrap().m(), 2.5);
        assert!("2/2".parse::<ModeIndex>().is_err());
        assert!("0.5".parse::<ModeIndex>().is_err());
        assert!(ModeIndex::from_twice(4).is_err());
    }

    #[test]
    fn deserializes_from_either_form() {
        let a: ModeIndex = serde_json::from_str("-3").unwrap();
        let b: ModeIndex = serde_json::from_str("\"-3/2\"").unwrap();
        assert_eq!(a, b);
        assert!(serde_json::from_str::<ModeIndex>("2").is_err());
        assert_eq!(serde_json::to_string(&a).unwrap(), "-3");
    }

    #[test]
    fn display_round_trips() {
        let m = ModeIndex::from_twice(-7).unwrap();
        assert_eq!(m.to_string().parse::<ModeIndex>().unwrap(), m);
    }
}
