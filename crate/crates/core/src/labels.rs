use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DetectorId {
    A,
    B,
    C,
}

impl DetectorId {
    pub const ALL: [DetectorId; 3] = [DetectorId::A, DetectorId::B, DetectorId::C];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> DetectorId {
        Self::ALL[i]
    }

    pub fn letter(self) -> char {
        ['A', 'B', 'C'][self.index()]
    }
}

impl fmt::Display for DetectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for DetectorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "A" | "a" => Ok(DetectorId::A),
            "B" | "b" => Ok(DetectorId::B),
            "C" | "c" => Ok(DetectorId::C),
            _ => Err(Error::config(format!("unknown detector '{s}'"))),
        }
    }
}

/// Sign of the phase e^{±iΩt}; `Plus` raises the detector, `Minus` lowers it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Minus, Sign::Plus];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }

    /// Short form used in serialized keys.
    pub fn key(self) -> char {
        match self {
            Sign::Minus => 'm',
            Sign::Plus => 'p',
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

/// One smeared operator Φ_i^± in an ordered product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OperatorLabel {
    pub detector: DetectorId,
    pub sign: Sign,
}

impl OperatorLabel {
    pub fn new(detector: DetectorId, sign: Sign) -> Self {
        OperatorLabel { detector, sign }
    }
}

impl fmt::Display for OperatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.detector, self.sign.symbol())
    }
}

/// Parses the subscript/superscript notation, e.g. `("BCBC", "--++")`.
pub fn parse_string(detectors: &str, signs: &str) -> Result<Vec<OperatorLabel>, Error> {
    let ds: Vec<char> = detectors.chars().collect();
    let ss: Vec<char> = signs.chars().collect();
    if ds.len() != ss.len() {
        return Err(Error::config(format!(
            "operator string '{detectors}' and signs '{signs}' differ in length"
        )));
    }
    ds.iter()
        .zip(&ss)
        .map(|(d, s)| {
            let detector: DetectorId = d.to_string().parse()?;
            let sign = match s {
                '-' | 'm' => Sign::Minus,
                '+' | 'p' => Sign::Plus,
                _ => return Err(Error::config(format!("unknown sign '{s}'"))),
            };
            Ok(OperatorLabel::new(detector, sign))
        })
        .collect()
}

/// Key such as `d_BCBC_--++` for an ordered operator string.
pub fn string_key(ops: &[OperatorLabel]) -> String {
    let ds: String = ops.iter().map(|o| o.detector.letter()).collect();
    let ss: String = ops.iter().map(|o| o.sign.symbol()).collect();
    format!("d_{ds}_{ss}")
}
