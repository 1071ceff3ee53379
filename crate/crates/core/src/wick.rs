//! Vacuum moments of ordered products of smeared field operators.
//!
//! The free vacuum is Gaussian, so an ordered n-point moment is the sum
//! over perfect matchings of products of ordered two-point functions, each
//! pair taken with its left operator first.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlator::AmplitudeSet;
use crate::error::{Error, Result};
use crate::labels::{parse_string, string_key, OperatorLabel};

pub const MAX_POINTS: usize = 12;

/// Ordered two-point function ⟨Φ_left Φ_right⟩.
pub trait PairFunction {
    fn pair(&self, left: OperatorLabel, right: OperatorLabel) -> Result<Complex64>;

    /// Identifies the configuration the pair values came from.
    fn fingerprint(&self) -> String {
        String::new()
    }
}

impl PairFunction for AmplitudeSet {
    fn pair(&self, left: OperatorLabel, right: OperatorLabel) -> Result<Complex64> {
        Ok(AmplitudeSet::pair(self, left, right))
    }

    fn fingerprint(&self) -> String {
        self.provenance.fingerprint.clone()
    }
}

/// Sparse pair function; missing pairs are configuration errors.
#[derive(Debug, Clone, Default)]
pub struct PairTable {
    pub values: HashMap<(OperatorLabel, OperatorLabel), Complex64>,
    pub fingerprint: String,
}

impl PairTable {
    pub fn insert(&mut self, left: OperatorLabel, right: OperatorLabel, v: Complex64) {
        self.values.insert((left, right), v);
    }
}

impl PairFunction for PairTable {
    fn pair(&self, left: OperatorLabel, right: OperatorLabel) -> Result<Complex64> {
        self.values
            .get(&(left, right))
            .copied()
            .ok_or_else(|| Error::config(format!("pair function undefined for ({left}, {right})")))
    }

    fn fingerprint(&self) -> String {
        self.fingerprint.clone()
    }
}

/// A perfect matching of {0..n-1}; pairs stored as (min, max), sorted.
pub type Matching = Vec<(usize, usize)>;

/// All (n−1)!! perfect matchings in lexicographic order.
pub fn pairings(n: usize) -> Result<Vec<Matching>> {
    if n % 2 == 1 {
        return Err(Error::domain(format!("cannot pair an odd number ({n}) of operators")));
    }
    if n > MAX_POINTS {
        return Err(Error::domain(format!("at most {MAX_POINTS} operators supported, got {n}")));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n / 2);
    let free: Vec<usize> = (0..n).collect();
    enumerate(&free, &mut current, &mut out);
    Ok(out)
}

fn enumerate(free: &[usize], current: &mut Matching, out: &mut Vec<Matching>) {
    if free.is_empty() {
        out.push(current.clone());
        return;
    }
    let first = free[0];
    for k in 1..free.len() {
        current.push((first, free[k]));
        let rest: Vec<usize> = free[1..]
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k - 1)
            .map(|(_, v)| *v)
            .collect();
        enumerate(&rest, current, out);
        current.pop();
    }
}

/// ⟨0|Φ_{o1} Φ_{o2} ⋯ Φ_{on}|0⟩ by Wick expansion. Odd strings vanish.
pub fn npoint<P: PairFunction + ?Sized>(ops: &[OperatorLabel], pairs: &P) -> Result<Complex64> {
    if ops.len() % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for m in pairings(ops.len())? {
        let mut term = Complex64::new(1.0, 0.0);
        for (l, r) in m {
            term *= pairs.pair(ops[l], ops[r])?;
        }
        total += term;
    }
    Ok(total)
}

fn pair_symbol(l: OperatorLabel, r: OperatorLabel) -> String {
    format!("d_{}{}^{}{}", l.detector, r.detector, l.sign.symbol(), r.sign.symbol())
}

/// Symbolic expansion, e.g.
/// `d_BCBC^--++ = d_BC^--·d_BC^++ + d_BB^-+·d_CC^-+ + d_BC^-+·d_CB^-+`.
pub fn expand_symbolic(ops: &[OperatorLabel]) -> Result<String> {
    let ds: String = ops.iter().map(|o| o.detector.letter()).collect();
    let ss: String = ops.iter().map(|o| o.sign.symbol()).collect();
    let lhs = format!("d_{ds}^{ss}");
    if ops.len() % 2 == 1 {
        return Ok(format!("{lhs} = 0"));
    }
    let terms: Vec<String> = pairings(ops.len())?
        .into_iter()
        .map(|m| {
            m.iter()
                .map(|&(l, r)| pair_symbol(ops[l], ops[r]))
                .collect::<Vec<_>>()
                .join("·")
        })
        .collect();
    Ok(format!("{lhs} = {}", terms.join(" + ")))
}

/// Higher-point strings of the three-detector density matrix, as
/// (detectors, signs).
pub const DENSITY_STRINGS: [(&str, &str); 10] = [
    ("ABCC", "---+"),
    ("ABCB", "---+"),
    ("ABCA", "---+"),
    ("BCBC", "--++"),
    ("CABC", "--++"),
    ("ABBC", "--++"),
    ("CACA", "--++"),
    ("ABCA", "--++"),
    ("ABAB", "--++"),
    ("ABCABC", "---+++"),
];

pub fn density_operator_strings() -> Vec<Vec<OperatorLabel>> {
    DENSITY_STRINGS
        .iter()
        .map(|(d, s)| parse_string(d, s).expect("static operator strings are valid"))
        .collect()
}

/// Higher-point amplitudes keyed like `d_BCBC_--++`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedAmplitudes {
    pub fingerprint: String,
    pub values: BTreeMap<String, Complex64>,
}

impl DerivedAmplitudes {
    pub fn get(&self, detectors: &str, signs: &str) -> Result<Complex64> {
        let key = string_key(&parse_string(detectors, signs)?);
        self.values
            .get(&key)
            .copied()
            .ok_or_else(|| Error::config(format!("derived amplitude {key} missing")))
    }
}

pub fn derived_from_pairs<P: PairFunction + ?Sized>(pairs: &P) -> Result<DerivedAmplitudes> {
    let mut values = BTreeMap::new();
    for ops in density_operator_strings() {
        values.insert(string_key(&ops), npoint(&ops, pairs)?);
    }
    Ok(DerivedAmplitudes {
        fingerprint: pairs.fingerprint(),
        values,
    })
}

/// Every 4- and 6-point amplitude entering the density matrix.
pub fn derived_amplitudes(base: &AmplitudeSet) -> Result<DerivedAmplitudes> {
    derived_from_pairs(base)
}
