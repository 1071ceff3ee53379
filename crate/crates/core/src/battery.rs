//! Validation battery run against the lattice oracle.

use serde::Serialize;

use crate::error::Result;
use crate::labels::{DetectorId, OperatorLabel, Sign};
use crate::oracle::{
    exact_evolution, oracle_amplitude_set, oracle_npoint, oracle_pair_function, order_study, EvolutionOptions, Lattice,
    LatticeFieldSpec,
};
use crate::rho::excited_index;
use crate::wick::{density_operator_strings, npoint, PairFunction};
use crate::windows::WindowSpec;

pub const WICK_TOL: f64 = 1e-8;
pub const TRUNCATION_CHANGE_TOL: f64 = 1e-8;
/// Required residual reduction per halving of the coupling.
pub const ORDER_RATIO: f64 = 5.656854249492381;
pub const POPULATION_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryReport {
    pub passed: bool,
    pub lattice: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryOptions {
    pub gap: f64,
    pub window: WindowSpec,
    pub field: LatticeFieldSpec,
    /// Coupling for the truncation comparison.
    pub coupling: f64,
    /// Decreasing by factors of two.
    pub order_couplings: Vec<f64>,
    pub population_coupling: f64,
    pub evolution: EvolutionOptions,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        BatteryOptions {
            gap: 4.0,
            window: WindowSpec::gaussian_default(1.0, 1.0).expect("default window is valid"),
            field: LatticeFieldSpec::default(),
            coupling: 1.0,
            order_couplings: vec![2.0, 1.0, 0.5, 0.25],
            population_coupling: 0.05,
            evolution: EvolutionOptions::default(),
        }
    }
}

impl BatteryOptions {
    fn lattice(&self, field: LatticeFieldSpec) -> Lattice {
        Lattice::evenly_spaced(field, self.gap, self.window.clone())
    }
}

fn check(name: &str, passed: bool, residual: f64, tolerance: f64, detail: String) -> Check {
    Check {
        name: name.into(),
        passed,
        residual,
        tolerance,
        detail,
    }
}

fn all_two_point() -> Vec<Vec<OperatorLabel>> {
    let mut out = Vec::new();
    for i in DetectorId::ALL {
        for a in Sign::ALL {
            for j in DetectorId::ALL {
                for b in Sign::ALL {
                    out.push(vec![OperatorLabel::new(i, a), OperatorLabel::new(j, b)]);
                }
            }
        }
    }
    out
}

/// Largest relative disagreement between the Wick expansion on lattice
/// pairs and the direct Fock-space product, over every density string.
pub fn wick_equivalence(lattice: &Lattice) -> Result<f64> {
    let pairs = oracle_pair_function(lattice)?;
    let mut worst: f64 = 0.0;
    for ops in all_two_point().into_iter().chain(density_operator_strings()) {
        let direct = oracle_npoint(lattice, &ops)?;
        let wick = npoint(&ops, &pairs)?;
        worst = worst.max((direct - wick).norm() / direct.norm().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Emission contribution per mode in each shell |n|, one shell beyond the
/// configured modes included.
pub fn mode_contributions(opts: &BatteryOptions) -> Result<Vec<(u32, f64)>> {
    let mut shells: Vec<u32> = opts.field.modes.iter().map(|n| n.unsigned_abs()).collect();
    shells.push(shells.iter().max().map_or(0, |m| m + 1));
    shells.sort_unstable();
    shells.dedup();
    let mut out = Vec::new();
    for s in shells {
        let modes = if s == 0 { vec![0] } else { vec![-(s as i32), s as i32] };
        let field = LatticeFieldSpec {
            modes,
            ..opts.field.clone()
        };
        let pairs = oracle_pair_function(&opts.lattice(field))?;
        let a = DetectorId::A;
        let v = pairs.pair(OperatorLabel::new(a, Sign::Minus), OperatorLabel::new(a, Sign::Plus))?;
        out.push((s, v.re / modes_in(s)));
    }
    Ok(out)
}

fn modes_in(shell: u32) -> f64 {
    if shell == 0 { 1.0 } else { 2.0 }
}

pub fn run_battery(opts: &BatteryOptions) -> Result<BatteryReport> {
    let lattice = opts.lattice(opts.field.clone());
    lattice.validate()?;
    let mut checks = Vec::new();

    let wick = wick_equivalence(&lattice)?;
    checks.push(check(
        "wick_equivalence",
        wick <= WICK_TOL,
        wick,
        WICK_TOL,
        "max relative error over all 2-, 4- and 6-point density strings".into(),
    ));

    let set = oracle_amplitude_set(&lattice)?;
    let emission: f64 = DetectorId::ALL.iter().map(|&d| set.get(d, Sign::Minus, d, Sign::Plus).re).sum();
    let norm = (set.norm_term - emission).abs() / emission;
    checks.push(check(
        "norm_term_identity",
        norm <= 1e-10,
        norm,
        1e-10,
        format!("C = {:e}, sum of emissions = {emission:e}", set.norm_term),
    ));

    let shells = mode_contributions(opts)?;
    let monotone = shells.windows(2).all(|w| w[1].1.abs() <= w[0].1.abs());
    let tail = shells.last().map_or(0.0, |s| s.1.abs());
    checks.push(check(
        "mode_tail",
        monotone,
        3.0 * tail / emission,
        1.0,
        format!("emission per mode in each |n| shell: {shells:?}"),
    ));

    let evolve = |max_occupation: usize| {
        let field = LatticeFieldSpec {
            max_occupation,
            ..opts.field.clone()
        };
        exact_evolution(&opts.lattice(field), opts.coupling, &opts.evolution)
    };
    let (low, high) = rayon::join(|| evolve(opts.field.max_occupation - 1), || evolve(opts.field.max_occupation));
    let (low, high) = (low?, high?);
    let change = (low.rho.matrix - high.rho.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max);
    checks.push(check(
        "truncation_change",
        change < TRUNCATION_CHANGE_TOL,
        change,
        TRUNCATION_CHANGE_TOL,
        format!(
            "n_max {} vs {} at coupling {}; norm drift {:e}",
            opts.field.max_occupation - 1,
            opts.field.max_occupation,
            opts.coupling,
            high.norm_drift
        ),
    ));
    checks.push(check(
        "unitarity",
        high.norm_drift <= 1e-12,
        high.norm_drift,
        1e-12,
        format!("{} steps, halving change {:e}", high.steps, high.halving_change),
    ));

    let study = order_study(&lattice, &opts.order_couplings, &opts.evolution)?;
    let ratios: Vec<f64> = study.windows(2).map(|w| w[0].1 / w[1].1).collect();
    let worst = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(check(
        "perturbative_order",
        worst >= ORDER_RATIO,
        worst,
        ORDER_RATIO,
        format!("residuals {study:?}, ratios {ratios:?}"),
    ));

    let g = opts.population_coupling;
    let ev = exact_evolution(&lattice, g, &opts.evolution)?;
    let mut pop: f64 = 0.0;
    for d in DetectorId::ALL {
        let expect = set.get(d, Sign::Minus, d, Sign::Plus).re * g * g;
        let got = ev.rho.matrix[(excited_index(d), excited_index(d))].re;
        pop = pop.max((got - expect).abs() / expect);
    }
    checks.push(check(
        "leading_order_populations",
        pop <= POPULATION_TOL,
        pop,
        POPULATION_TOL,
        format!("coupling {g}"),
    ));

    Ok(BatteryReport {
        passed: checks.iter().all(|c| c.passed),
        lattice: lattice.fingerprint(),
        checks,
    })
}
