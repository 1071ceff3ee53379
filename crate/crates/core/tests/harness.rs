use serde_json::Value;

use vacuum_nonlocality::harness::{column_names, emit, run_pipeline, to_csv, to_json, ExperimentConfig, Format};

fn dominance_config() -> ExperimentConfig {
    ExperimentConfig::from_toml("filter.dominance = 0.1").unwrap()
}

fn parse(text: &str) -> Vec<serde_json::Map<String, Value>> {
    serde_json::from_str::<Vec<Value>>(text)
        .unwrap()
        .into_iter()
        .map(|v| v.as_object().unwrap().clone())
        .collect()
}

#[test]
fn empty_csv_is_header_only() {
    let text = to_csv(&[]).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert_eq!(text.trim_end().split(',').collect::<Vec<_>>(), column_names());
}

#[test]
fn schema_starts_and_ends_as_documented() {
    let names = column_names();
    assert_eq!(&names[..4], ["L_over_T", "coupling", "eta", "d_AA_mm"]);
    for col in ["d_AA_mp", "d_AB_pp", "trace", "min_eig", "neg_A_BC", "neg_B_CA", "neg_C_AB", "fid_W", "S_star"] {
        assert!(names.iter().any(|n| n == col), "{col}");
    }
    assert_eq!(names.len(), 3 + 36 + 14);
}

#[test]
fn dominance_record() {
    let records = run_pipeline(&dominance_config()).unwrap();
    assert_eq!(records.len(), 1);
    let r = &records[0];
    assert!(r.error.is_none(), "{:?}", r.error);
    assert!((r.fid_w.unwrap() - 1.0).abs() < 1e-12);
    assert!(r.s_star.unwrap() > 4.0);
    assert_eq!(r.lp_feasible, Some(false));
    for n in r.negativity {
        assert!((n.unwrap() - 0.4714).abs() < 1e-4);
    }
}

#[test]
fn one_record_round_trips_through_json() {
    let records = run_pipeline(&dominance_config()).unwrap();
    let rows = parse(&to_json(&records));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0], records[0].columns());
    let csv = to_csv(&records).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn dominance_matches_golden_snapshot() {
    let records = run_pipeline(&dominance_config()).unwrap();
    let got = parse(&to_json(&records));
    let want = parse(include_str!("golden/dominance.json"));
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert_eq!(g.keys().collect::<Vec<_>>(), w.keys().collect::<Vec<_>>());
        for (k, wv) in w {
            match (wv, &g[k]) {
                (Value::Number(a), Value::Number(b)) => {
                    let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
                    assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{k}: {a} vs {b}");
                }
                (a, b) => assert_eq!(a, b, "{k}"),
            }
        }
    }
}

#[test]
fn zero_coupling_is_trivial() {
    let cfg = ExperimentConfig::from_toml("sweep.separations = [3.0]\nsweep.couplings = [0.0]\nfilter.eta = 0.5").unwrap();
    let records = run_pipeline(&cfg).unwrap();
    let r = &records[0];
    assert!(r.error.is_none(), "{:?}", r.error);
    assert!(r.amplitudes.as_ref().unwrap().iter().all(|a| *a == 0.0));
    assert!(r.negativity.iter().all(|n| n.unwrap().abs() < 1e-15));
    // A product state saturates the local bound but cannot exceed it.
    let s = r.s_star.unwrap();
    assert!((s - 4.0).abs() < 1e-9 && s <= r.hybrid_bound + 1e-12, "{s}");
    assert_eq!(r.lp_feasible, Some(true));
    // The local rotation maps |↓↓↓⟩ onto one of the three W branches.
    assert!((r.fid_w.unwrap() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn separation_sweep_decays() {
    let cfg = ExperimentConfig::from_toml("analysis.svetlichny = false").unwrap();
    let records = run_pipeline(&cfg).unwrap();
    assert_eq!(records.len(), 3);
    let col = column_names().iter().position(|c| c == "d_AB_pp").unwrap() - 3;
    let exchange: Vec<f64> = records.iter().map(|r| r.amplitudes.as_ref().unwrap()[col].abs()).collect();
    assert!(exchange.windows(2).all(|w| w[1] <= w[0]), "{exchange:?}");
    assert!(records.iter().all(|r| r.s_star.is_none() && r.lp_feasible.is_none()));
}

#[test]
fn failing_point_does_not_stop_others() {
    let cfg = ExperimentConfig::from_toml("filter.dominance = 0.1\nsweep.etas = [0.3, 1e-200]").unwrap();
    let records = run_pipeline(&cfg).unwrap();
    assert_eq!(records.len(), 2);
    assert!(records[0].error.is_none());
    assert!(records[1].error.is_some());
    assert_eq!(records[1].eta, Some(1e-200));
}

#[test]
fn invalid_config_is_rejected_up_front() {
    let mut cfg = ExperimentConfig::default();
    cfg.sweep.couplings.clear();
    assert!(run_pipeline(&cfg).is_err());
}

#[test]
fn emit_reports_path_on_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.json");
    let err = emit(&[], Format::Json, &path).unwrap_err();
    assert!(err.to_string().contains("missing"), "{err}");
    let ok = dir.path().join("out.csv");
    emit(&[], Format::Csv, &ok).unwrap();
    assert_eq!(std::fs::read_to_string(ok).unwrap(), to_csv(&[]).unwrap());
}
