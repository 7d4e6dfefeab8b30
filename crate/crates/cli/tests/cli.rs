//! Command-line behavior: configuration precedence, reports, sweeps,
//! teleportation input and exit codes.

use std::process::Command;

use optoent::gaussian::{format_cm, GaussianState};
use optoent_cli::config::Settings;
use optoent_cli::report::{single_report, MetricGroup};
use optoent_cli::sweep::{run_sweep, Axis, Metric, SweepPlan, System};
use optoent_cli::CliError;
use serde_json::Value;

/// Runs the command line in-process and returns `(exit code, stdout, stderr)`.
fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("optoent").chain(args.iter().copied());
    let code = optoent_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn plan(a1: &str, a2: &str, metric: Metric, system: System, degenerate: bool) -> SweepPlan {
    SweepPlan::new(Axis::parse(a1).unwrap(), Axis::parse(a2).unwrap(), metric, system, degenerate).unwrap()
}

#[test]
fn override_beats_file_beats_default() {
    let s = Settings::resolve_text(None, &[]).unwrap();
    assert_eq!(s.get("power_w").unwrap(), 0.03);
    let s = Settings::resolve_text(Some("power_w = 0.02\ntemperature_k = 1"), &[]).unwrap();
    assert_eq!((s.get("power_w").unwrap(), s.get("temperature_k").unwrap()), (0.02, 1.0));
    let s = Settings::resolve_text(Some("power_w = 0.02"), &["power_w=0.01".into()]).unwrap();
    assert_eq!(s.get("power_w").unwrap(), 0.01);
}

#[test]
fn config_file_and_set_flag_through_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "power_w = 0.02\nmass_kg = 4e-11\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["--config", p, "--set", "power_w=0.025", "report", "--no-metrics"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["inputs"]["power_w"], 0.025);
    assert_eq!(v["inputs"]["mass_kg"], 4e-11);
}

#[test]
fn malformed_configuration_exits_with_one() {
    let (code, _, err) = run(&["--set", "not_a_key=3", "report"]);
    assert_eq!(code, 1, "{err}");
    let (code, _, _) = run(&["--set", "power_w=fast", "report"]);
    assert_eq!(code, 1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "power_w = [").unwrap();
    let (code, _, _) = run(&["--config", path.to_str().unwrap(), "report"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["--config", "/nonexistent/run.toml", "report"]);
    assert_eq!(code, 1);
    assert!(matches!(Settings::resolve_text(None, &["power_w=inf".into()]), Err(CliError::ConfigParse(_))));
}

#[test]
fn report_echoes_coupling_at_default_point() {
    let (code, out, _) = run(&["report"]);
    assert_eq!(code, 0);
    let v = json(&out);
    let g = v["derived"]["g_over_omega_m"].as_f64().unwrap();
    assert!((g - 0.41).abs() / 0.41 < 0.03, "G/ω_m = {g}");
    assert!(v["stability"]["stable"].as_bool().unwrap());
    assert!(v["intracavity"]["log_negativity"].as_f64().unwrap() > 0.0);
    assert_eq!(v["provenance"]["tool"], "optoent");
    assert_eq!(v["provenance"]["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn decoupled_report_has_no_entanglement_and_thermal_occupation() {
    let s = Settings::resolve_text(None, &["power_w=0".into()]).unwrap();
    let (rec, unstable) = single_report(&s, &[MetricGroup::Intracavity]).unwrap();
    assert!(unstable.is_none());
    let intra = rec.intracavity.unwrap();
    assert_eq!(intra.log_negativity, 0.0);
    assert!((intra.n_eff - rec.derived.params.nbar).abs() < 1e-6 * rec.derived.params.nbar, "{} vs {}", intra.n_eff, rec.derived.params.nbar);
}

#[test]
fn report_csv_is_flat_key_value() {
    let (code, out, _) = run(&["--format", "csv", "report", "--metrics", "intracavity,output"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("key,value"));
    assert!(lines.all(|l| l.split(',').count() == 2));
    assert!(out.contains("\noutput.E_N_mirror_first,"));
}

#[test]
fn unstable_report_writes_partial_record_and_exits_with_two() {
    let (code, out, err) = run(&["--set", "detuning_over_omega_m=-1", "--set", "power_w=0.2", "report"]);
    assert_eq!(code, 2, "{err}");
    let v = json(&out);
    assert!(!v["stability"]["stable"].as_bool().unwrap());
    assert!(v.get("intracavity").is_none());
    let (code, _, _) = run(&["--set", "detuning_over_omega_m=-1", "--set", "power_w=0.2", "report", "--no-metrics"]);
    assert_eq!(code, 0);
}

#[test]
fn teleport_on_two_mode_squeezed_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tms.cm");
    std::fs::write(&path, format_cm(&GaussianState::two_mode_squeezed(1.0))).unwrap();
    let (code, out, _) = run(&["teleport", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    let f = v["F_opt"].as_f64().unwrap();
    assert!((f - 1.0 / (1.0 + (-1f64).exp())).abs() < 1e-8, "F = {f}");
    assert!((v["nu"].as_f64().unwrap() - (-1f64).exp()).abs() < 1e-10);
}

#[test]
fn teleport_random_is_seeded() {
    let a = run(&["--seed", "11", "teleport", "--random"]);
    let b = run(&["--seed", "11", "teleport", "--random"]);
    let c = run(&["--seed", "12", "teleport", "--random"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    assert_ne!(a.1, c.1);
    assert_eq!(run(&["teleport"]).0, 1);
}

#[test]
fn membrane_report_is_split() {
    let (code, out, _) = run(&["membrane"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!(v["split"]["omega_plus"].as_f64().unwrap() > v["split"]["omega_minus"].as_f64().unwrap());
}

#[test]
fn sweep_is_row_major_with_named_header() {
    let p = plan("power_w:0.01:0.03:3", "temperature_k:0.2:0.4:2", Metric::ENIntracavity, System::Single, false);
    let csv = run_sweep(&p, &Settings::resolve_text(None, &[]).unwrap(), 1).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "power_w,temperature_k,E_N_intracavity,n_eff,stable");
    assert_eq!(lines.len(), 7);
    let keys: Vec<(f64, f64)> = lines[1..]
        .iter()
        .map(|l| {
            let mut it = l.split(',').map(|x| x.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    let want = [(0.01, 0.2), (0.01, 0.4), (0.02, 0.2), (0.02, 0.4), (0.03, 0.2), (0.03, 0.4)];
    for (got, want) in keys.iter().zip(want) {
        assert!((got.0 - want.0).abs() < 1e-15 && (got.1 - want.1).abs() < 1e-15, "{keys:?}");
    }
    for l in &lines[1..] {
        for cell in l.split(',') {
            let x: f64 = cell.parse().unwrap();
            assert!(x.is_finite() || cell == "NaN");
        }
    }
}

#[test]
fn sweep_output_is_independent_of_worker_count() {
    let s = Settings::resolve_text(None, &[]).unwrap();
    let p = plan("detuning_over_omega_m:0.2:2:4", "power_w:0.003:0.06:4", Metric::ENIntracavity, System::Single, false);
    let one = run_sweep(&p, &s, 1).unwrap();
    assert_eq!(one, run_sweep(&p, &s, 4).unwrap());
    assert_eq!(one, run_sweep(&p, &s, 0).unwrap());
    assert_eq!(one, run_sweep(&p, &s, 1).unwrap());
}

#[test]
fn degenerate_sweep_matches_report() {
    let s = Settings::resolve_text(None, &[]).unwrap();
    let p = plan("power_w:0.03:0.03:1", "temperature_k:0.4:0.4:1", Metric::ENIntracavity, System::Single, true);
    let csv = run_sweep(&p, &s, 1).unwrap();
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let (rec, _) = single_report(&s, &[MetricGroup::Intracavity]).unwrap();
    let intra = rec.intracavity.unwrap();
    assert_eq!(row[2], intra.log_negativity);
    assert_eq!(row[3], intra.n_eff);
    assert_eq!(row[4], 1.0);
    assert!(SweepPlan::new(Axis::parse("power_w:0.03:0.03:1").unwrap(), Axis::parse("temperature_k:0:1:2").unwrap(), Metric::ENIntracavity, System::Single, false).is_err());
}

#[test]
fn sweep_plan_validation() {
    let ok = |a: &str| Axis::parse(a).is_ok();
    assert!(ok("power_w:0:1:3"));
    assert!(!ok("power_w:0:1"));
    let a = Axis::parse("power_w:0:1:2").unwrap();
    let nan = Axis::parse("temperature_k:0:nan:3").unwrap();
    assert!(SweepPlan::new(a.clone(), nan, Metric::ENIntracavity, System::Single, false).is_err());
    assert!(SweepPlan::new(a.clone(), a.clone(), Metric::ENIntracavity, System::Single, false).is_err());
    let bogus = Axis::parse("flux_capacitance:0:1:2").unwrap();
    assert!(SweepPlan::new(bogus, a, Metric::ENIntracavity, System::Single, false).is_err());
}

#[test]
fn unstable_sweep_points_are_nan_and_flagged() {
    let s = Settings::resolve_text(None, &["detuning_over_omega_m=-1".into()]).unwrap();
    let p = plan("power_w:1e-9:0.3:2", "temperature_k:0.4:0.5:2", Metric::ENIntracavity, System::Single, false);
    let csv = run_sweep(&p, &s, 2).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(rows[0].ends_with(",1") && !rows[0].contains("NaN"));
    assert!(rows[2].ends_with(",0.4,NaN,NaN,0") && rows[3].ends_with(",0.5,NaN,NaN,0"), "{rows:?}");
}

#[test]
fn stability_metric_keeps_values_when_unstable() {
    let s = Settings::resolve_text(None, &["detuning_over_omega_m=-1".into()]).unwrap();
    let p = plan("power_w:1e-9:0.3:2", "temperature_k:0.4:0.4:1", Metric::Stability, System::Single, true);
    let csv = run_sweep(&p, &s, 1).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert!(rows[0][2].parse::<f64>().unwrap() < 0.0 && rows[0][3] == "1");
    assert!(rows[1][2].parse::<f64>().unwrap() > 0.0 && rows[1][3] == "0");
}

#[test]
fn dual_sweep_through_command_line() {
    let args = ["--set", "filter_shape=exponential", "dual-sweep", "--axis1", "filter_epsilon:2:10:2", "--axis2", "temperature_k:0.4:0.4:1", "--allow-degenerate", "--metric", "E_N_output"];
    let (code, out, err) = run(&args);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "filter_epsilon,temperature_k,E_N_output,E_N_mirror_a,E_N_mirror_b,stable");
    assert_eq!(lines.len(), 3);
    let (code, json_out, _) = run(&[&["--format", "json"][..], &args[..]].concat());
    assert_eq!(code, 0);
    let v = json(&json_out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn report_json_is_reproducible() {
    let a = run(&["dual-report", "--metrics", "intracavity,output"]);
    let b = run(&["dual-report", "--metrics", "intracavity,output"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_optoent");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code().unwrap();
    assert_eq!(code(&["report", "--no-metrics"]), 0);
    assert_eq!(code(&["--set", "bogus=1", "report"]), 1);
    assert_eq!(code(&["--set", "detuning_over_omega_m=-1", "--set", "power_w=0.2", "report"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let (code, out, _) = run(&["--output", path.to_str().unwrap(), "report", "--no-metrics"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(json(&std::fs::read_to_string(&path).unwrap())["derived"].is_object());
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn sweep_cells_parse_and_ignore_worker_count(
            lo in 0.2f64..1.0,
            span in 0.1f64..1.5,
            p_lo in 1e-4f64..0.02,
            p_span in 1e-3f64..0.2,
            threads in 1usize..5,
        ) {
            let s = Settings::resolve_text(None, &[]).unwrap();
            let p = SweepPlan::new(
                Axis { name: "detuning_over_omega_m".into(), lo, hi: lo + span, count: 3 },
                Axis { name: "power_w".into(), lo: p_lo, hi: p_lo + p_span, count: 3 },
                Metric::NEff,
                System::Single,
                false,
            ).unwrap();
            let csv = run_sweep(&p, &s, 1).unwrap();
            prop_assert_eq!(&csv, &run_sweep(&p, &s, threads).unwrap());
            let lines: Vec<&str> = csv.lines().collect();
            prop_assert_eq!(lines.len(), 10);
            let width = lines[0].split(',').count();
            for l in &lines[1..] {
                let cells: Vec<&str> = l.split(',').collect();
                prop_assert_eq!(cells.len(), width);
                for c in &cells {
                    let x: f64 = c.parse().unwrap();
                    prop_assert!(x.is_finite() || *c == "NaN");
                }
                prop_assert!(cells[width - 1] == "0" || cells[width - 1] == "1");
            }
        }

        #[test]
        fn config_hash_ignores_key_order(power in 1e-3f64..0.1, temp in 0.01f64..300.0) {
            let a = Settings::resolve_text(Some(&format!("power_w = {power:?}\ntemperature_k = {temp:?}")), &[]).unwrap();
            let b = Settings::resolve_text(Some(&format!("temperature_k = {temp:?}\npower_w = {power:?}")), &[]).unwrap();
            let c = Settings::resolve_text(None, &[format!("power_w={power:?}"), format!("temperature_k={temp:?}")]).unwrap();
            prop_assert_eq!(a.hash(), b.hash());
            prop_assert_eq!(a.hash(), c.hash());
        }
    }
}
