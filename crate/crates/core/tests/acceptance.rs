//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Reference values and tolerances are pinned here,
//! independently of the library's own validation tables.

use std::process::Command;
use std::time::{Duration, Instant};

use dqre::catalog::lookup_application;
use dqre::distillation::poly::Polynomial;
use dqre::distillation::{compose_multilevel, enumerate_unit_model, PauliErrorRates, UnitKind};
use dqre::estimator::{Accounting, EstimateResult, Estimator, EstimatorOptions, EtaMode, HardwareModel};
use dqre::report::{log_grid, SweepAxis, SweepDocument};
use dqre::surface_code::PhysicalQubitModel;

const FAST: f64 = 50e-9;
const SLOW: f64 = 100e-6;
const HOUR: f64 = 3600.0;
const DAY: f64 = 86_400.0;
const YEAR: f64 = 365.25 * DAY;
const MONTH: f64 = YEAR / 12.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---------------------------------------------------------------- 1

/// Input-error terms per unit: rejection, X, Y, Z, each as
/// (coefficient, [x, y, z] exponents).
type Terms = &'static [(f64, [u8; 3])];
const UNIT_TABLE: [(UnitKind, [Terms; 4]); 4] = [
    (
        UnitKind::FiveQubitPerfect,
        [
            &[(5.0, [0, 0, 1]), (5.0, [0, 1, 0]), (5.0, [1, 0, 0])],
            &[(5.0, [1, 0, 2]), (5.0, [1, 2, 0])],
            &[(5.0, [0, 1, 2]), (5.0, [2, 1, 0])],
            &[(5.0, [0, 2, 1]), (5.0, [2, 0, 1])],
        ],
    ),
    (
        UnitKind::RepetitionX,
        [
            &[(2.0, [0, 0, 1]), (2.0, [0, 1, 0]), (2.0, [1, 0, 1]), (2.0, [1, 1, 0])],
            &[(2.0, [1, 0, 0])],
            &[(2.0, [0, 1, 1])],
            &[(1.0, [0, 2, 0]), (1.0, [0, 0, 2])],
        ],
    ),
    (
        UnitKind::RepetitionY,
        [
            &[(2.0, [0, 0, 1]), (2.0, [1, 0, 0]), (2.0, [1, 1, 0]), (2.0, [0, 1, 1])],
            &[(2.0, [1, 0, 1])],
            &[(2.0, [0, 1, 0])],
            &[(1.0, [2, 0, 0]), (1.0, [0, 0, 2])],
        ],
    ),
    (
        UnitKind::RepetitionZ,
        [
            &[(2.0, [1, 0, 0]), (2.0, [0, 1, 0]), (2.0, [1, 0, 1]), (2.0, [0, 1, 1])],
            &[(1.0, [0, 2, 0]), (1.0, [2, 0, 0])],
            &[(2.0, [1, 1, 0])],
            &[(2.0, [0, 0, 1])],
        ],
    ),
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for (kind, rows) in UNIT_TABLE {
        let model = match enumerate_unit_model(kind, 3) {
            Ok(m) => m,
            Err(e) => return outcome(false, format!("{kind}: {e}")),
        };
        for (derived, expected) in model.polynomials().into_iter().zip(rows) {
            let expected = Polynomial::from_terms(expected.iter().map(|(c, [x, y, z])| (*c, [*x, *y, *z, 0])));
            let derived = derived.input_part().truncate(expected.degree());
            checked += expected.len();
            if derived != expected {
                mismatches.push(format!("{kind}: {derived} != {expected}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches.is_empty() && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "{checked} terms over 16 polynomials, {} mismatches, {elapsed:.2?}{}",
            mismatches.len(),
            mismatches.first().map(|m| format!("; first: {m}")).unwrap_or_default()
        ),
    )
}

// ---------------------------------------------------------------- 2, 3

fn criterion_2() -> Outcome {
    use UnitKind::*;
    let start = Instant::now();
    let raw = PauliErrorRates::depolarizing(0.05).unwrap();
    let qubit = PhysicalQubitModel::new(FAST, 1e-4).unwrap();
    let chain = [
        (RepetitionZ, 1),
        (FiveQubitPerfect, 3),
        (RepetitionZ, 7),
        (RepetitionX, 9),
    ];
    let f = match compose_multilevel(&chain, raw, &qubit, dqre::surface_code::DEFAULT_CYCLE_FACTOR) {
        Ok(f) => f,
        Err(e) => return outcome(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let q = (f.physical_qubits as f64 - 324.0).abs() <= 0.10 * 324.0;
    let t = (f.period_steps - 873.0).abs() <= 0.15 * 873.0;
    let i = (f.raw_inputs - 55.0).abs() <= 0.15 * 55.0;
    let e = f.error() >= 4.5e-10 / 3.0 && f.error() <= 4.5e-10 * 3.0;
    outcome(
        q && t && i && e && elapsed < Duration::from_secs(1),
        format!(
            "Q_E {} (324 ±10%), T_E {:.1} (873 ±15%), I_E {:.2} (55 ±15%), eps_E {:.2e} (4.5e-10 x/÷3), {elapsed:.2?}",
            f.physical_qubits,
            f.period_steps,
            f.raw_inputs,
            f.error()
        ),
    )
}

fn criterion_3() -> Outcome {
    use UnitKind::*;
    let raw = PauliErrorRates::depolarizing(0.05).unwrap();
    let qubit = PhysicalQubitModel::new(FAST, 1e-4).unwrap();
    let f = match compose_multilevel(&[(RepetitionZ, 1), (RepetitionX, 1)], raw, &qubit, 10.0) {
        Ok(f) => f,
        Err(e) => return outcome(false, e.to_string()),
    };
    let pass = f.physical_qubits == 4 && f.nominal_steps == 4.0 && f.error() <= 0.013;
    outcome(
        pass,
        format!(
            "{} qubits (4), {} op-layers (4), error {:.4} (<= 0.013)",
            f.physical_qubits,
            f.nominal_steps,
            f.error()
        ),
    )
}

// ---------------------------------------------------------------- 4, 5, 7

/// (app, monolithic (qubits, s), distributed 1% (qubits, s), distributed 0.1%)
type Point = (f64, f64);

const BENCH: [(&str, Point, Point, Point); 8] = [
    ("ising", (0.0913e6, 7.92), (0.0881e6, 12.5), (0.131e6, 7.96)),
    (
        "fermi-hubbard",
        (0.260e6, 51.5 * 60.0),
        (0.395e6, 1.59 * HOUR),
        (0.395e6, 1.59 * HOUR),
    ),
    (
        "heisenberg",
        (0.235e6, 1.34 * DAY),
        (0.314e6, 2.39 * DAY),
        (0.314e6, 2.39 * DAY),
    ),
    (
        "rsa-2048",
        (8.67e6, 16.3 * HOUR),
        (20.9e6, 1.25 * DAY),
        (20.9e6, 1.25 * DAY),
    ),
    (
        "zns",
        (0.450e6, 3.22 * DAY),
        (0.941e6, 6.40 * DAY),
        (0.529e6, 9.92 * DAY),
    ),
    (
        "benzene",
        (0.750e6, 16.9 * DAY),
        (1.69e6, 29.8 * DAY),
        (0.796e6, 2.07 * MONTH),
    ),
    (
        "ruthenium",
        (1.71e6, 15.9 * DAY),
        (2.31e6, 1.88 * MONTH),
        (1.96e6, 1.96 * MONTH),
    ),
    (
        "nitrogenase",
        (2.28e6, 1.56 * YEAR),
        (3.53e6, 5.50 * YEAR),
        (2.74e6, 5.14 * YEAR),
    ),
];

fn within_factor(actual: f64, expected: f64, factor: f64) -> bool {
    let r = actual / expected;
    r >= 1.0 / factor && r <= factor
}

fn fast_estimator(bell: f64, accounting: Accounting, mode: EtaMode) -> Estimator {
    let hw = HardwareModel::new(FAST, 1e-4, bell, 10e6, 45_000).unwrap();
    let options = EstimatorOptions {
        accounting,
        eta_mode: mode,
        ..EstimatorOptions::default()
    };
    Estimator::new(hw, options).unwrap()
}

struct Distributed {
    /// [bell 1%, bell 0.1%][strict, refined][app]
    reps: [[Vec<Option<EstimateResult>>; 2]; 2],
}

fn distributed_runs() -> Distributed {
    let mut reps: [[Vec<Option<EstimateResult>>; 2]; 2] = Default::default();
    for (b, bell) in [0.01, 0.001].into_iter().enumerate() {
        let base = fast_estimator(bell, Accounting::Packed, EtaMode::Strict);
        for (m, mode) in [EtaMode::Strict, EtaMode::Refined].into_iter().enumerate() {
            let est = base.with_eta_mode(mode);
            reps[b][m] = BENCH
                .iter()
                .map(|(name, ..)| {
                    let app = lookup_application(name).unwrap();
                    est.search_distributed(&app).ok().map(|o| o.representative().clone())
                })
                .collect();
        }
    }
    Distributed { reps }
}

fn criterion_4() -> Outcome {
    let est = fast_estimator(0.01, Accounting::WholeNodes, EtaMode::Strict);
    let mut worst: (f64, String) = (1.0, String::new());
    let mut fails = Vec::new();
    for (name, (q, t), ..) in BENCH {
        let app = lookup_application(name).unwrap();
        let Ok(out) = est.search_monolithic(&app) else {
            fails.push(format!("{name}: no estimate"));
            continue;
        };
        let r = out.representative();
        for (metric, actual, expected) in [
            ("qubits", r.total_physical_qubits as f64, q),
            ("runtime", r.runtime_s, t),
        ] {
            let ratio = actual / expected;
            let off = ratio.max(1.0 / ratio);
            if off > worst.0 {
                worst = (off, format!("{name} {metric} ratio {ratio:.2}"));
            }
            if !within_factor(actual, expected, 2.0) {
                fails.push(format!("{name} {metric} ratio {ratio:.2}"));
            }
        }
    }
    let start = Instant::now();
    let report = dqre::validate::run(&EstimatorOptions::default(), None);
    let elapsed = start.elapsed();
    let timed = elapsed < Duration::from_secs(120) && report.is_ok();
    outcome(
        fails.is_empty() && timed,
        format!(
            "16 cells within 2x: {}; worst {}; full validate {elapsed:.1?} (< 2 min){}",
            if fails.is_empty() {
                "yes".to_string()
            } else {
                fails.join(", ")
            },
            worst.1,
            if report.is_ok() { "" } else { " but errored" },
        ),
    )
}

fn criterion_5(d: &Distributed) -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (i, (name, _, expected, _)) in BENCH.iter().enumerate() {
        let factor = if i < 3 { 2.0 } else { 3.0 };
        let mut cell = format!("{name}:");
        for (metric, pick, exp) in [
            (
                "Q",
                (|r: &EstimateResult| r.total_physical_qubits as f64) as fn(&EstimateResult) -> f64,
                expected.0,
            ),
            ("T", |r: &EstimateResult| r.runtime_s, expected.1),
        ] {
            let ratios: Vec<Option<f64>> = (0..2)
                .map(|m| d.reps[0][m][i].as_ref().map(|r| pick(r) / exp))
                .collect();
            let ok = ratios.iter().flatten().any(|&r| r >= 1.0 / factor && r <= factor);
            pass &= ok;
            let show = |r: Option<f64>| r.map_or("n/a".into(), |r| format!("{r:.2}"));
            cell += &format!(
                " {metric} strict {} refined {}{}",
                show(ratios[0]),
                show(ratios[1]),
                if ok { "" } else { " OUT" }
            );
        }
        lines.push(cell);
    }
    outcome(
        pass,
        format!(
            "ratios to reference (x{{2,3}} bands, either eta mode): {}",
            lines.join("; ")
        ),
    )
}

fn criterion_7(d: &Distributed) -> Outcome {
    let mut details = Vec::new();
    let mut any = false;
    for (m, mode) in ["strict", "refined"].into_iter().enumerate() {
        let reps: Vec<&EstimateResult> = (0..2).flat_map(|b| d.reps[b][m].iter().flatten()).collect();
        let mut edf: Vec<f64> = reps.iter().map(|r| r.fractions.edf).collect();
        edf.sort_by(f64::total_cmp);
        let n = edf.len();
        let median = if n % 2 == 1 {
            edf[n / 2]
        } else {
            0.5 * (edf[n / 2 - 1] + edf[n / 2])
        };
        let (lo, hi) = (edf[0], edf[n - 1]);
        let msdf_local = |r: &EstimateResult| {
            let local = r.regions.data + r.regions.msdf;
            r.regions.msdf as f64 / local as f64
        };
        let rsa = (0..2)
            .filter_map(|b| d.reps[b][m][3].as_ref())
            .map(msdf_local)
            .fold(0.0, f64::max);
        let qpe = (0..2)
            .flat_map(|b| d.reps[b][m][4..].iter().flatten())
            .map(msdf_local)
            .fold(0.0, f64::max);
        let ok =
            n == 16 && lo >= 0.15 && hi <= 0.64 && (0.25..=0.35).contains(&median) && rsa <= 0.02 && qpe >= 0.30;
        any |= ok;
        details.push(format!(
            "{mode}: {n}/16 runs, EDF fraction [{lo:.3}, {hi:.3}] (in [0.15, 0.64]), median {median:.3} (in [0.25, 0.35]), MSDF share factoring {rsa:.4} (<= 0.02), max QPE {qpe:.3} (>= 0.30){}",
            if ok { "" } else { " -> out" }
        ));
    }
    outcome(any, details.join("; "))
}

// ---------------------------------------------------------------- 6

fn slow_or_fast(t_op: f64, p: f64, eta: f64, mode: EtaMode, accounting: Accounting) -> Estimator {
    let hw = HardwareModel::new(t_op, p, 0.05, eta, 45_000).unwrap();
    let options = EstimatorOptions {
        accounting,
        eta_mode: mode,
        ..EstimatorOptions::default()
    };
    Estimator::new(hw, options).unwrap()
}

fn overheads(doc: &SweepDocument) -> Vec<Option<f64>> {
    doc.rows.iter().map(|r| r.overhead).collect()
}

fn non_increasing(xs: &[f64], rel: f64) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0] * (1.0 + rel))
}

fn criterion_6a() -> Outcome {
    let ising = lookup_application("ising").unwrap();
    let sizes = [3000.0, 5000.0, 15_000.0, 25_000.0, 45_000.0, 60_000.0, 100_000.0];
    let mut details = Vec::new();
    let mut pass = false;
    for (accounting, label) in [(Accounting::Packed, "packed"), (Accounting::WholeNodes, "whole-node")] {
        let est = slow_or_fast(SLOW, 1e-4, 5e3, EtaMode::Strict, accounting);
        let doc = SweepDocument::run(&est, &ising, SweepAxis::NodeSize, &sizes).unwrap();
        let ov = overheads(&doc);
        let show: Vec<String> = sizes
            .iter()
            .zip(&ov)
            .map(|(s, o)| format!("{}k:{}", s / 1e3, o.map_or("inf".into(), |o| format!("{o:.2}"))))
            .collect();
        let ok = if ov.iter().all(Option::is_some) {
            let v: Vec<f64> = ov.iter().flatten().copied().collect();
            let early = v[0] - v[5];
            let late = v[5] - v[6];
            non_increasing(&v, 1e-9) && late < 0.25 * early
        } else {
            false
        };
        if accounting == Accounting::Packed {
            pass = ok;
        }
        details.push(format!(
            "{label}{} [{}]",
            if ok { "" } else { " (not monotone)" },
            show.join(" ")
        ));
    }
    outcome(
        pass,
        format!("slow Ising, 5 kHz, scored on packed: {}", details.join("; ")),
    )
}

/// Per η point: fastest frontier runtime, representative runtime and
/// representative volume (infinite when infeasible).
fn eta_curve(est: &Estimator, app: &dqre::estimator::ApplicationProfile, grid: &[f64]) -> Vec<[f64; 3]> {
    grid.iter()
        .map(|&eta| {
            let e = est.with_hardware(est.hardware().with_eta(eta)).unwrap();
            match e.search_distributed(app) {
                Ok(o) => {
                    let fastest = o.frontier.iter().map(|r| r.runtime_s).fold(f64::INFINITY, f64::min);
                    let rep = o.representative();
                    [fastest, rep.runtime_s, rep.spacetime_volume]
                }
                Err(_) => [f64::INFINITY; 3],
            }
        })
        .collect()
}

fn criterion_6b() -> Outcome {
    let ising = lookup_application("ising").unwrap();
    let grid = log_grid(300.0, 2e8, 12).unwrap();
    let tail_start = grid.last().unwrap() / 100.0;
    let mut details = Vec::new();
    let mut modes_ok = [true, true];
    for (t_op, p, label) in [
        (FAST, 1e-4, "fast/1e-4"),
        (FAST, 1e-3, "fast/1e-3"),
        (SLOW, 1e-4, "slow/1e-4"),
        (SLOW, 1e-3, "slow/1e-3"),
    ] {
        let base = slow_or_fast(t_op, p, 1e6, EtaMode::Strict, Accounting::WholeNodes);
        for (m, mode) in [EtaMode::Strict, EtaMode::Refined].into_iter().enumerate() {
            let curve = eta_curve(&base.with_eta_mode(mode), &ising, &grid);
            let column = |k: usize| curve.iter().map(|c| c[k]).collect::<Vec<f64>>();
            let (fastest, rep_rt, volume) = (column(0), column(1), column(2));
            let mono = non_increasing(&fastest, 1e-9);
            let tail: Vec<f64> = grid
                .iter()
                .zip(&fastest)
                .filter(|(g, _)| **g >= tail_start * (1.0 - 1e-9))
                .map(|(_, r)| *r)
                .collect();
            let change = (tail[0] - tail[tail.len() - 1]) / tail[tail.len() - 1];
            let saturated_at = grid
                .iter()
                .zip(&fastest)
                .find(|(_, r)| **r <= fastest[fastest.len() - 1] * 1.01)
                .map(|(g, _)| *g)
                .unwrap_or(f64::NAN);
            let steps = fastest.windows(2).filter(|w| w[1] < w[0] * (1.0 - 1e-9)).count();
            let ok = mono && change < 0.01;
            modes_ok[m] &= ok;
            details.push(format!(
                "{label} {}: monotone {mono}, {steps} steps, tail change {:.1}%, within 1% from {saturated_at:.3e} Hz (representative: runtime monotone {}, volume monotone {})",
                ["strict", "refined"][m],
                100.0 * change,
                non_increasing(&rep_rt, 1e-9),
                non_increasing(&volume, 1e-9),
            ));
        }
    }
    let pass = modes_ok[0] || modes_ok[1];
    outcome(
        pass,
        format!(
            "fastest runtime per eta, tail = top two decades; strict {} refined {} (either mode over all 4 configs): {}",
            ok_word(modes_ok[0]),
            ok_word(modes_ok[1]),
            details.join("; ")
        ),
    )
}

fn ok_word(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fails"
    }
}

fn criterion_6c() -> Outcome {
    let ising = lookup_application("ising").unwrap();
    let est = slow_or_fast(SLOW, 1e-4, 10e3, EtaMode::Strict, Accounting::WholeNodes);
    let doc = SweepDocument::run(&est, &ising, SweepAxis::Eta, &[10e3]).unwrap();
    let ov = doc.rows[0].overhead;
    outcome(
        ov.is_some_and(|o| o < 3.0),
        format!(
            "slow Ising, 45k nodes, 5% Bell, 10 kHz: overhead {}",
            ov.map_or("n/a".into(), |o| format!("{o:.2}"))
        ),
    )
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let hw = HardwareModel::new(SLOW, 1e-4, 0.05, 10e3, 25_000).unwrap();
    let est = Estimator::new(hw, EstimatorOptions::default()).unwrap();
    let out = est.search_distributed(&lookup_application("ising").unwrap()).unwrap();
    let frontier: Vec<String> = out
        .frontier
        .iter()
        .map(|r| {
            format!(
                "{}n/{:.0}k/{:.2}h",
                r.nodes,
                r.total_physical_qubits as f64 / 1e3,
                r.runtime_s / HOUR
            )
        })
        .collect();
    let hit = out.frontier.iter().find(|r| r.nodes == 5);
    let pass = hit.is_some_and(|r| {
        (r.total_physical_qubits as f64 - 125e3).abs() <= 0.2 * 125e3
            && (r.runtime_s - 7.0 * HOUR).abs() <= 0.5 * 7.0 * HOUR
    });
    outcome(
        pass,
        format!(
            "5-node point {} (125k ±20%, 7 h ±50%); frontier [{}]",
            hit.map_or("missing".into(), |r| format!(
                "{:.0}k qubits, {:.2} h",
                r.total_physical_qubits as f64 / 1e3,
                r.runtime_s / HOUR
            )),
            frontier.join(", ")
        ),
    )
}

// ---------------------------------------------------------------- 9

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_dqre");
    let commands: [&[&str]; 6] = [
        &["estimate", "--app", "ising"],
        &["estimate", "--app", "heisenberg", "--format", "csv"],
        &[
            "sweep-node-size",
            "--app",
            "ising",
            "--preset",
            "slow-optimistic-bell5",
            "--sizes",
            "5000,25000",
        ],
        &[
            "sweep-eta",
            "--app",
            "ising",
            "--eta-min",
            "1e5",
            "--eta-max",
            "1e7",
            "--per-decade",
            "2",
            "--format",
            "csv",
        ],
        &["list-factories", "--target", "1e-9"],
        &["validate"],
    ];
    let mut bad = Vec::new();
    for args in commands {
        let run = || Command::new(bin).args(args).output().expect("run dqre");
        let (a, b) = (run(), run());
        if a.stdout != b.stdout || a.stdout.is_empty() || !a.status.success() {
            bad.push(args.join(" "));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} commands byte-identical across two runs", commands.len())
        } else {
            format!("differs or failed: {}", bad.join(" | "))
        },
    )
}

fn main() {
    // `cargo test` passes harness flags; a name filter that excludes us
    // (or `--list`) should not trigger the full suite.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    if let Some(filter) = args.iter().find(|a| !a.starts_with('-')) {
        if !"acceptance".contains(filter.as_str()) {
            return;
        }
    }

    let start = Instant::now();
    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 oracle equivalence", criterion_1()),
        ("2 multi-level worked example", criterion_2()),
        ("3 physical repetition distillation", criterion_3()),
        ("4 monolithic validation", criterion_4()),
    ];
    let distributed = distributed_runs();
    results.push(("5 distributed validation", criterion_5(&distributed)));
    results.push(("6a node-size sweep shape", criterion_6a()));
    results.push(("6b eta sweep shape", criterion_6b()));
    results.push(("6c slow qubits at 10 kHz", criterion_6c()));
    results.push(("7 system organization fractions", criterion_7(&distributed)));
    results.push(("8 slow Ising spot-check", criterion_8()));
    results.push(("9 determinism", criterion_9()));

    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1?}",
        results.len() - failed,
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
