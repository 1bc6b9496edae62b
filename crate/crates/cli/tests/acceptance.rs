//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::{LN_2, PI};
use std::fs;
use std::process::Command;
use std::time::Instant;

use cvtele::bogoliubov::{sudden_switch_oracle, sudden_switch_perturbative, CavityGeometry, OracleCache, RichardsonLadder};
use cvtele::gaussian::{make_two_mode_squeezed, partial_transpose_nu, teleport_fidelity};
use cvtele::protocol::{unperturbed_fidelity, Protocol, ProtocolParams};
use cvtele::runner::validate::{halving_ratios, ratios_in_range, reports_at, ORDER_CHECK_H};
use cvtele::trajectory::{acceleration_for_h, h_parameter, Segment, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const REST: f64 = 0.731_058_578_630_004_9;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn fig3() -> ProtocolParams {
    ProtocolParams::default()
}

fn g() -> CavityGeometry {
    CavityGeometry::circuit_qed()
}

fn rest_anchor() -> Outcome {
    let p = Protocol::new(fig3()).unwrap();
    let r = p.consistency_report(&Trajectory::at_rest(g())).unwrap();
    let worst = [r.f_raw, r.f_corrected, r.f_opt_numeric]
        .iter()
        .map(|f| (f - REST).abs())
        .fold(0.0, f64::max);
    outcome(worst < 1e-6, format!("max |F - 0.731059| = {worst:.2e}"))
}

fn tms_eigenvalue() -> Outcome {
    let worst = [0.1, 0.5, LN_2, 1.5]
        .iter()
        .map(|&r| (partial_transpose_nu(&make_two_mode_squeezed(r).unwrap()).unwrap() - (-2.0 * r).exp()).abs())
        .fold(0.0, f64::max);
    outcome(worst < 1e-9, format!("max |nu - e^-2r| = {worst:.2e}"))
}

fn classical_benchmark() -> Outcome {
    let f = teleport_fidelity(&make_two_mode_squeezed(0.0).unwrap()).unwrap();
    let p = Protocol::new(ProtocolParams { r: 0.0, ..fig3() }).unwrap();
    let f2 = p.fidelity_raw(&Trajectory::at_rest(g())).unwrap();
    let d = (f - 0.5).abs().max((f2 - 0.5).abs());
    outcome(d < 1e-9, format!("|F - 0.5| = {d:.2e}"))
}

fn zeroth_order_equivalence(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    let geometry = g();
    for _ in 0..1000 {
        let r = rng.gen_range(0.0..2.0);
        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
        let p = Protocol::new(ProtocolParams { r, ..fig3() }).unwrap();
        let d = phi / (geometry.omega(1) + geometry.omega(3));
        let t = Trajectory::new(vec![Segment::Inertial { duration_s: d }], geometry).unwrap();
        worst = worst.max((p.fidelity_raw(&t).unwrap() - unperturbed_fidelity(r, phi)).abs());
    }
    outcome(worst < 1e-9, format!("1000 samples, max deviation {worst:.2e}"))
}

fn phase_recovery(rng: &mut ChaCha8Rng) -> Outcome {
    let p = Protocol::new(fig3()).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let segs = (0..n)
            .map(|_| Segment::Inertial { duration_s: rng.gen_range(0.0..2e-9) })
            .collect();
        let t = Trajectory::new(segs, g()).unwrap();
        worst = worst.max((p.fidelity_corrected(&t).unwrap() - REST).abs());
    }
    outcome(worst < 1e-9, format!("50 trajectories, max |F_corrected - 0.731059| = {worst:.2e}"))
}

fn oracle_health() -> Outcome {
    let d10 = sudden_switch_oracle(0.245, &g()).unwrap().truncation_defect;
    let d20 = sudden_switch_oracle(0.245, &g().with_n_max(20)).unwrap().truncation_defect;
    let even = sudden_switch_perturbative(&OracleCache::new(g()), &RichardsonLadder::default())
        .unwrap()
        .even_parity_max();
    outcome(
        d10 <= 1e-3 && d20 <= 1e-4 && even < 1e-8,
        format!("residual N=10 {d10:.2e}, N=20 {d20:.2e}; even first order {even:.2e}"),
    )
}

fn expansion_order() -> Outcome {
    let p = Protocol::new(fig3()).unwrap();
    let reps = reports_at(&p, g().fundamental_period_s(), &ORDER_CHECK_H).unwrap();
    let res: Vec<f64> = reps.iter().map(|r| (r.f_raw - r.f_pert).abs()).collect();
    let ratios = halving_ratios(&res);
    outcome(ratios_in_range(&ratios), format!("h = {ORDER_CHECK_H:?}, ratios {ratios:.2?}"))
}

/// Gap `|F_corrected - F_opt|` at `h` and `h/2` on every grid point; the
/// ratio must be that of a fourth-order term wherever the gap is resolvable.
fn optimality_coincidence() -> Outcome {
    const FLOOR: f64 = 1e-9;
    let p = Protocol::new(fig3()).unwrap();
    let period = g().fundamental_period_s();
    let mut worst = (f64::INFINITY, f64::NEG_INFINITY);
    let mut resolved = 0;
    let mut unresolved_max: f64 = 0.0;
    for i in 0..10 {
        let tau = period * 3.0 * (i + 1) as f64 / 10.0;
        for j in 0..10 {
            let h = 0.05 + 0.195 * j as f64 / 9.0;
            let reps = reports_at(&p, tau, &[h, h / 2.0]).unwrap();
            let gaps: Vec<f64> = reps.iter().map(|r| (r.f_corrected - r.f_opt_numeric).abs()).collect();
            if gaps[0] > FLOOR && gaps[1] > FLOOR / 16.0 {
                let q = gaps[0] / gaps[1];
                worst = (worst.0.min(q), worst.1.max(q));
                resolved += 1;
            } else {
                unresolved_max = unresolved_max.max(gaps[0]);
            }
        }
    }
    let ok = resolved > 0 && ratios_in_range(&[worst.0, worst.1]);
    outcome(
        ok,
        format!(
            "{resolved}/100 points resolved, h-halving ratios in [{:.2}, {:.2}], unresolved gaps <= {unresolved_max:.1e}",
            worst.0, worst.1
        ),
    )
}

fn h_arithmetic() -> Outcome {
    let h = h_parameter(4e17, 0.012, 1.2e8).unwrap();
    let rel = (h - 1.0 / 3.0).abs() / (1.0 / 3.0);
    let ok = rel <= 1e-15 && h * h > 0.06;
    let back = acceleration_for_h(h, 0.012, 1.2e8);
    outcome(ok, format!("h = {h:.17}, relative error {rel:.1e}, h^2 = {:.4}, a(h) = {back:e}", h * h))
}

fn run_sweep_cli(jobs: &str, out: &std::path::Path) -> f64 {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_cvtele"))
        .args(["--preset", "fig3", "--jobs", jobs, "sweep", "--out", out.to_str().unwrap()])
        .status()
        .expect("sweep runs");
    assert!(status.success(), "sweep failed");
    start.elapsed().as_secs_f64()
}

/// Default sweep through the binary: the deficit band from its CSV, then
/// byte comparison of repeated and differently parallelized runs.
fn sweep_criteria() -> (Outcome, Outcome) {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    let secs = run_sweep_cli("0", &a);
    let text = fs::read_to_string(&a).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let (ci, ct, ca, ch) = (col("F_opt_numeric"), col("tau_s"), col("a_m_s2"), col("h"));
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut h_max: f64 = 0.0;
    let mut n = 0;
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let d = (REST - f[ci]) / REST;
        if d > best.0 {
            best = (d, f[ct], f[ca]);
        }
        h_max = h_max.max(f[ch]);
        n += 1;
    }
    let band = outcome(
        n == 10_000 && (0.02..=0.06).contains(&best.0),
        format!(
            "{n} points, max h^2 = {:.4}, max deficit {:.3}% at tau = {:.3e} s, a = {:.3e} m/s^2 ({secs:.1} s)",
            h_max * h_max,
            100.0 * best.0,
            best.1,
            best.2
        ),
    );
    run_sweep_cli("0", &b);
    run_sweep_cli("2", &c);
    let (ba, bb, bc) = (fs::read(&a).unwrap(), fs::read(&b).unwrap(), fs::read(&c).unwrap());
    let det = outcome(
        ba == bb && ba == bc,
        format!("repeat identical: {}, --jobs 0 vs 2 identical: {}", ba == bb, ba == bc),
    );
    (band, det)
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_101);
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut record = |name, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status}  {name:<32} {} [{:.2} s]", o.detail, start.elapsed().as_secs_f64());
        results.push((name, o));
    };
    record("rest-state anchor", &mut rest_anchor);
    record("tms symplectic eigenvalue", &mut tms_eigenvalue);
    record("classical benchmark", &mut classical_benchmark);
    record("zeroth-order equivalence", &mut || zeroth_order_equivalence(&mut rng));
    record("phase-correction recovery", &mut || phase_recovery(&mut rng));
    record("bogoliubov oracle health", &mut oracle_health);
    record("order of expansion", &mut expansion_order);
    record("optimality coincidence", &mut optimality_coincidence);
    let mut sweeps = None;
    record("motion deficit band", &mut || {
        let (band, det) = sweep_criteria();
        sweeps = Some(det);
        band
    });
    record("experimental h arithmetic", &mut h_arithmetic);
    record("determinism", &mut || sweeps.take().unwrap());
    let failed = results.iter().filter(|(_, o)| !o.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
