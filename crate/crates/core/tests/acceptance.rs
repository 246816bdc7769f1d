//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, SQRT_2};
use std::process::ExitCode;

use lossy_optics::circuit::{decompose, lossy_mzi_netlist, parse, serialize, Element, Netlist};
use lossy_optics::dilation::{dilate, lossy_beamsplitter, reference_interferometer, LossConvention, LossyTransform};
use lossy_optics::engine::{
    coincidence, coincidence_map, p12_closed, p13_closed, FockOracle, PhotonPairSource,
};
use lossy_optics::experiment::{
    crossing_loss, run_scan, visibility, Observable, ScanConfig, VisibilityMetric,
};
use lossy_optics::linalg::{random_contraction, random_unitary, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

/// 1. 1000 random contractions (sizes 2–5) dilate to unitaries that recover
///    the source block, both at 1e−10.
fn dilation_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let (mut worst_unitary, mut worst_block) = (0.0f64, 0.0f64);
    for trial in 0..1000 {
        let n = 2 + trial % 4;
        let a = random_contraction(n, &mut rng);
        let d = dilate(&LossyTransform::new(a.clone()).map_err(e)?).map_err(e)?;
        worst_unitary = worst_unitary.max(d.matrix.unitarity_deviation().map_err(e)?);
        worst_block = worst_block.max(d.system_block().max_abs_diff(&a));
    }
    ensure(worst_unitary < 1e-10 && worst_block < 1e-10, || {
        format!("max |M†M − I| = {worst_unitary:e}, max block error = {worst_block:e}")
    })?;
    Ok(format!("max |M†M − I| = {worst_unitary:.1e}, max block error = {worst_block:.1e}"))
}

/// 2. Dilation of the lossy beamsplitter reproduces the reference 3x3
///    interferometer entrywise at 1e−12.
fn reference_golden() -> Outcome {
    let mut worst = 0.0f64;
    for theta in [0.0, FRAC_PI_8, FRAC_PI_4, 3.0 * FRAC_PI_8, FRAC_PI_2] {
        let d = dilate(&lossy_beamsplitter(theta.cos()).map_err(e)?).map_err(e)?.padded_to(3);
        let err = d.matrix.max_abs_diff(&reference_interferometer(theta));
        // spot-check the ancilla column against its closed form
        let s = theta.sin() / SQRT_2;
        let col = [Complex64::new(-s, 0.0), Complex64::new(0.0, s), Complex64::new(theta.cos(), 0.0)];
        for (i, z) in col.iter().enumerate() {
            worst = worst.max((d.matrix[(i, 2)] - z).norm());
        }
        worst = worst.max(err);
    }
    ensure(worst < 1e-12, || format!("max entry error {worst:e}"))?;
    Ok(format!("max entry error {worst:.1e}"))
}

/// 3. Lossless interferometer, ideal source: P12(0) = 0, P12(∞) = 0.5.
fn hom_dip() -> Outcome {
    let zero = p12_closed(0.0, 1.0);
    let long = p12_closed(0.0, 0.0);
    let src = PhotonPairSource::default();
    let m = reference_interferometer(0.0);
    let zero_num = coincidence(&m, &src, src.coherence(0.0), 1, 2).map_err(e)?;
    let long_num = coincidence(&m, &src, src.coherence(1e6), 1, 2).map_err(e)?;
    for (name, got, want) in [
        ("closed P12(0)", zero, 0.0),
        ("closed P12(∞)", long, 0.5),
        ("engine P12(0)", zero_num, 0.0),
        ("engine P12(∞)", long_num, 0.5),
    ] {
        ensure((got - want).abs() <= 1e-14, || format!("{name} = {got}, expected {want}"))?;
    }
    Ok(format!("P12(0) = {zero_num:.1e}, P12(∞) = {long_num}"))
}

/// 4. Full loss, ideal source: P12(0)/P12(∞) = 2.
fn factor_of_two_peak() -> Outcome {
    let cfg = ScanConfig::new(vec![1.0], Observable::P12, PhotonPairSource::default());
    let r = run_scan(&cfg).map_err(e)?;
    let ratio = r.zero_delay_value[0] / r.long_delay_baseline[0];
    let closed = p12_closed(FRAC_PI_2, 1.0) / p12_closed(FRAC_PI_2, 0.0);
    ensure((ratio - 2.0).abs() < 1e-12 && (closed - 2.0).abs() < 1e-12, || {
        format!("ratio {ratio}, closed-form ratio {closed}")
    })?;
    Ok(format!("ratio = {ratio}"))
}

/// 5. Loss channel at full loss: P13(∞) = 0.25, P13(0) = 0; dip visibility
///    equals ξ = 0.87.
fn loss_channel() -> Outcome {
    let long = p13_closed(FRAC_PI_2, 0.0);
    let zero = p13_closed(FRAC_PI_2, 1.0);
    ensure((long - 0.25).abs() < 1e-12 && zero.abs() < 1e-12, || {
        format!("P13(∞) = {long}, P13(0) = {zero}")
    })?;
    let cfg = ScanConfig::new(vec![1.0], Observable::P13, PhotonPairSource::with_visibility(0.87).map_err(e)?);
    let r = run_scan(&cfg).map_err(e)?;
    let v = visibility(r.zero_delay_value[0], r.long_delay_baseline[0], VisibilityMetric::Dip).map_err(e)?;
    ensure((v - 0.87).abs() < 1e-12, || format!("dip visibility {v}"))?;
    Ok(format!("P13(∞) = {long}, P13(0) = {zero:.1e}, dip visibility = {v}"))
}

/// 6. Full loss, ξ = 0.87: peak visibility of P12 equals 0.87.
fn peak_visibility() -> Outcome {
    let cfg = ScanConfig::new(vec![1.0], Observable::P12, PhotonPairSource::with_visibility(0.87).map_err(e)?);
    let r = run_scan(&cfg).map_err(e)?;
    let v = visibility(r.zero_delay_value[0], r.long_delay_baseline[0], VisibilityMetric::Peak).map_err(e)?;
    ensure((v - 0.87).abs() < 1e-12, || format!("peak visibility {v}"))?;
    Ok(format!("peak visibility = {v}"))
}

/// 7. Closed forms and the amplitude formula agree with the Fock-space
///    oracle to 1e−12 on a 21x11 (θ, γ) grid and 200 random unitaries.
fn oracle_equivalence() -> Outcome {
    let src = PhotonPairSource::default();
    let mut worst_grid = 0.0f64;
    for i in 0..=20 {
        let theta = FRAC_PI_2 * i as f64 / 20.0;
        let oracle = FockOracle::new(&reference_interferometer(theta), &src).map_err(e)?;
        for j in 0..=10 {
            let gamma = j as f64 / 10.0;
            let map = oracle.coincidence_map(gamma);
            worst_grid = worst_grid
                .max((map.get(1, 2).map_err(e)? - p12_closed(theta, gamma)).abs())
                .max((map.get(1, 3).map_err(e)? - p13_closed(theta, gamma)).abs());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7007);
    let mut worst_random = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(3..=5);
        let u = random_unitary(n, &mut rng);
        let a = rng.random_range(1..=n);
        let b = (a + rng.random_range(0..n - 1)) % n + 1;
        let src = PhotonPairSource::new(a, b, 1.0, 1.0).map_err(e)?;
        let oracle = FockOracle::new(&u, &src).map_err(e)?;
        for gamma in [0.0, 0.3, 0.87, 1.0] {
            for (m, k, p) in oracle.coincidence_map(gamma).pairs() {
                let fast = coincidence(&u, &src, gamma, m, k).map_err(e)?;
                worst_random = worst_random.max((fast - p).abs());
            }
        }
    }
    ensure(worst_grid < 1e-12 && worst_random < 1e-12, || {
        format!("grid deviation {worst_grid:e}, random deviation {worst_random:e}")
    })?;
    Ok(format!("grid deviation {worst_grid:.1e}, random-unitary deviation {worst_random:.1e}"))
}

/// 8. Coincidence maps sum to one within 1e−12; input/output phase gauging
///    moves no probability by more than 1e−14.
fn conservation_and_gauge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8008);
    let (mut worst_total, mut worst_gauge) = (0.0f64, 0.0f64);
    for _ in 0..300 {
        let n = rng.random_range(2..=6);
        let u = random_unitary(n, &mut rng);
        let a = rng.random_range(1..=n);
        let b = (a + rng.random_range(0..n - 1)) % n + 1;
        let src = PhotonPairSource::new(a, b, 1.0, 1.0).map_err(e)?;
        for gamma in [0.0, 0.3, 0.87, 1.0, rng.random::<f64>()] {
            let map = coincidence_map(&u, &src, gamma).map_err(e)?;
            worst_total = worst_total.max((map.total() - 1.0).abs());
            let mut gauged = u.clone();
            for j in 0..n {
                gauged.scale_col(j, Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)));
                gauged.scale_row(j, Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)));
            }
            let other = coincidence_map(&gauged, &src, gamma).map_err(e)?;
            for ((_, _, x), (_, _, y)) in map.pairs().zip(other.pairs()) {
                worst_gauge = worst_gauge.max((x - y).abs());
            }
        }
    }
    for i in 0..=20 {
        let m = reference_interferometer(FRAC_PI_2 * i as f64 / 20.0);
        for gamma in [0.0, 0.5, 1.0] {
            let total = coincidence_map(&m, &PhotonPairSource::default(), gamma).map_err(e)?.total();
            worst_total = worst_total.max((total - 1.0).abs());
        }
    }
    ensure(worst_total < 1e-12 && worst_gauge <= 1e-14, || {
        format!("total deviation {worst_total:e}, gauge deviation {worst_gauge:e}")
    })?;
    Ok(format!("total deviation {worst_total:.1e}, gauge deviation {worst_gauge:.1e}"))
}

/// 9. The bunching/antibunching crossover, found by bisection on the closed
///    form, sits at cos²θ = 3 − 2√2, i.e. amplitude loss 2 − √2.
fn crossing_point() -> Outcome {
    let gap = |loss: f64| {
        let theta = (1.0 - loss).acos();
        p12_closed(theta, 1.0) - p12_closed(theta, 0.0)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    ensure(gap(lo) < 0.0 && gap(hi) > 0.0, || "crossing not bracketed".into())?;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let bisected = 0.5 * (lo + hi);
    let expected = 2.0 - SQRT_2;
    let eta = 1.0 - bisected;
    let analytic = crossing_loss(1.0).map_err(e)?;
    ensure((bisected - expected).abs() < 1e-10, || format!("bisection gives {bisected}"))?;
    ensure((eta * eta - (3.0 - 2.0 * SQRT_2)).abs() < 1e-10, || format!("cos²θ = {}", eta * eta))?;
    ensure((analytic - expected).abs() < 1e-10, || format!("crossing_loss gives {analytic}"))?;
    Ok(format!("bisected loss {bisected:.12}, expected {expected:.12}"))
}

/// 10. Netlist pipeline: decomposition round trip, lossy interferometer
///     layout against the dilation, token-exact text round trips.
fn netlist_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst_decomp = 0.0f64;
    for trial in 0..200 {
        let n = 2 + trial % 5;
        let u = random_unitary(n, &mut rng);
        worst_decomp = worst_decomp.max(decompose(&u).map_err(e)?.compile().max_abs_diff(&u));
    }

    let mut worst_layout = 0.0f64;
    for k in 0..50 {
        let theta = FRAC_PI_2 * k as f64 / 49.0;
        let compiled = lossy_mzi_netlist(theta).map_err(e)?.compile();
        let dilated = dilate(&lossy_beamsplitter(theta.cos()).map_err(e)?).map_err(e)?.padded_to(3);
        worst_layout = worst_layout.max(compiled.max_abs_diff(&dilated.matrix));
    }

    let mut round_trips = 0;
    for trial in 0..200 {
        let n = rng.random_range(2..=6);
        let mut nl = Netlist::new(n).map_err(e)?;
        for _ in 0..rng.random_range(0..15) {
            let a = rng.random_range(1..=n);
            let angle = rng.random_range(-10.0..10.0);
            let el = if rng.random_bool(0.5) {
                Element::coupler(a, a % n + 1, angle)
            } else {
                Element::phase(a, angle)
            };
            nl.push(el).map_err(e)?;
        }
        let text = serialize(&nl);
        let back = parse(&text).map_err(e)?;
        ensure(back == nl && serialize(&back) == text, || format!("round trip {trial} not exact:\n{text}"))?;
        round_trips += 1;
    }
    let mzi = lossy_mzi_netlist(FRAC_PI_4).map_err(e)?;
    ensure(parse(&serialize(&mzi)).map_err(e)? == mzi, || "interferometer netlist round trip".into())?;

    ensure(worst_decomp < 1e-8 && worst_layout < 1e-10, || {
        format!("decomposition error {worst_decomp:e}, layout error {worst_layout:e}")
    })?;
    Ok(format!(
        "decomposition error {worst_decomp:.1e}, layout error {worst_layout:.1e}, {round_trips} exact round trips"
    ))
}

/// 11. Low-loss configuration (loss 0.07, ξ = 0.87): every metric is finite,
///     reproducible and consistent with the oracle.
fn low_loss_metrics() -> Outcome {
    let src = PhotonPairSource::with_visibility(0.87).map_err(e)?;
    let mut report = Vec::new();
    for convention in [LossConvention::Amplitude, LossConvention::Power] {
        let mut cfg = ScanConfig::new(vec![0.07], Observable::P12, src);
        cfg.loss_convention = convention;
        cfg.verify = true;
        let first = run_scan(&cfg).map_err(e)?;
        let second = run_scan(&cfg).map_err(e)?;

        let eta = convention.eta_from_loss(0.07).map_err(e)?;
        let oracle = FockOracle::new(&reference_interferometer(eta.acos()), &src).map_err(e)?;
        let zero_oracle = oracle.coincidence(0.87, 1, 2).map_err(e)?;
        let long_oracle = oracle.coincidence(0.0, 1, 2).map_err(e)?;

        for metric in [VisibilityMetric::Dip, VisibilityMetric::Peak, VisibilityMetric::Michelson] {
            let a = visibility(first.zero_delay_value[0], first.long_delay_baseline[0], metric).map_err(e)?;
            let b = visibility(second.zero_delay_value[0], second.long_delay_baseline[0], metric).map_err(e)?;
            let o = visibility(zero_oracle, long_oracle, metric).map_err(e)?;
            ensure(a.is_finite(), || format!("{convention} {metric:?} not finite"))?;
            ensure(a == b, || format!("{convention} {metric:?} not reproducible: {a} vs {b}"))?;
            ensure((a - o).abs() < 1e-12, || format!("{convention} {metric:?}: {a} vs oracle {o}"))?;
            report.push(format!("{convention}/{metric:?}={a:.4}"));
        }
    }
    Ok(report.join(" "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("dilation correctness", dilation_correctness),
        ("reference interferometer golden values", reference_golden),
        ("HOM dip", hom_dip),
        ("factor-of-two peak", factor_of_two_peak),
        ("loss-channel correlations", loss_channel),
        ("peak visibility matches source", peak_visibility),
        ("oracle equivalence", oracle_equivalence),
        ("conservation and phase invariance", conservation_and_gauge),
        ("crossing point", crossing_point),
        ("netlist pipeline", netlist_pipeline),
        ("low-loss visibility metrics", low_loss_metrics),
    ];

    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] AC{:02} {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] AC{:02} {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
