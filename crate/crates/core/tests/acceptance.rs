//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gauss_marginals::{
    beam_splitter_pair, bs_param, diagonalize_balanced, dominates, is_symplectic, jacobi_decompose,
    pair_factor, random_state, reconstruct_two_mode, solve_couplings, sq_param, squeezer_pair,
    standard_form, symplectic_spectrum, synthesize, verify, williamson, CovarianceMatrix, Error,
    GeneratorKind, SpectralVector, SymplecticMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn sv(v: &[f64]) -> SpectralVector {
    SpectralVector::new(v.to_vec()).expect("positive values")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn worked_example_chain() -> Check {
    let kappa = sv(&[1., 2., 3., 4., 5., 12., 18.]);
    let m = sv(&[6., 7., 8., 9., 10., 11., 12.]);
    let expected: [[f64; 7]; 7] = [
        [1., 2., 3., 4., 5., 12., 18.],
        [6., 2., 3., 4., 5., 7., 18.],
        [6., 7., 3., 4., 5., 2., 18.],
        [6., 7., 8., 4., 5., 2., 23.],
        [6., 7., 8., 9., 5., 2., 26.],
        [6., 7., 8., 9., 10., 2., 21.],
        [6., 7., 8., 9., 10., 11., 12.],
    ];
    let start = Instant::now();
    let out = synthesize(&kappa, &m, 1e-10).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let chain = out.trace.chain();
    ensure(chain.len() == expected.len(), || {
        format!("chain has {} entries", chain.len())
    })?;
    let err = chain
        .iter()
        .zip(&expected)
        .map(|(g, w)| max_diff(g, w))
        .fold(0.0, f64::max);
    ensure(err <= 1e-9, || format!("chain deviates by {err:e}"))?;
    ensure(out.trace.stage_counts == [2, 1, 1, 2], || {
        format!("stage counts {:?}", out.trace.stage_counts)
    })?;
    ensure(elapsed < Duration::from_millis(100), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "chain error {err:.1e}, stages {:?}, {elapsed:?}",
        out.trace.stage_counts
    ))
}

fn dominance_example() -> Check {
    let cert = dominates(
        &sv(&[5., 2., 18., 4., 1., 12., 3.]),
        &sv(&[9., 7., 8., 6., 12., 11., 10.]),
    )
    .map_err(|e| e.to_string())?;
    ensure(cert.compatible, || "reported incompatible".into())?;
    ensure(cert.min_slack() >= 0.0, || {
        format!("min slack {}", cert.min_slack())
    })?;
    Ok(format!(
        "slacks {:?}, tail {}",
        cert.partial_sum_slacks, cert.tail_slack
    ))
}

fn synthesis_round_trip() -> Check {
    let start = Instant::now();
    let mut worst = [0.0_f64; 3];
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 9);
        let st = random_state(n, 1000 + seed, (1.0, 5.0)).map_err(|e| e.to_string())?;
        let kappa = symplectic_spectrum(&st.covariance).map_err(|e| e.to_string())?;
        let m = sv(&st.covariance.local_parameters());
        let out = synthesize(&kappa, &m, 1e-9).map_err(|e| format!("seed {seed}: {e}"))?;
        let rep = verify(&out.symplectic, &out.kappa, &m, 1e-8).map_err(|e| e.to_string())?;
        worst[0] = worst[0].max(rep.symplectic_residual);
        worst[1] = worst[1].max(rep.diagonal_residual);
        worst[2] = worst[2].max(rep.spectrum_residual);
        ensure(rep.passed, || format!("seed {seed} (n = {n}): {rep:?}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "200 states, residuals symplectic {:.1e} / diagonal {:.1e} / spectrum {:.1e}, {elapsed:?}",
        worst[0], worst[1], worst[2]
    ))
}

fn jacobi_oracle() -> Check {
    let mut worst_kappa = 0.0_f64;
    let mut worst_profit = 0.0_f64;
    let mut worst_off = 0.0_f64;
    for seed in 0..100u64 {
        let n = 2 + (seed as usize % 5);
        let st = random_state(n, 5000 + seed, (1.0, 4.0)).map_err(|e| e.to_string())?;
        let out = jacobi_decompose(&st.covariance, 1e-11, 100)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let diag = st
            .covariance
            .congruence(&out.symplectic)
            .map_err(|e| e.to_string())?;
        worst_off = worst_off.max(diag.max_off_block());
        let w = williamson(&st.covariance).map_err(|e| e.to_string())?;
        worst_kappa = worst_kappa.max(max_diff(out.kappa.values(), w.kappa.values()));
        let profits = out.trace.profits();
        ensure(
            profits.windows(2).all(|p| p[1] < p[0] * (1.0 + 1e-12)),
            || format!("seed {seed}: profit not decreasing: {profits:?}"),
        )?;
        let target = st.covariance.matrix().determinant().sqrt();
        let last = profits[profits.len() - 1];
        worst_profit = worst_profit.max(((last - target) / target).abs());
    }
    ensure(worst_off < 1e-10, || format!("off-block {worst_off:e}"))?;
    ensure(worst_kappa < 1e-8, || {
        format!("kappa mismatch {worst_kappa:e}")
    })?;
    ensure(worst_profit < 1e-8, || {
        format!("final profit off by {worst_profit:e}")
    })?;
    Ok(format!(
        "100 states, off-block {worst_off:.1e}, kappa {worst_kappa:.1e}, profit {worst_profit:.1e}"
    ))
}

fn two_mode_uniqueness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut accepted = 0;
    let mut worst_spectra = 0.0_f64;
    while accepted < 500 {
        let k1 = rng.gen_range(1.0..4.0);
        let k2 = k1 + rng.gen_range(0.0..3.0);
        let m1 = k1 + rng.gen_range(0.0..3.0);
        let m2 = m1 + rng.gen_range(0.0..3.0);
        if solve_couplings(m1, m2, k1, k2).is_err() {
            continue;
        }
        accepted += 1;
        let v = reconstruct_two_mode(m1, m2, k1, k2).map_err(|e| e.to_string())?;
        let w = williamson(&v).map_err(|e| e.to_string())?;
        let back = w.reconstruct();
        let err = max_diff(w.kappa.values(), &[k1, k2])
            .max(max_diff(&back.local_parameters(), &[m1, m2]));
        worst_spectra = worst_spectra.max(err);
    }
    ensure(worst_spectra < 1e-8, || {
        format!("spectra round trip {worst_spectra:e}")
    })?;

    let mut worst_form = 0.0_f64;
    for seed in 0..500u64 {
        let st = random_state(2, 9000 + seed, (1.0, 4.0)).map_err(|e| e.to_string())?;
        let kappa = symplectic_spectrum(&st.covariance).map_err(|e| e.to_string())?;
        let m = sorted(&st.covariance.local_parameters());
        let twin = reconstruct_two_mode(m[0], m[1], kappa.values()[0], kappa.values()[1])
            .map_err(|e| format!("seed {seed}: {e}"))?;
        let a = standard_form(&st.covariance)
            .map_err(|e| e.to_string())?
            .form;
        let b = standard_form(&twin).map_err(|e| e.to_string())?.form;
        worst_form = worst_form.max(a.distance(&b));
    }
    ensure(worst_form < 1e-8, || {
        format!("standard forms differ by {worst_form:e}")
    })?;
    Ok(format!(
        "500 quadruples (round trip {worst_spectra:.1e}), 500 state pairs (forms {worst_form:.1e})"
    ))
}

fn equality_boundaries() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0_f64;
    for case in 0..200 {
        let a = rng.gen_range(1.0..4.0);
        let b = a + rng.gen_range(0.2..3.0);
        let sum_branch = case % 2 == 0;
        let (ta, tb, expected_kind, expected) = if sum_branch {
            let ta = a + rng.gen_range(0.05..0.95) * 0.5 * (b - a);
            (
                ta,
                a + b - ta,
                GeneratorKind::BeamSplitter,
                bs_param(a, b, ta),
            )
        } else {
            let eps = rng.gen_range(0.05..2.0);
            (
                a + eps,
                b + eps,
                GeneratorKind::Squeezer,
                sq_param(a, b, eps),
            )
        };
        let expected = expected.map_err(|e| e.to_string())?;
        let s = pair_factor(a, b, ta, tb).map_err(|e| e.to_string())?;
        let v = CovarianceMatrix::thermal(&[a, b])
            .and_then(|d| d.congruence(&s))
            .map_err(|e| e.to_string())?;
        let form = standard_form(&v).map_err(|e| e.to_string())?.form;
        let bal = diagonalize_balanced(&form).map_err(|e| format!("case {case}: {e}"))?;
        ensure(bal.kind == expected_kind, || {
            format!(
                "case {case}: expected {expected_kind:?}, got {:?}",
                bal.kind
            )
        })?;
        let d = (bal.parameter.abs() - expected.abs()).abs();
        ensure(d < 1e-9, || {
            format!(
                "case {case}: parameter {} vs closed form {expected}",
                bal.parameter
            )
        })?;
        let diag = form
            .to_covariance()
            .congruence(&bal.transform())
            .map_err(|e| e.to_string())?;
        ensure(diag.max_off_block() < 1e-9, || {
            format!("case {case}: not diagonalized")
        })?;
        worst = worst.max(d);
    }
    Ok(format!("200 boundary cases, parameter error {worst:.1e}"))
}

fn negative_cases() -> Check {
    match synthesize(&sv(&[1., 1.]), &sv(&[1., 3.]), 1e-10) {
        Err(Error::IncompatibleSpectra(_)) => {}
        other => return Err(format!("(1,1) vs (1,3): {other:?}")),
    }
    let cert = dominates(&sv(&[1., 1.]), &sv(&[1., 3.])).map_err(|e| e.to_string())?;
    ensure(!cert.compatible && cert.tail_slack == -2.0, || {
        format!("{cert:?}")
    })?;
    match synthesize(&sv(&[0.5, 2.]), &sv(&[1., 2.]), 1e-10) {
        Err(Error::UnphysicalGlobalSpectrum(_)) => {}
        other => return Err(format!("kappa (0.5, 2): {other:?}")),
    }
    // m1 m2 - |P| < k1 k2
    match solve_couplings(1.0, 1.0, 1.0, 3.0) {
        Err(Error::IncompatibleSpectra(_)) => {}
        other => return Err(format!("solve_couplings(1, 1, 1, 3): {other:?}")),
    }
    Ok("all three rejected with the expected error".into())
}

fn invariant_suite() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = 1e-10;
    let mut product = SymplecticMatrix::identity(4);
    for _ in 0..40 {
        let j = rng.gen_range(0..4);
        let k = (j + rng.gen_range(1..4)) % 4;
        let g = if rng.gen_bool(0.5) {
            beam_splitter_pair(rng.gen_range(0.0..std::f64::consts::TAU), j, k, 4)
        } else {
            squeezer_pair(rng.gen_range(-0.5..0.5), j, k, 4)
        }
        .map_err(|e| e.to_string())?;
        ensure(g.residual() <= tol, || {
            format!("generator residual {:e}", g.residual())
        })?;
        product = g.compose(&product);
    }
    let scaled = tol
        * product
            .matrix()
            .iter()
            .fold(1.0_f64, |a, x| a.max(x.abs()))
            .powi(2);
    ensure(
        is_symplectic(product.matrix(), scaled).map_err(|e| e.to_string())?,
        || format!("product residual {:e}", product.residual()),
    )?;

    let mut worst_det = 0.0_f64;
    for seed in 0..50u64 {
        let n = 1 + (seed as usize % 6);
        let st = random_state(n, seed, (1.0, 3.0)).map_err(|e| e.to_string())?;
        let k = symplectic_spectrum(&st.covariance).map_err(|e| e.to_string())?;
        let det = st.covariance.matrix().determinant();
        worst_det = worst_det.max((k.product().powi(2) - det).abs() / det);
    }
    ensure(worst_det < 1e-8, || {
        format!("prod kappa^2 vs det V: {worst_det:e}")
    })?;

    let mut triples = 0;
    for _ in 0..300 {
        let n = rng.gen_range(2..7);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..5.0)).collect();
        let b: Vec<f64> = a.iter().map(|x| x + rng.gen_range(0.0..2.0)).collect();
        let c: Vec<f64> = b.iter().map(|x| x + rng.gen_range(-0.5..1.5)).collect();
        let ab = dominates(&sv(&a), &sv(&b)).map_err(|e| e.to_string())?;
        let bc = dominates(&sv(&b), &sv(&c)).map_err(|e| e.to_string())?;
        let mut ar = a.clone();
        ar.reverse();
        let mut cr = c.clone();
        cr.rotate_left(1);
        let p = dominates(&sv(&ar), &sv(&cr)).map_err(|e| e.to_string())?;
        let ac = dominates(&sv(&a), &sv(&c)).map_err(|e| e.to_string())?;
        ensure(p.compatible == ac.compatible, || {
            "permutation changed the verdict".into()
        })?;
        if ab.compatible && bc.compatible {
            triples += 1;
            ensure(ac.compatible, || {
                format!("transitivity fails on {a:?} {b:?} {c:?}")
            })?;
        }
    }
    ensure(triples > 0, || "no transitive premises sampled".into())?;

    let mut worst_law = 0.0_f64;
    for _ in 0..100 {
        let (a, b) = (rng.gen_range(1.0..5.0), rng.gen_range(1.0..5.0));
        let d = CovarianceMatrix::thermal(&[a, b]).map_err(|e| e.to_string())?;
        let bs = beam_splitter_pair(rng.gen_range(0.0..6.3), 0, 1, 2).map_err(|e| e.to_string())?;
        let m = d
            .congruence(&bs)
            .map_err(|e| e.to_string())?
            .local_parameters();
        worst_law = worst_law.max(((m[0] + m[1]) - (a + b)).abs() / (a + b));
        let sq = squeezer_pair(rng.gen_range(-1.0..1.0), 0, 1, 2).map_err(|e| e.to_string())?;
        let m = d
            .congruence(&sq)
            .map_err(|e| e.to_string())?
            .local_parameters();
        worst_law = worst_law.max(((m[1] - m[0]) - (b - a)).abs() / (a + b));
    }
    ensure(worst_law < 1e-12, || {
        format!("conservation laws off by {worst_law:e}")
    })?;
    Ok(format!(
        "product residual {:.1e}, det {worst_det:.1e}, {triples} transitive triples, laws {worst_law:.1e}",
        product.residual()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("worked example chain", worked_example_chain),
        ("dominance example", dominance_example),
        ("synthesis round trip", synthesis_round_trip),
        ("jacobi vs williamson", jacobi_oracle),
        ("two-mode uniqueness", two_mode_uniqueness),
        ("equality boundary branches", equality_boundaries),
        ("negative cases", negative_cases),
        ("invariant suite", invariant_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
