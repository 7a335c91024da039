//! Acceptance criteria, one report line each. Run with
//! `cargo test -p johnson-pst --test acceptance`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use johnson_pst::design::{design, DesignInput, PstDesign};
use johnson_pst::evolution::{AmplitudeEvaluator, DenseSectorEvolver};
use johnson_pst::exact::{ExactQd, ExactSpectrum};
use johnson_pst::graph::{IntersectionArray, JohnsonGraph};
use johnson_pst::spectral::{eval_polys, johnson_eigenvalues, QdParameters, Spectrum};
use johnson_pst::spin::{exchange_sector_matrix, heisenberg_oracle, OracleCaps};
use johnson_pst::subset::binomial;
use johnson_pst::verify::{verify_design, Oracle, CERTIFY_TOL};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn c1_worked_example() -> Outcome {
    let qd = ExactQd::johnson(2).map_err(|e| e.to_string())?;
    ensure(qd.alpha == vec![int(0), int(2), int(0)], || "alpha".into())?;
    ensure(qd.omega == vec![int(4), int(4)], || "omega".into())?;
    let fq = QdParameters::johnson(2).map_err(|e| e.to_string())?;
    for x in [-3i64, -1, 1, 2, 5] {
        let xr = int(x);
        let assoc = x * x - 2 * x - 4;
        let top = x * (x - 4) * (x + 2);
        ensure(qd.q_assoc_values(&xr)[2] == int(assoc), || format!("Q^(1)_2({x})"))?;
        ensure(qd.q_values(&xr)[3] == int(top), || format!("Q_3({x})"))?;
        let v = eval_polys(&fq, x as f64);
        ensure(
            (v.q_assoc[2] - assoc as f64).abs() <= 1e-12 && (v.q[3] - top as f64).abs() <= 1e-12,
            || format!("float polynomials at {x}"),
        )?;
    }

    let ex = ExactSpectrum::johnson(2).map_err(|e| e.to_string())?;
    ensure(ex.points == vec![int(4), int(0), int(-2)], || "exact support".into())?;
    ensure(ex.weights == vec![rat(1, 6), rat(1, 2), rat(1, 3)], || "exact weights".into())?;
    // reorder columns to (0, 4, -2)
    let order = [1usize, 0, 2];
    let p_ref: Vec<Vec<BigRational>> = ex
        .p
        .iter()
        .map(|row| order.iter().map(|&k| row[k].clone()).collect())
        .collect();
    let p_want = [[1, 1, 1], [0, 2, -1], [-1, 1, 1]];
    ensure(
        p_ref
            .iter()
            .zip(&p_want)
            .all(|(r, w)| r.iter().zip(w).all(|(a, &b)| *a == int(b))),
        || "exact P in reference order".into(),
    )?;
    let w_ref: Vec<BigRational> = order.iter().map(|&k| ex.weights[k].clone()).collect();
    ensure(w_ref == vec![rat(1, 2), rat(1, 6), rat(1, 3)], || "exact W in reference order".into())?;

    let sp = Spectrum::johnson(2).map_err(|e| e.to_string())?.eigen.permuted(&order);
    let mut err: f64 = 0.0;
    for i in 0..3 {
        for k in 0..3 {
            err = err.max((sp.p[(i, k)] - p_want[i][k] as f64).abs());
        }
    }
    for (a, b) in sp.measure.weights.iter().zip([0.5, 1.0 / 6.0, 1.0 / 3.0]) {
        err = err.max((a - b).abs());
    }
    for (a, b) in sp.measure.points.iter().zip([0.0, 4.0, -2.0]) {
        err = err.max((a - b).abs());
    }
    ensure(err <= 1e-12, || format!("float mode deviates by {err:e}"))?;
    Ok(format!("exact match; float max deviation {err:.1e}"))
}

fn c2_support_formula() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 1..=8 {
        let sp = Spectrum::johnson(m).map_err(|e| e.to_string())?;
        for (a, b) in sp.measure().points.iter().zip(johnson_eigenvalues(m)) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("m = 1..8, max deviation {worst:.1e}"))
}

fn c3_orthonormality() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 1..=8 {
        let sp = Spectrum::johnson(m).map_err(|e| e.to_string())?;
        worst = worst.max(sp.eigen.orthonormality_residual());
    }
    ensure(worst <= 1e-10, || format!("max |P W P^t - I| = {worst:e}"))?;
    Ok(format!("m = 1..8, max |P W P^t - I| = {worst:.1e}"))
}

fn c4_intersection_and_action() -> Outcome {
    for m in 1..=5u32 {
        let g = JohnsonGraph::antipodal(m).map_err(|e| e.to_string())?;
        let ia = g.intersection_numbers().map_err(|e| e.to_string())?;
        ensure(ia == IntersectionArray::johnson(m as u64), || format!("m={m}: {ia:?}"))?;
        let m64 = m as i64;
        let b = |l: i64| (m64 - l).pow(2);
        let c = |l: i64| l * l;
        ensure(
            (0..m64).all(|l| ia.b[l as usize] as i64 == b(l)) && (1..=m64).all(|l| ia.c[l as usize - 1] as i64 == c(l)),
            || format!("m={m}: closed form"),
        )?;

        // phi_l = u_l / C(m, l), u_l the stratum indicator. Compare
        // A phi_l against the three-term expression entrywise, scaled by
        // C(m, l) C(m, j) to stay in integers.
        let st = g.stratify(0).map_err(|e| e.to_string())?;
        let mut stratum = vec![0usize; g.len()];
        for (j, s) in st.strata.iter().enumerate() {
            for &v in s {
                stratum[v] = j;
            }
        }
        let root = |l: i64| binomial(m as u64, l as u64).unwrap() as i128;
        for l in 0..=m64 {
            let mut au = vec![0i128; g.len()];
            for &v in &st.strata[l as usize] {
                for u in g.neighbors(v) {
                    au[u] += 1;
                }
            }
            let coef = |j: i64| -> i128 {
                if j == l + 1 {
                    ((l + 1) * (m64 - l)) as i128
                } else if j == l {
                    (2 * l * (m64 - l)) as i128
                } else if j + 1 == l {
                    (l * (m64 - l + 1)) as i128
                } else {
                    0
                }
            };
            for v in 0..g.len() {
                let j = stratum[v] as i64;
                ensure(au[v] * root(j) == coef(j) * root(l), || {
                    format!("m={m}, l={l}: tridiagonal action fails at vertex {v}")
                })?;
            }
        }
    }
    Ok("m = 1..5, b_l = (m-l)^2, c_l = l^2, three-term action exact".into())
}

fn c5_permutation_identity() -> Outcome {
    for (n, m) in [(4u32, 2u32), (6, 2), (6, 3)] {
        let g = JohnsonGraph::new(n, m).map_err(|e| e.to_string())?;
        let p = exchange_sector_matrix(n, m).map_err(|e| e.to_string())?;
        let shift = (binomial(m as u64, 2).unwrap() + binomial((n - m) as u64, 2).unwrap()) as i64;
        for u in 0..g.len() {
            for v in 0..g.len() {
                let want = i64::from(g.adjacent(u, v)) + if u == v { shift } else { 0 };
                ensure(p[(u, v)] == want, || format!("J({n},{m}) entry ({u},{v})"))?;
            }
        }
    }
    Ok("(4,2), (6,2), (6,3) exact".into())
}

fn branches(m: u32) -> Vec<DesignInput> {
    let n = m as usize + 1;
    let alt: Vec<i64> = (0..n as i64).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
    let ramp: Vec<i64> = (0..n as i64).collect();
    vec![
        DesignInput::new(m),
        DesignInput::new(m).theta(PI / 3.0),
        DesignInput::new(m).theta(-1.2).t0(2.5).offsets(alt),
        DesignInput::new(m).theta(0.4).t0(0.7).offsets(ramp),
        DesignInput::new(m).theta(PI).offsets(vec![-2; n]),
        DesignInput::new(m).theta(2.9).t0(1.9).offsets(vec![3; n]),
    ]
}

fn c6_certificate() -> Outcome {
    let mut worst_amp: f64 = 0.0;
    let mut worst_leak: f64 = 0.0;
    let mut count = 0;
    for m in 1..=5 {
        let g = JohnsonGraph::antipodal(m).map_err(|e| e.to_string())?;
        for input in branches(m) {
            let (d, sp) = design(&input).map_err(|e| e.to_string())?;
            let spectral = AmplitudeEvaluator::new(&d, &sp.eigen)
                .map_err(|e| e.to_string())?
                .at(input.t0);
            let dense = DenseSectorEvolver::new(&g, &d, 10_000)
                .map_err(|e| e.to_string())?
                .stratum_amplitudes(input.t0);
            for f in [&spectral, &dense] {
                let (last, rest) = f.split_last().unwrap();
                worst_amp = worst_amp.max(1.0 - last.norm());
                worst_leak = rest.iter().map(|z| z.norm()).fold(worst_leak, f64::max);
            }
            count += 1;
        }
    }
    ensure(worst_amp <= 1e-10 && worst_leak <= 1e-10, || {
        format!("1 - |f_m| up to {worst_amp:e}, leakage up to {worst_leak:e}")
    })?;
    Ok(format!(
        "{count} designs, both oracles: 1 - |f_m| <= {worst_amp:.1e}, leakage <= {worst_leak:.1e}"
    ))
}

fn c7_ghz_transfer() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in [2u32, 3] {
        for input in branches(m) {
            let (d, _) = design(&input).map_err(|e| e.to_string())?;
            let r = heisenberg_oracle(m, &d, input.t0, OracleCaps::default()).map_err(|e| e.to_string())?;
            worst = worst.max(r.ideal_distance);
        }
    }
    ensure(worst <= 1e-9, || format!("distance to exp(i theta) target {worst:e}"))?;
    Ok(format!("m = 2, 3: max distance to exp(i theta)(|0..0> + |B>)/sqrt 2 = {worst:.1e}"))
}

fn transfer_time(design: &PstDesign, sp: &Spectrum, t_max: f64) -> Option<(f64, f64)> {
    // first grid time with |f_m| >= 1 - 1e-10, refined by golden section
    let eval = AmplitudeEvaluator::new(design, &sp.eigen).ok()?;
    let m = design.m() as usize;
    let amp = |t: f64| eval.at(t)[m].norm();
    let steps = 4000;
    let h = t_max / steps as f64;
    for s in 1..=steps {
        let t = s as f64 * h;
        if amp(t) > 0.999 {
            let (mut a, mut b) = (t - h, t + h);
            let g = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..200 {
                let (c, d) = (b - g * (b - a), a + g * (b - a));
                if amp(c) > amp(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            let t = (a + b) / 2.0;
            if amp(t) >= 1.0 - 1e-10 {
                return Some((t, amp(t)));
            }
        }
    }
    None
}

fn c8_factor_two() -> Outcome {
    let t0 = 1.0;
    let (d, sp) = design(&DesignInput::new(2).t0(t0)).map_err(|e| e.to_string())?;
    let eval = AmplitudeEvaluator::new(&d, &sp.eigen).map_err(|e| e.to_string())?;
    let adopted = eval.at(t0)[2].norm();
    ensure(adopted >= 1.0 - 1e-12, || format!("adopted convention |f_2(t0)| = {adopted}"))?;

    let mut halved = d.clone();
    halved.couplings.iter_mut().for_each(|j| *j /= 2.0);
    let eval_h = AmplitudeEvaluator::new(&halved, &sp.eigen).map_err(|e| e.to_string())?;
    let (h_t0, h_2t0) = (eval_h.at(t0)[2].norm(), eval_h.at(2.0 * t0)[2].norm());
    ensure(h_2t0 >= 1.0 - 1e-12 && h_t0 < 0.99, || {
        format!("halved couplings: |f_2(t0)| = {h_t0}, |f_2(2 t0)| = {h_2t0}")
    })?;

    // published m = 2 couplings
    let mut lines = Vec::new();
    for theta in [0.0, PI / 3.0, -0.8] {
        let mut published = d.clone();
        published.couplings = vec![
            -(6.0 * theta + 6.0 * PI) / (12.0 * t0),
            -PI / (3.0 * t0),
            PI / (12.0 * t0),
        ];
        let e = published.energies_from_couplings(&sp.eigen);
        let pe = AmplitudeEvaluator::new(&published, &sp.eigen).map_err(|e| e.to_string())?;
        let (at_t0, at_2t0) = (pe.at(t0)[2], pe.at(2.0 * t0)[2]);
        let first = transfer_time(&published, &sp, 4.0 * t0);
        ensure(at_2t0.norm() >= 1.0 - 1e-12 && at_t0.norm() < 0.99, || {
            format!("published couplings at theta={theta}: |f_2(t0)| = {}, |f_2(2t0)| = {}", at_t0.norm(), at_2t0.norm())
        })?;
        if theta == 0.0 {
            // energies in reference order (0, 4, -2)
            let want = [-7.0 * PI / 12.0, -13.0 * PI / 12.0, -PI / 12.0];
            let got = [e[1], e[0], e[2]];
            ensure(got.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12), || {
                format!("energies {got:?}")
            })?;
        }
        lines.push(format!(
            "theta={theta:.4}: |f_2(t0)|={:.6}, |f_2(2t0)|={:.12}, phase at 2t0={:.6}, first PST at t={}",
            at_t0.norm(),
            at_2t0.norm(),
            at_2t0.arg(),
            first.map_or("none".into(), |(t, _)| format!("{t:.6}"))
        ));
    }
    for l in &lines {
        println!("      published couplings, {l}");
    }
    Ok(format!(
        "adopted PST at t0 (|f_2| = {adopted:.12}); halved and published couplings transfer at 2 t0"
    ))
}

fn c9_large_m() -> Outcome {
    let start = Instant::now();
    let (d, _) = design(&DesignInput::new(50).theta(0.3)).map_err(|e| e.to_string())?;
    let r = verify_design(&d, &[Oracle::Spectral], OracleCaps::default(), CERTIFY_TOL)
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let c = r.spectral.unwrap();
    ensure(r.passed(), || format!("{r:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "m = 50: 1 - |f_m| = {:.1e}, leakage {:.1e}",
        1.0 - c.amplitude.norm(),
        c.leakage
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("1 worked example m=2", c1_worked_example, Duration::from_secs(1)),
        ("2 support closed form", c2_support_formula, Duration::from_secs(1)),
        ("3 orthonormality", c3_orthonormality, Duration::from_secs(1)),
        ("4 intersection numbers", c4_intersection_and_action, Duration::from_secs(10)),
        ("5 permutation identity", c5_permutation_identity, Duration::from_secs(10)),
        ("6 PST certificate", c6_certificate, Duration::from_secs(30)),
        ("7 GHZ transfer", c7_ghz_transfer, Duration::from_secs(10)),
        ("8 factor-2 adjudication", c8_factor_two, Duration::from_secs(10)),
        ("9 spectral design m=50", c9_large_m, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => Err(format!("{msg}; over budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS  criterion {name} [{elapsed:.2?}]: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name} [{elapsed:.2?}]: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
