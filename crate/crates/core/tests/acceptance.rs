//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs as a plain binary (`harness = false`).

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nlab::domains::{isoperimetric_ratio, rasterize_disk, rasterize_koch, rasterize_lshape, rasterize_rectangle};
use nlab::experiment::{execute, preset, BcSelection, ExperimentConfig, RunArtifacts, PRESET_NAMES};
use nlab::laplacian::assemble;
use nlab::nodal::nodal_decompose;
use nlab::oracle::{grid_square_dirichlet_modes, lattice_counts, square_dirichlet_modes, square_neumann_modes};
use nlab::rearrange::{bessel_first_zero, faber_krahn_check, polya_szego_check, weyl_analysis, SpectralConstants};
use nlab::sparse::ground_state;
use nlab::{
    assemble_dirichlet, smallest_eigenpairs, BoundaryCondition, CellSet, GridDomain, Result, SolverOptions, Spectrum,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

// ---------------------------------------------------------------- oracles

/// `J₀(x)` from its power series.
fn j0_series(x: f64) -> f64 {
    let q = -(x * x) / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..200 {
        term *= q / (m as f64 * m as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// First zero of `J₀` by bisection on the series.
fn j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0, 3.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if j0_series(lo) * j0_series(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i * n + j].powi(2)).sum();
        let diag: f64 = (0..n).map(|i| a[i * n + i].powi(2)).sum();
        if off <= 1e-30 * diag {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Same-sign 4-connected components of a masked grid by breadth-first flood
/// fill, relabelled in first-appearance order over the given cell sequence.
fn flood_fill_labels(nx: usize, ny: usize, mask: &[bool], value: &[f64], order: &[usize]) -> Vec<u32> {
    let sign = |g: usize| if value[g] > 0.0 { 1 } else if value[g] < 0.0 { -1 } else { 0 };
    let mut comp = vec![usize::MAX; nx * ny];
    let mut next = 0;
    for start in 0..nx * ny {
        if !mask[start] || sign(start) == 0 || comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(g) = queue.pop_front() {
            let (i, j) = (g % nx, g / nx);
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push(g - 1);
            }
            if i + 1 < nx {
                nb.push(g + 1);
            }
            if j > 0 {
                nb.push(g - nx);
            }
            if j + 1 < ny {
                nb.push(g + nx);
            }
            for n in nb {
                if mask[n] && comp[n] == usize::MAX && sign(n) == sign(g) {
                    comp[n] = next;
                    queue.push_back(n);
                }
            }
        }
        next += 1;
    }
    canonical(&order.iter().map(|&g| if comp[g] == usize::MAX { None } else { Some(comp[g]) }).collect::<Vec<_>>())
}

fn canonical(raw: &[Option<usize>]) -> Vec<u32> {
    let mut seen = std::collections::HashMap::new();
    raw.iter()
        .map(|r| match r {
            None => 0,
            Some(c) => {
                let n = seen.len() as u32 + 1;
                *seen.entry(*c).or_insert(n)
            }
        })
        .collect()
}

// ---------------------------------------------------------------- helpers

fn solve(d: &GridDomain, bc: BoundaryCondition, k: usize) -> Result<Spectrum> {
    smallest_eigenpairs(&assemble(d, bc)?, &SolverOptions::new(k).tol(1e-8).seed(7))
}

fn within(got: &[f64], want: &[f64], rel: f64, floor: f64) -> (bool, f64) {
    let worst = got
        .iter()
        .zip(want)
        .map(|(g, w)| (g - w).abs() / w.abs().max(floor))
        .fold(0.0, f64::max);
    (got.len() == want.len() && worst <= rel, worst)
}

struct PresetRun {
    name: &'static str,
    art: RunArtifacts,
}

impl PresetRun {
    fn verdicts(&self, check: &str) -> Vec<&nlab::experiment::CheckVerdict> {
        self.art.report.checks.iter().filter(|v| v.check == check).collect()
    }

    fn spectrum(&self, bc: BoundaryCondition) -> &Spectrum {
        self.art.spectra.iter().find(|s| s.bc == Some(bc)).expect("both conditions solved")
    }
}

fn preset_config(name: &str) -> Result<ExperimentConfig> {
    let mut cfg = preset(name)?;
    cfg.bc = BcSelection::Both;
    cfg.k = 50;
    cfg.checks = ["courant", "green", "faber_krahn", "polya_szego", "coarea"].map(String::from).to_vec();
    cfg.plots = false;
    cfg.label_images = 0;
    Ok(cfg)
}

// ---------------------------------------------------------------- criteria

fn closed_form_spectra() -> Result<Outcome> {
    let sq = rasterize_rectangle(PI, PI, 256.0 / PI)?;
    let dir = solve(&sq, BoundaryCondition::Dirichlet, 20)?;
    let want_d: Vec<f64> = square_dirichlet_modes(20).iter().map(|m| m.lambda).collect();
    // The commonly quoted list repeats 25 four times, but 25 = 3² + 4² only
    // (5² + 0² is not a Dirichlet mode), so positions 16 to 20 are really
    // 26, 26, 29, 29, 32. The enumeration is the reference.
    let quoted = [2., 5., 5., 8., 10., 10., 13., 13., 17., 17., 18., 20., 20., 25., 25., 25., 25., 26., 26., 29.];
    let quoted_differs: Vec<usize> = (1..=20).filter(|&k| want_d[k - 1] != quoted[k - 1]).collect();
    let (ok_d, worst_d) = within(&dir.eigenvalues, &want_d, 0.01, 1.0);
    let neu = solve(&sq, BoundaryCondition::Neumann, 10)?;
    let want_n: Vec<f64> = square_neumann_modes(10).iter().map(|m| m.lambda).collect();
    let (ok_n, worst_n) = within(&neu.eigenvalues, &want_n, 0.02, 1.0);
    outcome(
        ok_d && ok_n && want_n == [0., 1., 1., 2., 4., 4., 5., 5., 8., 9.],
        format!(
            "Dirichlet worst {worst_d:.2e} (≤1%), Neumann worst {worst_n:.2e} (≤2%) against lattice enumeration; \
             enumeration {:?} departs from the quoted list at k {quoted_differs:?}",
            &want_d[13..]
        ),
    )
}

fn disk_ground_state() -> Result<Outcome> {
    let j_oracle = j0_first_zero();
    let j = bessel_first_zero(0.0)?;
    let j_err = (j - j_oracle).abs();
    let disk = rasterize_disk(1.0, 200.0)?;
    let (lambda, _, _) = ground_state(&assemble_dirichlet(&disk)?, 1e-8, 7)?;
    let rel = (lambda / (j_oracle * j_oracle) - 1.0).abs();
    outcome(
        j_err <= 1e-10 && rel <= 0.01,
        format!("j = {j:.12} (oracle gap {j_err:.1e}), λ₁ = {lambda:.5} vs {:.5}, rel {rel:.2e}", j_oracle * j_oracle),
    )
}

fn neumann_below_dirichlet(runs: &[PresetRun]) -> Result<Outcome> {
    let mut worst = f64::INFINITY;
    let mut pass = true;
    for r in runs {
        let c = r.art.report.compare_bc.as_ref().expect("bc both");
        pass &= c.holds && c.rows.len() == 50;
        worst = worst.min(c.min_margin);
    }
    outcome(pass, format!("min λ_D − λ_N over 5 presets, k ≤ 50: {worst:.4e}"))
}

fn courant(runs: &[PresetRun]) -> Result<Outcome> {
    let mut failing = Vec::new();
    for r in runs {
        for v in r.verdicts("courant") {
            if !v.passed {
                failing.push(v.label());
            }
        }
        if r.verdicts("courant").len() != 2 {
            failing.push(format!("{}: missing verdicts", r.name));
        }
    }
    outcome(failing.is_empty(), format!("τ ∈ {{0, 1e-4, 1e-3}}, both bcs, 5 presets; failing: {failing:?}"))
}

fn pleijel(runs: &[PresetRun]) -> Result<Outcome> {
    let c = SpectralConstants::new(2)?.pleijel_constant;
    let a = (c - 0.69166).abs() <= 1e-4;

    // Square Dirichlet at h = π/128, compared with the grid's own tensor modes.
    let p = 128;
    let sq = rasterize_rectangle(PI, PI, p as f64 / PI)?;
    let s = solve(&sq, BoundaryCondition::Dirichlet, 60)?;
    let counts: Vec<usize> = s.eigenvectors.iter().map(|u| nodal_decompose(&sq, u, 0.0).map(|d| d.count)).collect::<Result<_>>()?;
    let series = nlab::nodal::pleijel_series(&s, &counts, nlab::nodal::DEFAULT_REL_GAP)?;
    let (max, mean) = series.window(30, 60);
    let modes = grid_square_dirichlet_modes(p, 60);
    let oracle_ratio = |k: usize| {
        let l = modes[k - 1].lambda;
        let m = modes.iter().filter(|m| (m.lambda - l).abs() <= 1e-9 * l).map(|m| m.nodal_count()).max().unwrap_or(0);
        m as f64 / k as f64
    };
    let o: Vec<f64> = (30..=60).map(oracle_ratio).collect();
    let o_max = o.iter().cloned().fold(0.0, f64::max);
    let o_mean = o.iter().sum::<f64>() / o.len() as f64;
    let eig_gap = s
        .eigenvalues
        .iter()
        .zip(&modes)
        .map(|(a, m)| (a / m.lambda - 1.0).abs())
        .fold(0.0, f64::max);
    let b = max <= 0.80 && mean <= 0.72 && o_max <= 0.80 && o_mean <= 0.72 && eig_gap <= 1e-6;

    // Snowflake Neumann at two resolutions.
    let koch3 = runs.iter().find(|r| r.name == "koch3").expect("koch3 run");
    let m_of = |rows: &[nlab::nodal::SeriesRow]| rows.iter().filter(|r| (20..=50).contains(&r.k)).map(|r| r.m_count).collect::<Vec<_>>();
    let sec = koch3.art.report.sections.iter().find(|s| s.bc == BoundaryCondition::Neumann).expect("neumann");
    let coarse = m_of(&sec.rows);
    let mut fine_cfg = preset_config("koch3")?;
    fine_cfg.domain.resolution = 200.0;
    fine_cfg.bc = BcSelection::Neumann;
    fine_cfg.checks = vec!["courant".into()];
    let fine_run = execute(&fine_cfg)?;
    let fine = m_of(&fine_run.report.sections[0].rows);
    let below = |m: &[usize]| m.iter().zip(20..).all(|(&m, k)| m < k);
    let identical = coarse == fine;
    let diff: Vec<usize> = (20..=50).zip(coarse.iter().zip(&fine)).filter(|(_, (a, b))| a != b).map(|(k, _)| k).collect();
    let c_ok = below(&coarse) && below(&fine) && identical && coarse.len() == 31;

    outcome(
        a && b && c_ok,
        format!(
            "(a) {c:.6} {}; (b) window max {max:.3} mean {mean:.3} (oracle {o_max:.3} / {o_mean:.3}, eigen gap {eig_gap:.1e}) {}; \
             (c) M(k)<k at res 160: {}, res 200: {}, identical counts: {identical} (differ at k {diff:?}) {}",
            ok(a),
            ok(b),
            below(&coarse),
            below(&fine),
            ok(c_ok),
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

fn weyl() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, d, target) in [
        ("square", rasterize_rectangle(PI, PI, 128.0 / PI)?, PI / 4.0),
        ("disk", rasterize_disk(1.0, 64.0)?, 0.25),
    ] {
        let s = solve(&d, BoundaryCondition::Dirichlet, 200)?;
        let w = weyl_analysis(&s, d.area(), 2)?;
        let dev = w.limit_estimate / target - 1.0;
        pass &= dev.abs() <= 0.08 && s.k() == 200;
        parts.push(format!("{name} {:.4} vs {target:.4} ({:+.2}%)", w.limit_estimate, 100.0 * dev));
    }
    let l = lattice_counts(2000.0);
    let quarter = l.quarter_ratio / l.weyl_target - 1.0;
    let two_term = l.dirichlet as f64 / l.dirichlet_two_term - 1.0;
    pass &= quarter.abs() <= 0.01 && two_term.abs() <= 0.01;
    parts.push(format!(
        "lattice at 2000: quarter count {:+.2}%, Dirichlet {} vs two-term {:.1} ({:+.2}%)",
        100.0 * quarter,
        l.dirichlet,
        l.dirichlet_two_term,
        100.0 * two_term
    ));
    outcome(pass, parts.join("; "))
}

fn green(runs: &[PresetRun]) -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in runs.iter().filter(|r| ["square", "koch2", "koch3"].contains(&r.name)) {
        for v in r.verdicts("green") {
            pass &= v.passed && v.detail["k_checked"] == 30;
            parts.push(format!(
                "{}[{}] {} gap margin {:.3e} λ₁ margin {:.3e}",
                r.name,
                v.bc.map_or("-".into(), |b| b.to_string()),
                ok(v.passed),
                v.detail["green_margin"].as_f64().unwrap_or(f64::NAN),
                v.detail["lambda1_margin"].as_f64().unwrap_or(f64::NAN),
            ));
        }
    }
    outcome(pass && parts.len() == 6, parts.join("; "))
}

fn faber_krahn(runs: &[PresetRun]) -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in runs.iter().filter(|r| ["square", "lshape", "koch2", "koch3"].contains(&r.name)) {
        let v = r.verdicts("faber_krahn");
        pass &= v.len() == 1 && v[0].passed && v[0].detail["slack"] == 0.02;
        parts.push(format!("{} margin {:+.4}", r.name, v.first().map_or(f64::NAN, |v| v.margin)));
    }
    let k1 = rasterize_koch(1, 128.0)?;
    let (l1, _, _) = ground_state(&assemble_dirichlet(&k1)?, 1e-8, 7)?;
    let f1 = faber_krahn_check(l1, k1.area(), 2, 0.02)?;
    pass &= f1.holds;
    parts.push(format!("koch1 λ₁/ball {:.4}", l1 / f1.ball));

    let disk = runs.iter().find(|r| r.name == "disk").expect("disk run");
    let l = disk.spectrum(BoundaryCondition::Dirichlet).eigenvalues[0];
    let area = disk.art.report.domain.area;
    let loose = faber_krahn_check(l, area, 2, 0.02)?;
    let tight = faber_krahn_check(l, area, 2, -0.005)?;
    pass &= loose.holds && !tight.holds;
    parts.push(format!(
        "disk λ₁/ball {:.4}: slack 0.98 {}, slack 1.005 {}",
        l / loose.ball,
        if loose.holds { "passes" } else { "fails" },
        if tight.holds { "passes" } else { "fails" }
    ));
    outcome(pass, parts.join("; "))
}

fn polya_szego(runs: &[PresetRun]) -> Result<Outcome> {
    let disk = runs.iter().find(|r| r.name == "disk").expect("disk run");
    let d = preset("disk")?.domain.build()?;
    let u: Vec<f64> = disk.spectrum(BoundaryCondition::Dirichlet).eigenvectors[0].iter().map(|v| v.abs()).collect();
    let eq = polya_szego_check(&d, &u, 2)?;
    let mut pass = (eq.ratio - 1.0).abs() <= 0.03;
    let mut parts = vec![format!("disk ground state E*/E = {:.4}", eq.ratio)];
    for r in runs {
        let v = r.verdicts("polya_szego");
        let v = v.first().expect("polya_szego verdict");
        pass &= v.passed && v.detail["trials"].as_u64().unwrap_or(0) >= 20 && v.detail["equimeasurability_failures"] == 0;
        parts.push(format!(
            "{} worst {:.4} ({} trials)",
            r.name,
            v.detail["worst_ratio"].as_f64().unwrap_or(f64::NAN),
            v.detail["trials"]
        ));
    }
    outcome(pass, parts.join("; "))
}

fn isoperimetric_coarea(runs: &[PresetRun]) -> Result<Outcome> {
    let extremal = 2.0 * PI.sqrt();
    let mut ratios = Vec::new();
    for h in [0.02, 0.01, 0.005] {
        let d = rasterize_disk(1.0, 1.0 / h)?;
        ratios.push(isoperimetric_ratio(&d, &CellSet::full(&d), 2)?.corrected);
    }
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let mut pass = ratios[2] >= 0.95 * extremal && increasing;
    let mut parts = vec![format!(
        "disk corrected ratio / 2√π at h = 0.02, 0.01, 0.005: {:.4}, {:.4}, {:.4}",
        ratios[0] / extremal,
        ratios[1] / extremal,
        ratios[2] / extremal
    )];
    for r in runs {
        let v = r.verdicts("coarea");
        let v = v.first().expect("coarea verdict");
        pass &= v.passed && v.detail["trials"] == 100 && v.detail["slack"] == 0.05;
        parts.push(format!("{} coarea margin {:.3}", r.name, v.margin));
    }
    outcome(pass, parts.join("; "))
}

fn oracle_equivalences() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();

    // Dense oracle against both solver paths.
    let mut worst: f64 = 0.0;
    for (d, bc) in [
        (rasterize_rectangle(1.0, 1.0, 21.0)?, BoundaryCondition::Dirichlet),
        (rasterize_rectangle(1.0, 1.0, 21.0)?, BoundaryCondition::Neumann),
        (rasterize_lshape(1.0, 0.5, 24.0)?, BoundaryCondition::Dirichlet),
        (rasterize_disk(1.0, 10.0)?, BoundaryCondition::Neumann),
    ] {
        let op = assemble(&d, bc)?;
        let n = op.n();
        pass &= n <= 400;
        let oracle = jacobi_eigenvalues(op.to_dense(), n);
        for cutoff in [0, 400] {
            let opts = SolverOptions {
                dense_cutoff: cutoff,
                tol_eig: 1e-10,
                ..SolverOptions::new(12)
            };
            let s = smallest_eigenpairs(&op, &opts)?;
            let (_, w) = within(&s.eigenvalues, &oracle[..12], 0.0, 1.0);
            worst = worst.max(w);
        }
    }
    pass &= worst <= 1e-8;
    parts.push(format!("dense agreement worst {worst:.1e}"));

    // Flood fill against union-find.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut mismatches = 0;
    let mut masks = 0;
    while masks < 200 {
        let nx = rng.random_range(1..=40);
        let ny = rng.random_range(1..=40);
        let fill = rng.random_range(0.4..1.0);
        let mask: Vec<bool> = (0..nx * ny).map(|_| rng.random_bool(fill)).collect();
        if !mask.iter().any(|&m| m) {
            continue;
        }
        let value: Vec<f64> = (0..nx * ny)
            .map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(-1.0..1.0) })
            .collect();
        let d = GridDomain::from_mask(nx, ny, 1.0 / nx as f64, (0.0, 0.0), mask.clone())?;
        let order: Vec<usize> = (0..d.len())
            .map(|c| {
                let (i, j) = d.grid_position(c);
                j * nx + i
            })
            .collect();
        let u: Vec<f64> = order.iter().map(|&g| value[g]).collect();
        if u.iter().all(|&v| v == 0.0) {
            continue;
        }
        let dec = nodal_decompose(&d, &u, 0.0)?;
        let uf = canonical(&dec.labels.iter().map(|&l| (l > 0).then_some(l as usize)).collect::<Vec<_>>());
        mismatches += (uf != flood_fill_labels(nx, ny, &mask, &value, &order)) as usize;
        masks += 1;
    }
    pass &= mismatches == 0;
    parts.push(format!("flood fill vs union-find: {mismatches} mismatches on {masks} masks"));

    // Reruns at a fixed seed.
    let mut cfg = preset("lshape")?;
    cfg.domain.resolution = 40.0;
    cfg.k = 30;
    cfg.checks = ["courant", "pleijel", "polya_szego", "coarea"].map(String::from).to_vec();
    let strip = |a: &RunArtifacts| -> Vec<(String, Vec<u8>)> {
        a.files
            .iter()
            .map(|(name, bytes)| {
                if name == "report.json" {
                    let mut v: serde_json::Value = serde_json::from_slice(bytes).expect("report parses");
                    v["wall_time_s"] = 0.into();
                    for s in v["sections"].as_array_mut().into_iter().flatten() {
                        s["wall_time_s"] = 0.into();
                    }
                    (name.clone(), serde_json::to_vec(&v).expect("serializes"))
                } else {
                    (name.clone(), bytes.clone())
                }
            })
            .collect()
    };
    let first = execute(&cfg)?;
    let second = execute(&cfg)?;
    let same_csv = first.files.iter().find(|f| f.0 == "series.csv") == second.files.iter().find(|f| f.0 == "series.csv");
    let same_all = strip(&first) == strip(&second);
    pass &= same_csv && same_all;
    parts.push(format!(
        "rerun: series.csv identical {same_csv}, all {} files identical up to wall time {same_all}",
        first.files.len()
    ));
    outcome(pass, parts.join("; "))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut record = |n: usize, name: &'static str, r: Result<Outcome>| {
        let o = r.unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        println!("criterion {n:>2} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o));
    };

    record(1, "closed-form spectra", closed_form_spectra());
    record(2, "disk ground state", disk_ground_state());

    let mut runs = Vec::new();
    for name in PRESET_NAMES {
        let t = Instant::now();
        match preset_config(name).and_then(|c| execute(&c)) {
            Ok(art) => {
                eprintln!("preset {name}: {:.1}s", t.elapsed().as_secs_f64());
                runs.push(PresetRun { name, art });
            }
            Err(e) => eprintln!("preset {name}: error {e}"),
        }
    }
    let complete = runs.len() == PRESET_NAMES.len();
    let with_runs = |f: fn(&[PresetRun]) -> Result<Outcome>| {
        if complete {
            f(&runs)
        } else {
            outcome(false, "a preset run failed".into())
        }
    };

    record(3, "Neumann ≤ Dirichlet", with_runs(neumann_below_dirichlet));
    record(4, "Courant bound", with_runs(courant));
    record(5, "Pleijel tail", with_runs(pleijel));
    record(6, "Weyl law", weyl());
    record(7, "Green identity", with_runs(green));
    record(8, "Faber–Krahn", with_runs(faber_krahn));
    record(9, "Pólya–Szegő", with_runs(polya_szego));
    record(10, "isoperimetric and coarea", with_runs(isoperimetric_coarea));
    record(11, "oracle equivalences", oracle_equivalences());

    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria pass in {:.0}s",
        results.len() - failed.len(),
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
