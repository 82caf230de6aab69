use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use super::config::{BcSelection, Check, ExperimentConfig};
use super::svg::{line_chart, Series};
use super::write_atomic;
use crate::domains::{
    coarea_check, discrete_perimeter, isoperimetric_ratio, CellSet, DomainDescriptor, GridDomain, TAU_COAREA,
};
use crate::error::{Error, Result};
use crate::laplacian::{assemble, assemble_dirichlet};
use crate::nodal::{
    courant_check, eigenspace_cluster, nodal_decompose, nodal_rayleigh_check, pleijel_certificate,
    pleijel_series, series_csv, sharp_fk_constant, NodalDecomposition, SeriesRow, SUBDOMAIN_TOL,
};
use crate::rearrange::{
    distribution_function, euclidean_rearrangement, faber_krahn_check, polya_szego_check,
    weyl_analysis, SpectralConstants, WeylReport,
};
use crate::sparse::{
    encode_eigenvectors, ground_state, smallest_eigenpairs, BoundaryCondition, SolverInfo,
    SolverOptions, Spectrum,
};

pub const WEYL_TOLERANCE: f64 = 0.08;
pub const NODAL_FK_SLACK: f64 = 0.05;
pub const COMPARE_TOLERANCE: f64 = 1e-9;
const ISOPERIMETRIC_NODAL_K: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct CheckVerdict {
    pub check: String,
    pub bc: Option<BoundaryCondition>,
    pub passed: bool,
    /// Distance to failure in the check's own units; negative when failing.
    pub margin: f64,
    pub detail: serde_json::Value,
}

impl CheckVerdict {
    pub fn label(&self) -> String {
        match self.bc {
            Some(bc) => format!("{}[{bc}]", self.check),
            None => self.check.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TauCounts {
    pub tau: f64,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BcSection {
    pub bc: BoundaryCondition,
    pub partial: bool,
    pub wall_time_s: f64,
    pub solver: SolverInfo,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub counts: Vec<TauCounts>,
    pub rows: Vec<SeriesRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub k: usize,
    pub neumann: f64,
    pub dirichlet: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareBc {
    pub rows: Vec<CompareRow>,
    pub tolerance: f64,
    pub min_margin: f64,
    pub holds: bool,
    pub note: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub artifact: &'static str,
    pub version: &'static str,
    pub input_sha256: String,
    pub config: ExperimentConfig,
    pub constants: SpectralConstants,
    pub domain: DomainDescriptor,
    pub pruned_cells: usize,
    pub sections: Vec<BcSection>,
    pub compare_bc: Option<CompareBc>,
    pub checks: Vec<CheckVerdict>,
    pub passed: bool,
    pub failing: Vec<String>,
    pub wall_time_s: f64,
}

/// Everything a run produces, before anything touches the disk.
pub struct RunArtifacts {
    pub report: RunReport,
    pub spectra: Vec<Spectrum>,
    /// `(file name, contents)`, report.json and series.csv first.
    pub files: Vec<(String, Vec<u8>)>,
}

pub struct RunOutcome {
    pub report: RunReport,
    pub out_dir: PathBuf,
    pub written: Vec<PathBuf>,
}

/// Runs the full pipeline and writes every output into `out_dir` (or the
/// config's directory, or `./nlab-out`).
pub fn run(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<RunOutcome> {
    let artifacts = execute(config)?;
    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("nlab-out"));
    let written = write_outputs(&artifacts, &dir).map_err(|e| e.in_stage("write"))?;
    Ok(RunOutcome {
        report: artifacts.report,
        out_dir: dir,
        written,
    })
}

pub fn write_outputs(artifacts: &RunArtifacts, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::with_capacity(artifacts.files.len());
    for (name, bytes) in &artifacts.files {
        let path = dir.join(name);
        write_atomic(&path, bytes)?;
        written.push(path);
    }
    Ok(written)
}

struct Solved {
    bc: BoundaryCondition,
    spectrum: Spectrum,
    partial: bool,
    wall: f64,
    /// One list of decompositions per threshold in the sweep.
    decs: Vec<Vec<NodalDecomposition>>,
}

fn input_hash(config: &ExperimentConfig) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs the pipeline in memory.
pub fn execute(config: &ExperimentConfig) -> Result<RunArtifacts> {
    let start = Instant::now();
    config.validate().map_err(|e| e.in_stage("config"))?;
    let checks = config.parsed_checks().map_err(|e| e.in_stage("config"))?;
    let constants = SpectralConstants::new(2).map_err(|e| e.in_stage("constants"))?;
    let domain = config.domain.build().map_err(|e| e.in_stage("rasterize"))?;

    let mut solved = Vec::new();
    for bc in config.bc.conditions() {
        solved.push(solve_one(config, &domain, bc)?);
    }

    let mut verdicts = Vec::new();
    let mut sections = Vec::new();
    for s in &solved {
        let rows = series_rows(config, &domain, s).map_err(|e| e.in_stage("checks"))?;
        for &check in &checks {
            if let Some(v) = bc_check(check, config, &domain, s, &rows).map_err(|e| e.in_stage("checks"))? {
                verdicts.push(v);
            }
        }
        sections.push(BcSection {
            bc: s.bc,
            partial: s.partial,
            wall_time_s: s.wall,
            solver: s.spectrum.info.clone(),
            eigenvalues: s.spectrum.eigenvalues.clone(),
            residuals: s.spectrum.residual_norms.clone(),
            counts: config
                .tau_nodal
                .iter()
                .zip(&s.decs)
                .map(|(&tau, decs)| TauCounts {
                    tau,
                    counts: decs.iter().map(|d| d.count).collect(),
                })
                .collect(),
            rows,
        });
    }
    for &check in &checks {
        verdicts.extend(global_check(check, config, &domain, &solved).map_err(|e| e.in_stage("checks"))?);
    }

    let compare_bc = if config.bc == BcSelection::Both {
        let c = compare_bc(&solved[1].spectrum, &solved[0].spectrum).map_err(|e| e.in_stage("compare_bc"))?;
        verdicts.push(CheckVerdict {
            check: "neumann_le_dirichlet".into(),
            bc: None,
            passed: c.holds,
            margin: c.min_margin + c.tolerance,
            detail: json!({ "pairs": c.rows.len() }),
        });
        Some(c)
    } else {
        None
    };
    for s in solved.iter().filter(|s| s.partial) {
        verdicts.push(CheckVerdict {
            check: "solver_converged".into(),
            bc: Some(s.bc),
            passed: false,
            margin: s.spectrum.k() as f64 - config.k as f64,
            detail: json!({ "converged_prefix": s.spectrum.k(), "requested": config.k }),
        });
    }

    let failing: Vec<String> = verdicts.iter().filter(|v| !v.passed).map(CheckVerdict::label).collect();
    let report = RunReport {
        artifact: "nlab",
        version: env!("CARGO_PKG_VERSION"),
        input_sha256: input_hash(config),
        config: config.clone(),
        constants,
        domain: domain.descriptor(false),
        pruned_cells: domain.pruned_cells(),
        sections,
        compare_bc,
        passed: failing.is_empty(),
        failing,
        checks: verdicts,
        wall_time_s: start.elapsed().as_secs_f64(),
    };

    let files = render_files(config, &domain, &report, &solved)?;
    Ok(RunArtifacts {
        report,
        spectra: solved.into_iter().map(|s| s.spectrum).collect(),
        files,
    })
}

fn solve_one(config: &ExperimentConfig, domain: &GridDomain, bc: BoundaryCondition) -> Result<Solved> {
    let t = Instant::now();
    let op = assemble(domain, bc).map_err(|e| e.in_stage("assemble"))?;
    let opts = SolverOptions {
        k: config.k,
        tol_eig: config.tol_eig,
        seed: config.seed,
        ..SolverOptions::default()
    };
    let (spectrum, partial) = match smallest_eigenpairs(&op, &opts) {
        Ok(s) => (s, false),
        Err(Error::NotConverged { partial, .. }) => (*partial, true),
        Err(e) => return Err(e.in_stage("solve")),
    };
    let spectrum = spectrum.with_domain(domain.descriptor(false));
    let decs = config
        .tau_nodal
        .iter()
        .map(|&tau| {
            spectrum
                .eigenvectors
                .par_iter()
                .map(|u| nodal_decompose(domain, u, tau))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("decompose"))?;
    Ok(Solved {
        bc,
        spectrum,
        partial,
        wall: t.elapsed().as_secs_f64(),
        decs,
    })
}

fn counts(decs: &[NodalDecomposition]) -> Vec<usize> {
    decs.iter().map(|d| d.count).collect()
}

fn series_rows(config: &ExperimentConfig, domain: &GridDomain, s: &Solved) -> Result<Vec<SeriesRow>> {
    let c = sharp_fk_constant(2)?;
    let decs = &s.decs[0];
    let counts = counts(decs);
    let _ = domain;
    let mut rows = Vec::with_capacity(decs.len());
    for k in 1..=decs.len() {
        let cluster = eigenspace_cluster(&s.spectrum, k, config.rel_gap)?;
        let m = cluster.clone().map(|i| counts[i - 1]).max().unwrap_or(0);
        let lambda = s.spectrum.eigenvalues[k - 1];
        let cert = pleijel_certificate(&decs[k - 1], lambda.max(0.0), c, 2)?;
        rows.push(SeriesRow {
            k,
            bc: s.bc,
            lambda,
            cluster_size: cluster.clone().count(),
            m_count: m,
            ratio: m as f64 / k as f64,
            courant_ok: m <= *cluster.end(),
            certificate_bound: cert.bound,
            certificate_ok: cert.holds,
            tau: config.primary_tau(),
        });
    }
    Ok(rows)
}

fn min_or(values: impl Iterator<Item = f64>, empty: f64) -> f64 {
    values.fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v)))).unwrap_or(empty)
}

fn bc_check(
    check: Check,
    config: &ExperimentConfig,
    domain: &GridDomain,
    s: &Solved,
    rows: &[SeriesRow],
) -> Result<Option<CheckVerdict>> {
    let spec = &s.spectrum;
    let kk = spec.k();
    let verdict = |passed: bool, margin: f64, detail: serde_json::Value| CheckVerdict {
        check: check.name().into(),
        bc: Some(s.bc),
        passed,
        margin,
        detail,
    };
    Ok(Some(match check {
        Check::Courant => {
            let mut per_tau = Vec::new();
            let mut margin = f64::INFINITY;
            let mut total = 0;
            for (tau, decs) in config.tau_nodal.iter().zip(&s.decs) {
                let r = courant_check(spec, &counts(decs), config.rel_gap)?;
                for row in &r.rows {
                    margin = margin.min(row.cluster_max as f64 - row.m_of_k as f64);
                }
                total += r.violations.len();
                per_tau.push(json!({ "tau": tau, "violations": r.violations }));
            }
            verdict(total == 0 && kk > 0, margin, json!({ "per_tau": per_tau }))
        }
        Check::Pleijel => {
            if kk < 20 {
                return Ok(Some(verdict(false, f64::NEG_INFINITY, json!({ "error": "fewer than 20 converged pairs" }))));
            }
            let p = pleijel_series(spec, &counts(&s.decs[0]), config.rel_gap)?;
            let tail: Vec<(usize, usize)> = p.ks.iter().copied().zip(p.m_of_k.iter().copied()).filter(|&(k, _)| k >= 20).collect();
            let margin = min_or(tail.iter().map(|&(k, m)| k as f64 - m as f64), f64::INFINITY);
            let (tail_max, tail_mean) = p.window(20, kk);
            let window = (kk >= 30).then(|| {
                let (max, mean) = p.window(30, kk.min(60));
                json!({ "lo": 30, "hi": kk.min(60), "max": max, "mean": mean })
            });
            verdict(
                margin > 0.0,
                margin,
                json!({
                    "pleijel_constant": p.pleijel_constant,
                    "tail_max_ratio": tail_max,
                    "tail_mean_ratio": tail_mean,
                    "window_30_60": window,
                    "lower_bound_note": "M(k) is the largest count over computed eigenvectors of the cluster",
                }),
            )
        }
        Check::Weyl => {
            if kk < 50 {
                return Ok(Some(verdict(false, f64::NEG_INFINITY, json!({ "error": "fewer than 50 converged pairs" }))));
            }
            let w = weyl_analysis(spec, domain.area(), 2)?;
            // Dirichlet counts sit below the one-term law by about P/(A·√λ)
            // (the boundary term); the lower edge of the band allows for it.
            let lambda_mid = w.table[kk - kk / 6 - 1].lambda;
            let perimeter = discrete_perimeter(domain, &CellSet::full(domain))?.raw;
            let boundary_term = perimeter / (domain.area() * lambda_mid.sqrt());
            let margin = match s.bc {
                BoundaryCondition::Dirichlet => {
                    (WEYL_TOLERANCE - w.relative_deviation).min(w.relative_deviation + WEYL_TOLERANCE + boundary_term)
                }
                BoundaryCondition::Neumann => WEYL_TOLERANCE + w.relative_deviation,
            };
            verdict(
                margin >= 0.0,
                margin,
                json!({
                    "limit_estimate": w.limit_estimate,
                    "target": w.target,
                    "relative_deviation": w.relative_deviation,
                    "boundary_term": boundary_term,
                }),
            )
        }
        Check::Green => {
            let op = assemble(domain, s.bc)?;
            let upto = config.green_max_k.min(kk);
            let reports = (0..upto)
                .into_par_iter()
                .map(|i| {
                    nodal_rayleigh_check(&op, &spec.eigenvectors[i], spec.eigenvalues[i], spec.residual_norms[i], &s.decs[0][i])
                })
                .collect::<Result<Vec<_>>>()?;
            let mut green_margin = f64::INFINITY;
            let mut lambda1_margin = f64::INFINITY;
            let mut flagged = 0;
            let mut bad = Vec::new();
            for (i, r) in reports.iter().enumerate() {
                for d in &r.domains {
                    green_margin = green_margin.min(r.tol_green - d.relative_gap);
                    if let Some(l) = d.lambda1 {
                        lambda1_margin = lambda1_margin.min(d.rayleigh + 1e-9 - l);
                    }
                    flagged += d.flagged as usize;
                }
                if !r.all_ok() {
                    bad.push(i + 1);
                }
            }
            verdict(
                bad.is_empty(),
                green_margin.min(lambda1_margin),
                json!({
                    "k_checked": upto,
                    "green_margin": green_margin,
                    "lambda1_margin": lambda1_margin,
                    "flagged_domains": flagged,
                    "failing_k": bad,
                    "restricted_operator": "principal submatrix of the eigenfunction's own operator",
                }),
            )
        }
        Check::Certificate => {
            let bad: Vec<usize> = rows.iter().filter(|r| !r.certificate_ok).map(|r| r.k).collect();
            let margin = min_or(rows.iter().map(|r| r.certificate_bound as f64 - s.decs[0][r.k - 1].count as f64), f64::INFINITY);
            verdict(
                bad.is_empty(),
                margin,
                json!({ "constant": sharp_fk_constant(2)?, "failing_k": bad }),
            )
        }
        _ => return Ok(None),
    }))
}

fn dirichlet_ground(domain: &GridDomain, solved: &[Solved], seed: u64) -> Result<(f64, Vec<f64>)> {
    if let Some(s) = solved.iter().find(|s| s.bc == BoundaryCondition::Dirichlet && s.spectrum.k() > 0) {
        return Ok((s.spectrum.eigenvalues[0], s.spectrum.eigenvectors[0].clone()));
    }
    let op = assemble_dirichlet(domain)?;
    let (l, v, _) = ground_state(&op, 1e-10, seed)?;
    Ok((l, v))
}

fn global_check(
    check: Check,
    config: &ExperimentConfig,
    domain: &GridDomain,
    solved: &[Solved],
) -> Result<Vec<CheckVerdict>> {
    let verdict = |passed: bool, margin: f64, detail: serde_json::Value| CheckVerdict {
        check: check.name().into(),
        bc: None,
        passed,
        margin,
        detail,
    };
    let mut extra = Vec::new();
    let main = match check {
        Check::FaberKrahn => {
            let (lambda1, _) = dirichlet_ground(domain, solved, config.seed)?;
            let whole = faber_krahn_check(lambda1, domain.area(), 2, config.fk_slack)?;
            let margin = (whole.lambda1 - whole.rhs) / whole.ball;
            let mut nodal_margin = f64::INFINITY;
            let mut nodal = 0;
            let mut nodal_failures = 0;
            if let Some(s) = solved.iter().find(|s| s.bc == BoundaryCondition::Dirichlet) {
                let op = assemble_dirichlet(domain)?;
                let upto = config.green_max_k.min(s.spectrum.k());
                let results = (0..upto)
                    .into_par_iter()
                    .map(|i| -> Result<Vec<f64>> {
                        let dec = &s.decs[0][i];
                        let mut out = Vec::new();
                        for id in 1..=dec.count as u32 {
                            let cells = dec.cells_of(id);
                            let sub = op.principal_submatrix(&cells);
                            if let Ok((l, _, _)) = ground_state(&sub, SUBDOMAIN_TOL, id as u64) {
                                let r = faber_krahn_check(l, dec.domain_areas[id as usize - 1], 2, NODAL_FK_SLACK)?;
                                out.push((r.lambda1 - r.rhs) / r.ball);
                            }
                        }
                        Ok(out)
                    })
                    .collect::<Result<Vec<_>>>()?;
                for m in results.into_iter().flatten() {
                    nodal += 1;
                    nodal_failures += (m < 0.0) as usize;
                    nodal_margin = nodal_margin.min(m);
                }
                extra.push(CheckVerdict {
                    check: "faber_krahn_nodal".into(),
                    bc: Some(BoundaryCondition::Dirichlet),
                    passed: nodal_failures == 0,
                    margin: nodal_margin,
                    detail: json!({
                        "nodal_domains_checked": nodal,
                        "slack": NODAL_FK_SLACK,
                        "failures": nodal_failures,
                        "k_checked": upto,
                    }),
                });
            }
            verdict(
                whole.holds,
                margin,
                json!({ "lambda1": whole.lambda1, "ball": whole.ball, "slack": whole.epsilon }),
            )
        }
        Check::PolyaSzego => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5053);
            let mut trials: Vec<Vec<f64>> = (0..config.polya_szego_trials).map(|_| random_bumps(domain, &mut rng)).collect();
            if let Ok((_, u)) = dirichlet_ground(domain, solved, config.seed) {
                trials.push(u.iter().map(|v| v.abs()).collect());
            }
            let mut margin = f64::INFINITY;
            let mut worst_ratio: f64 = 0.0;
            let mut failures = 0;
            let mut equimeasure_failures = 0;
            for u in &trials {
                let r = polya_szego_check(domain, u, 2)?;
                margin = margin.min(1.0 + r.tau - r.ratio);
                worst_ratio = worst_ratio.max(r.ratio);
                failures += !r.holds as usize;
                let mu = distribution_function(domain, u)?;
                let p = euclidean_rearrangement(domain, u, 2)?;
                for q in 0..10 {
                    let t = mu.max_value * q as f64 / 10.0;
                    if (mu.mu_at(t) - p.superlevel_volume(t)).abs() > domain.cell_area() * (1.0 + 1e-9) {
                        equimeasure_failures += 1;
                    }
                }
            }
            verdict(
                failures == 0 && equimeasure_failures == 0,
                margin,
                json!({
                    "trials": trials.len(),
                    "worst_ratio": worst_ratio,
                    "failures": failures,
                    "equimeasurability_failures": equimeasure_failures,
                }),
            )
        }
        Check::Isoperimetric => {
            let mut sets = vec![CellSet::full(domain)];
            if let Some(s) = solved.first() {
                for dec in s.decs[0].iter().take(ISOPERIMETRIC_NODAL_K) {
                    for id in 1..=dec.count as u32 {
                        sets.push(CellSet::from_fn(domain, |c, _| dec.labels[c] == id));
                    }
                }
            }
            let mut margin = f64::INFINITY;
            let mut whole = None;
            for set in &sets {
                let r = isoperimetric_ratio(domain, set, 2)?;
                margin = margin.min(r.raw / r.extremal - 1.0);
                whole.get_or_insert(r);
            }
            verdict(
                margin >= -1e-12,
                margin,
                json!({ "sets": sets.len(), "domain": whole }),
            )
        }
        Check::Coarea => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xC0A4);
            let mut margin = f64::INFINITY;
            let mut failures = 0;
            let mut done = 0;
            let diameter = bounding_diameter(domain);
            while done < config.coarea_trials {
                let a = random_set(domain, &mut rng);
                if a.is_empty() {
                    continue;
                }
                let x = rng.random_range(0..domain.len());
                let radius = rng.random_range(domain.h()..=0.5 * diameter.max(2.0 * domain.h()));
                let r = coarea_check(domain, x, &a, radius, TAU_COAREA)?;
                if r.rhs > 0.0 {
                    margin = margin.min((r.rhs * (1.0 + r.slack) - r.lhs) / r.rhs);
                }
                failures += !r.holds as usize;
                done += 1;
            }
            verdict(failures == 0, margin, json!({ "trials": done, "failures": failures, "slack": TAU_COAREA }))
        }
        _ => return Ok(Vec::new()),
    };
    Ok(std::iter::once(main).chain(extra).collect())
}

fn bounding_diameter(d: &GridDomain) -> f64 {
    (d.nx() as f64).hypot(d.ny() as f64) * d.h()
}

/// Sum of one to three Gaussian bumps centred in random cells.
pub fn random_bumps(d: &GridDomain, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let scale = d.area().sqrt();
    let count = rng.random_range(1..=3);
    let bumps: Vec<((f64, f64), f64, f64)> = (0..count)
        .map(|_| {
            let c = d.center(rng.random_range(0..d.len()));
            let sigma = rng.random_range(0.05..0.3) * scale;
            let amp = rng.random_range(0.5..1.5);
            (c, sigma, amp)
        })
        .collect();
    (0..d.len())
        .map(|i| {
            let (x, y) = d.center(i);
            bumps
                .iter()
                .map(|&((cx, cy), s, a)| a * (-((x - cx).powi(2) + (y - cy).powi(2)) / (2.0 * s * s)).exp())
                .sum()
        })
        .collect()
}

/// Half-plane, disk or axis rectangle, each with random placement.
pub fn random_set(d: &GridDomain, rng: &mut ChaCha8Rng) -> CellSet {
    let (px, py) = d.center(rng.random_range(0..d.len()));
    let scale = bounding_diameter(d);
    match rng.random_range(0..3) {
        0 => {
            let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (nx, ny) = (th.cos(), th.sin());
            CellSet::from_fn(d, |_, (x, y)| (x - px) * nx + (y - py) * ny < 0.0)
        }
        1 => {
            let r = rng.random_range(0.05..0.5) * scale;
            CellSet::from_fn(d, |_, (x, y)| (x - px).hypot(y - py) < r)
        }
        _ => {
            let w = rng.random_range(0.05..0.5) * scale;
            let h = rng.random_range(0.05..0.5) * scale;
            CellSet::from_fn(d, |_, (x, y)| (x - px).abs() < w && (y - py).abs() < h)
        }
    }
}

/// Neumann against Dirichlet, pair by pair.
pub fn compare_bc(neumann: &Spectrum, dirichlet: &Spectrum) -> Result<CompareBc> {
    if neumann.k() != dirichlet.k() {
        return Err(Error::DimensionMismatch {
            expected: dirichlet.k(),
            got: neumann.k(),
        });
    }
    let rows: Vec<CompareRow> = neumann
        .eigenvalues
        .iter()
        .zip(&dirichlet.eigenvalues)
        .enumerate()
        .map(|(i, (&n, &d))| CompareRow {
            k: i + 1,
            neumann: n,
            dirichlet: d,
            margin: d - n,
        })
        .collect();
    let min_margin = min_or(rows.iter().map(|r| r.margin), f64::INFINITY);
    Ok(CompareBc {
        holds: min_margin >= -COMPARE_TOLERANCE,
        rows,
        tolerance: COMPARE_TOLERANCE,
        min_margin,
        note: "the Dirichlet matrix is the Neumann matrix plus a nonnegative diagonal, so min-max orders the spectra exactly",
    })
}

fn weyl_csv(w: &WeylReport) -> String {
    let mut s = String::from("#schema=1\nlambda,count,ratio,target\n");
    for r in &w.table {
        s.push_str(&format!("{:.12e},{},{:.8},{:.8}\n", r.lambda, r.count, r.ratio, w.target));
    }
    s
}

fn render_files(
    config: &ExperimentConfig,
    domain: &GridDomain,
    report: &RunReport,
    solved: &[Solved],
) -> Result<Vec<(String, Vec<u8>)>> {
    let mut files = Vec::new();
    let mut json = serde_json::to_vec_pretty(report)?;
    json.push(b'\n');
    files.push(("report.json".to_string(), json));
    let rows: Vec<SeriesRow> = report.sections.iter().flat_map(|s| s.rows.iter().cloned()).collect();
    files.push(("series.csv".to_string(), series_csv(&rows).into_bytes()));

    let checks = config.parsed_checks()?;
    for (s, section) in solved.iter().zip(&report.sections) {
        let bc = s.bc;
        if checks.contains(&Check::Weyl) && s.spectrum.k() >= 50 {
            let w = weyl_analysis(&s.spectrum, domain.area(), 2)?;
            files.push((format!("weyl_{bc}.csv"), weyl_csv(&w).into_bytes()));
            if config.plots {
                let pts: Vec<(f64, f64)> = w.table.iter().map(|r| (r.lambda, r.ratio)).collect();
                let target = [(pts.first().map_or(0.0, |p| p.0), w.target), (pts.last().map_or(1.0, |p| p.0), w.target)];
                let svg = line_chart(
                    &format!("Weyl counting, {bc}"),
                    "lambda",
                    "N(lambda)/lambda",
                    &[
                        Series { label: "computed", points: &pts, color: "steelblue", dashed: false },
                        Series { label: "target", points: &target, color: "firebrick", dashed: true },
                    ],
                );
                files.push((format!("weyl_{bc}.svg"), svg.into_bytes()));
            }
        }
        if config.plots && !section.rows.is_empty() {
            let pts: Vec<(f64, f64)> = section.rows.iter().map(|r| (r.k as f64, r.ratio)).collect();
            let c = report.constants.pleijel_constant;
            let line = [(1.0, c), (section.rows.len() as f64, c)];
            let svg = line_chart(
                &format!("Nodal count ratio, {bc}"),
                "k",
                "M(k)/k",
                &[
                    Series { label: "M(k)/k", points: &pts, color: "steelblue", dashed: false },
                    Series { label: "4/j0^2", points: &line, color: "firebrick", dashed: true },
                ],
            );
            files.push((format!("pleijel_{bc}.svg"), svg.into_bytes()));
        }
        for (i, dec) in s.decs[0].iter().take(config.label_images).enumerate() {
            files.push((format!("labels_{bc}_k{:03}.pgm", i + 1), dec.to_pgm(domain)));
        }
        if config.write_eigenvectors {
            files.push((format!("eigenvectors_{bc}.bin"), encode_eigenvectors(&s.spectrum)));
        }
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::ExperimentConfig;

    fn small(bc: &str, checks: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(&format!(
            r#"{{"domain": {{"shape": "rectangle", "width": 3.141592653589793, "height": 3.141592653589793, "resolution": 7.639437268410976}},
                "K": 20, "bc": "{bc}", "checks": [{checks}], "seed": 3, "coarea_trials": 10, "polya_szego_trials": 3}}"#
        ))
        .unwrap()
    }

    #[test]
    fn small_square_all_checks() {
        let all = Check::ALL.iter().filter(|c| **c != Check::Weyl).map(|c| format!("\"{c}\"")).collect::<Vec<_>>().join(",");
        let a = execute(&small("both", &all)).unwrap();
        let r = &a.report;
        assert_eq!(r.sections.len(), 2);
        assert!(r.sections.iter().all(|s| s.rows.len() == 20));
        assert!(r.compare_bc.as_ref().unwrap().holds);
        // at h = π/24 the half-cell layer along nodal lines moves Rayleigh
        // quotients and nodal λ₁ by more than 5%; the Neumann certificate has
        // no theorem behind it
        for v in &r.checks {
            if !["certificate", "green", "faber_krahn_nodal"].contains(&v.check.as_str()) {
                assert!(v.passed, "{}: {}", v.label(), v.detail);
            }
        }
        assert_eq!(r.checks.iter().filter(|v| v.check == "green").count(), 2);
        assert_eq!(a.files[0].0, "report.json");
        let csv = String::from_utf8(a.files[1].1.clone()).unwrap();
        assert!(csv.starts_with("#schema=1\n"));
        assert_eq!(csv.lines().count(), 2 + 40);
    }

    #[test]
    fn stage_names_wrap_errors() {
        let mut c = small("dirichlet", "\"courant\"");
        c.k = 1000;
        match execute(&c) {
            Err(Error::Stage { stage, .. }) => assert_eq!(stage, "solve"),
            other => panic!("{:?}", other.map(|a| a.report.passed)),
        }
    }

    #[test]
    fn compare_bc_needs_matching_lengths() {
        let a = execute(&small("both", "\"courant\"")).unwrap();
        let d = &a.spectra[0];
        let n = a.spectra[1].clone();
        assert!(compare_bc(&n, d).unwrap().holds);
        let mut short = n.clone();
        short.eigenvalues.pop();
        short.eigenvectors.pop();
        short.residual_norms.pop();
        assert!(compare_bc(&short, d).is_err());
    }
}
