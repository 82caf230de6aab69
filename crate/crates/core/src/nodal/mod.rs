//! Nodal domains of grid eigenvectors and the counting checks built on them.

mod union_find;

use std::fmt::Write as _;

use serde::Serialize;

use crate::domains::GridDomain;
use crate::error::{Error, Result};
use crate::rearrange::{ball_dirichlet_eigenvalue, SpectralConstants};
use crate::sparse::{ground_state, BoundaryCondition, SparseSymOperator, Spectrum};

pub use union_find::UnionFind;

/// Default relative gap below which consecutive eigenvalues share a cluster.
pub const DEFAULT_REL_GAP: f64 = 1e-4;

/// Threshold sweep every report carries.
pub const TAU_SWEEP: [f64; 3] = [0.0, 1e-4, 1e-3];

/// Residual tolerance for first eigenpairs of nodal subdomains.
pub const SUBDOMAIN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalDecomposition {
    /// Per interior cell: 0 on the nodal set, otherwise the 1-based domain id.
    pub labels: Vec<u32>,
    pub count: usize,
    pub domain_cells: Vec<usize>,
    pub domain_areas: Vec<f64>,
    pub domain_signs: Vec<Sign>,
    pub nodal_area: f64,
    pub total_area: f64,
    pub threshold_used: f64,
}

impl NodalDecomposition {
    /// Interior cell indices of domain `id` (1-based), in scan order.
    pub fn cells_of(&self, id: u32) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == id)
            .map(|(c, _)| c)
            .collect()
    }

    /// Binary PGM (P5) of the label grid; exterior cells are black, the
    /// nodal set white, domains spread over the gray levels in between.
    pub fn to_pgm(&self, d: &GridDomain) -> Vec<u8> {
        let mut pixels = vec![0u8; d.nx() * d.ny()];
        for (c, &l) in self.labels.iter().enumerate() {
            let (i, j) = d.grid_position(c);
            // image rows go top-down
            let p = (d.ny() - 1 - j) * d.nx() + i;
            pixels[p] = if l == 0 {
                255
            } else {
                (40 + (l as usize * 97) % 180) as u8
            };
        }
        let mut out = format!("P5\n{} {}\n255\n", d.nx(), d.ny()).into_bytes();
        out.extend(pixels);
        out
    }
}

/// Labels the maximal 4-connected constant-sign components of `u`.
///
/// Cells with `|u| ≤ tau · max|u|` form the nodal set. Ids follow the
/// row-major first touch of each component.
pub fn nodal_decompose(d: &GridDomain, u: &[f64], tau: f64) -> Result<NodalDecomposition> {
    if u.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            got: u.len(),
        });
    }
    if !(0.0..=0.05).contains(&tau) {
        return Err(Error::InvalidParameter(format!(
            "nodal threshold must lie in [0, 0.05], got {tau}"
        )));
    }
    let max = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Err(Error::ZeroVector);
    }
    let threshold = tau * max;
    let sign = |v: f64| -> i8 {
        if v > threshold {
            1
        } else if v < -threshold {
            -1
        } else {
            0
        }
    };
    let signs: Vec<i8> = u.iter().map(|&v| sign(v)).collect();

    let mut uf = UnionFind::new(d.len());
    for c in 0..d.len() {
        if signs[c] == 0 {
            continue;
        }
        let nb = d.neighbors(c);
        for n in [nb[1], nb[3]].into_iter().flatten() {
            if signs[n] == signs[c] {
                uf.union(c, n);
            }
        }
    }

    let mut labels = vec![0u32; d.len()];
    let mut root_id = vec![0u32; d.len()];
    let mut domain_cells = Vec::new();
    let mut domain_signs = Vec::new();
    for c in 0..d.len() {
        if signs[c] == 0 {
            continue;
        }
        let r = uf.find(c);
        if root_id[r] == 0 {
            domain_cells.push(0);
            domain_signs.push(if signs[c] > 0 { Sign::Positive } else { Sign::Negative });
            root_id[r] = domain_cells.len() as u32;
        }
        let id = root_id[r];
        labels[c] = id;
        domain_cells[id as usize - 1] += 1;
    }
    let cell_area = d.cell_area();
    let nodal_cells = signs.iter().filter(|&&s| s == 0).count();
    Ok(NodalDecomposition {
        count: domain_cells.len(),
        domain_areas: domain_cells.iter().map(|&n| n as f64 * cell_area).collect(),
        labels,
        domain_cells,
        domain_signs,
        nodal_area: nodal_cells as f64 * cell_area,
        total_area: d.area(),
        threshold_used: tau,
    })
}

/// Maximal run of indices around `k` (1-based) whose consecutive eigenvalues
/// differ by less than `rel_gap` relative. Returned as a 1-based inclusive
/// range. A cluster touching the end of the computed spectrum may continue
/// past it.
pub fn eigenspace_cluster(s: &Spectrum, k: usize, rel_gap: f64) -> Result<std::ops::RangeInclusive<usize>> {
    if k == 0 || k > s.k() {
        return Err(Error::InvalidParameter(format!(
            "index {k} outside computed spectrum 1..={}",
            s.k()
        )));
    }
    let close = |i: usize| {
        // i, i+1 zero-based
        let (a, b) = (s.eigenvalues[i], s.eigenvalues[i + 1]);
        let scale = a.abs().max(b.abs());
        (b - a).abs() <= 1e-12 || (b - a).abs() < rel_gap * scale
    };
    let mut lo = k - 1;
    while lo > 0 && close(lo - 1) {
        lo -= 1;
    }
    let mut hi = k - 1;
    while hi + 1 < s.k() && close(hi) {
        hi += 1;
    }
    Ok(lo + 1..=hi + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CourantRow {
    pub k: usize,
    pub cluster_max: usize,
    pub m_of_k: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CourantReport {
    pub rows: Vec<CourantRow>,
    pub violations: Vec<usize>,
}

/// `M(k) ≤ max index of the cluster of k`, with `M(k)` the largest count over
/// the computed eigenvectors of that cluster. `counts[i]` is the nodal count
/// of eigenvector `i + 1`.
pub fn courant_check(s: &Spectrum, counts: &[usize], rel_gap: f64) -> Result<CourantReport> {
    let mut rows = Vec::with_capacity(counts.len());
    let mut violations = Vec::new();
    for k in 1..=counts.len() {
        let cluster = eigenspace_cluster(s, k, rel_gap)?;
        let m = cluster_max_count(&cluster, counts);
        let ok = m <= *cluster.end();
        if !ok {
            violations.push(k);
        }
        rows.push(CourantRow {
            k,
            cluster_max: *cluster.end(),
            m_of_k: m,
            ok,
        });
    }
    Ok(CourantReport { rows, violations })
}

fn cluster_max_count(cluster: &std::ops::RangeInclusive<usize>, counts: &[usize]) -> usize {
    cluster
        .clone()
        .filter(|&i| i <= counts.len())
        .map(|i| counts[i - 1])
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PleijelSeries {
    pub bc: Option<BoundaryCondition>,
    pub ks: Vec<usize>,
    /// Largest count over the computed eigenvectors in the cluster of `k`; a
    /// lower bound for the supremum over the whole eigenspace.
    pub m_of_k: Vec<usize>,
    pub ratios: Vec<f64>,
    pub pleijel_constant: f64,
}

impl PleijelSeries {
    /// Largest and mean ratio over `lo..=hi`.
    pub fn window(&self, lo: usize, hi: usize) -> (f64, f64) {
        let r: Vec<f64> = self
            .ks
            .iter()
            .zip(&self.ratios)
            .filter(|(&k, _)| (lo..=hi).contains(&k))
            .map(|(_, &r)| r)
            .collect();
        let max = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (max, r.iter().sum::<f64>() / r.len() as f64)
    }
}

pub fn pleijel_series(s: &Spectrum, counts: &[usize], rel_gap: f64) -> Result<PleijelSeries> {
    if counts.len() < 20 {
        return Err(Error::InvalidParameter(format!(
            "Pleijel series needs at least 20 eigenpairs, got {}",
            counts.len()
        )));
    }
    let constants = SpectralConstants::new(2)?;
    let mut ks = Vec::new();
    let mut m_of_k = Vec::new();
    let mut ratios = Vec::new();
    for k in 1..=counts.len() {
        let cluster = eigenspace_cluster(s, k, rel_gap)?;
        let m = cluster_max_count(&cluster, counts);
        ks.push(k);
        m_of_k.push(m);
        ratios.push(m as f64 / k as f64);
    }
    Ok(PleijelSeries {
        bc: s.bc,
        ks,
        m_of_k,
        ratios,
        pleijel_constant: constants.pleijel_constant,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DomainRayleigh {
    pub id: u32,
    pub cells: usize,
    pub area: f64,
    pub sign: Sign,
    /// Rayleigh quotient of `u` restricted to the domain and extended by zero.
    pub rayleigh: f64,
    pub relative_gap: f64,
    /// Lowest eigenvalue of the operator restricted to the domain.
    pub lambda1: Option<f64>,
    pub green_ok: bool,
    pub lambda1_ok: bool,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalRayleighReport {
    pub lambda: f64,
    pub tol_green: f64,
    pub domains: Vec<DomainRayleigh>,
}

impl NodalRayleighReport {
    /// Flagged domains (sub-solve did not converge) are reported, not failed.
    pub fn all_ok(&self) -> bool {
        self.domains.iter().all(|d| d.green_ok && (d.lambda1_ok || d.flagged))
    }
}

/// Green-identity and first-eigenvalue checks on every nodal domain.
///
/// The restricted operator is the principal submatrix of `op` on the domain's
/// cells: zero values across nodal lines, the eigenfunction's own condition on
/// the outer boundary (Dirichlet stays Dirichlet, Neumann faces stay free).
pub fn nodal_rayleigh_check(
    op: &SparseSymOperator,
    u: &[f64],
    lambda: f64,
    residual: f64,
    dec: &NodalDecomposition,
) -> Result<NodalRayleighReport> {
    if u.len() != op.n() || dec.labels.len() != op.n() {
        return Err(Error::DimensionMismatch {
            expected: op.n(),
            got: u.len(),
        });
    }
    let tol_green = 0.05f64.max(10.0 * residual / lambda.abs().max(1.0));
    let mut domains = Vec::with_capacity(dec.count);
    for id in 1..=dec.count as u32 {
        let cells = dec.cells_of(id);
        let sub = op.principal_submatrix(&cells);
        let restricted: Vec<f64> = cells.iter().map(|&c| u[c]).collect();
        let rayleigh = sub.rayleigh_quotient(&restricted)?;
        // absolute below 1 so the Neumann constant mode (λ = 0) is not a 0/0
        let relative_gap = (rayleigh - lambda).abs() / lambda.abs().max(1.0);
        let (lambda1, flagged) = match ground_state(&sub, SUBDOMAIN_TOL, id as u64) {
            Ok((l, _, _)) => (Some(l), false),
            Err(_) => (None, true),
        };
        domains.push(DomainRayleigh {
            id,
            cells: cells.len(),
            area: dec.domain_areas[id as usize - 1],
            sign: dec.domain_signs[id as usize - 1],
            rayleigh,
            relative_gap,
            lambda1,
            green_ok: relative_gap <= tol_green,
            lambda1_ok: lambda1.is_some_and(|l| l <= rayleigh + 1e-9),
            flagged,
        });
    }
    Ok(NodalRayleighReport {
        lambda,
        tol_green,
        domains,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub bound: u64,
    pub count: usize,
    pub holds: bool,
}

/// Disjoint-volume count limit: each nodal domain has `λ₁(Ω_i) ≤ λ`, so by
/// Faber–Krahn `|Ω_i| ≥ (C/λ)^{N/2}`; at most `⌊|Ω|·(λ/C)^{N/2}⌋` of them fit.
pub fn pleijel_certificate(
    dec: &NodalDecomposition,
    lambda: f64,
    c_fk: f64,
    dim: u32,
) -> Result<Certificate> {
    if !(c_fk > 0.0) || !c_fk.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Faber-Krahn constant must be positive, got {c_fk}"
        )));
    }
    if lambda < 0.0 || dim == 0 {
        return Err(Error::InvalidParameter(format!(
            "need lambda >= 0 and dim >= 1, got {lambda}, {dim}"
        )));
    }
    let bound = (dec.total_area * (lambda / c_fk).powf(dim as f64 / 2.0)).floor() as u64;
    Ok(Certificate {
        bound,
        count: dec.count,
        holds: dec.count as u64 <= bound,
    })
}

/// Sharp Euclidean constant `ω_N^{2/N} j²`, i.e. `λ₁` of the unit-volume ball.
pub fn sharp_fk_constant(dim: u32) -> Result<f64> {
    ball_dirichlet_eigenvalue(1.0, dim)
}

/// One row of the per-k series CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRow {
    pub k: usize,
    pub bc: BoundaryCondition,
    pub lambda: f64,
    pub cluster_size: usize,
    pub m_count: usize,
    pub ratio: f64,
    pub courant_ok: bool,
    pub certificate_bound: u64,
    pub certificate_ok: bool,
    pub tau: f64,
}

pub const SERIES_HEADER: &str =
    "k,bc,lambda,cluster_size,M_count,ratio,courant_ok,certificate_bound,certificate_ok,tau";

pub fn series_csv(rows: &[SeriesRow]) -> String {
    let mut s = String::from("#schema=1\n");
    s.push_str(SERIES_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{:.12e},{},{},{:.6},{},{},{},{:e}",
            r.k,
            r.bc,
            r.lambda,
            r.cluster_size,
            r.m_count,
            r.ratio,
            r.courant_ok,
            r.certificate_bound,
            r.certificate_ok,
            r.tau
        );
    }
    s
}
