//! Distribution functions, monotone rearrangements onto balls, Bessel zeros,
//! and the energy and eigenvalue comparisons that use them.

mod bessel;

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::domains::GridDomain;
use crate::error::{Error, Result};
use crate::sparse::Spectrum;

pub use bessel::{bessel_first_zero, bessel_j};

pub const TAU_PS: f64 = 0.03;
pub const DEFAULT_FK_SLACK: f64 = 0.02;
pub const MIN_PROFILE_SAMPLES: usize = 1000;
pub const MIN_WEYL_EIGENVALUES: usize = 50;

/// Volume of the unit ball in `R^N`.
pub fn unit_ball_volume(dim: u32) -> f64 {
    let n = dim as f64;
    PI.powf(n / 2.0) / gamma(n / 2.0 + 1.0)
}

fn check_dim(dim: u32) -> Result<()> {
    if !(2..=18).contains(&dim) {
        return Err(Error::InvalidParameter(format!("dimension must lie in 2..=18, got {dim}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralConstants {
    #[serde(rename = "N")]
    pub dim: u32,
    pub omega_n: f64,
    pub bessel_index: f64,
    #[serde(rename = "j")]
    pub j_first_zero: f64,
    pub pleijel_constant: f64,
}

impl SpectralConstants {
    pub fn new(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        let n = dim as f64;
        let omega_n = unit_ball_volume(dim);
        let bessel_index = (n - 2.0) / n;
        let j = bessel_first_zero(bessel_index)?;
        Ok(SpectralConstants {
            dim,
            omega_n,
            bessel_index,
            j_first_zero: j,
            pleijel_constant: (2.0 * PI).powf(n) / (omega_n * omega_n * j.powf(n)),
        })
    }
}

/// `λ₁` of the ball with the given volume: `(ω_N/volume)^{2/N}·j²`.
pub fn ball_dirichlet_eigenvalue(volume: f64, dim: u32) -> Result<f64> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::InvalidParameter(format!("volume must be positive, got {volume}")));
    }
    let c = SpectralConstants::new(dim)?;
    Ok((c.omega_n / volume).powf(2.0 / dim as f64) * c.j_first_zero * c.j_first_zero)
}

fn check_nonnegative(u: &[f64]) -> Result<()> {
    match u.iter().position(|&v| !(v >= 0.0)) {
        Some(index) => Err(Error::NegativeEntry { index, value: u[index] }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionFunction {
    /// 0 followed by the distinct positive values of `u`, ascending.
    pub thresholds: Vec<f64>,
    pub mu: Vec<f64>,
    /// Measure of the whole domain.
    pub total_mass: f64,
    pub max_value: f64,
    pub cell_area: f64,
    /// Values of `u` sorted descending.
    #[serde(skip)]
    sorted_desc: Vec<f64>,
}

impl DistributionFunction {
    /// `m({u > t})`.
    pub fn mu_at(&self, t: f64) -> f64 {
        // count of values strictly above t in the descending list
        let count = self.sorted_desc.partition_point(|&v| v > t);
        count as f64 * self.cell_area
    }

    /// Left-continuous generalized inverse: `u^#(0) = max u`, otherwise
    /// `u^#(s) = inf{t : μ(t) < s}`.
    pub fn decreasing_rearrangement(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.max_value;
        }
        let j = (s / self.cell_area).ceil() as usize;
        if j == 0 {
            self.max_value
        } else if j > self.sorted_desc.len() {
            0.0
        } else {
            self.sorted_desc[j - 1]
        }
    }
}

pub fn distribution_function(d: &GridDomain, u: &[f64]) -> Result<DistributionFunction> {
    if u.len() != d.len() {
        return Err(Error::DimensionMismatch { expected: d.len(), got: u.len() });
    }
    check_nonnegative(u)?;
    let mut sorted_desc = u.to_vec();
    sorted_desc.sort_by(|a, b| b.total_cmp(a));
    let cell_area = d.cell_area();
    let mut thresholds = vec![0.0];
    let mut mu = vec![sorted_desc.partition_point(|&v| v > 0.0) as f64 * cell_area];
    // walk distinct values ascending
    for (pos, &v) in sorted_desc.iter().enumerate().rev() {
        if v > 0.0 && v != *thresholds.last().unwrap() {
            thresholds.push(v);
            // values strictly above v sit before the first occurrence of v
            let first = sorted_desc[..=pos].partition_point(|&w| w > v);
            mu.push(first as f64 * cell_area);
        }
    }
    Ok(DistributionFunction {
        thresholds,
        mu,
        total_mass: d.area(),
        max_value: sorted_desc.first().copied().unwrap_or(0.0),
        cell_area,
        sorted_desc,
    })
}

/// Radially nonincreasing function on the ball of the domain's volume,
/// equimeasurable with the source up to half a cell.
///
/// Between the cell knots `s_j = (j − ½)·cell_area` the decreasing
/// rearrangement is interpolated linearly in the volume variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    #[serde(rename = "N")]
    pub dim: u32,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub outer_radius: f64,
    pub cell_area: f64,
    /// Spacing of the source grid; the radial energy is differenced at it.
    pub grid_h: f64,
    #[serde(skip)]
    levels: Vec<f64>,
}

impl RadialProfile {
    fn from_levels(dim: u32, levels: Vec<f64>, cell_area: f64, grid_h: f64, samples: usize) -> Self {
        let omega = unit_ball_volume(dim);
        let volume = levels.len() as f64 * cell_area;
        let outer_radius = (volume / omega).powf(1.0 / dim as f64);
        let hr = outer_radius / samples as f64;
        let mut p = RadialProfile {
            dim,
            radii: (0..=samples).map(|j| j as f64 * hr).collect(),
            values: Vec::new(),
            outer_radius,
            cell_area,
            grid_h,
            levels,
        };
        p.values = p.radii.iter().map(|&r| p.value_at(r)).collect();
        p
    }

    fn volume_of(&self, r: f64) -> f64 {
        unit_ball_volume(self.dim) * r.powi(self.dim as i32)
    }

    fn at_volume(&self, s: f64) -> f64 {
        let a = self.cell_area;
        let m = self.levels.len();
        if m == 0 || s >= m as f64 * a {
            return 0.0;
        }
        let x = s / a - 0.5;
        if x <= 0.0 {
            return self.levels[0];
        }
        let j = x.floor() as usize;
        let f = x - j as f64;
        let lo = self.levels[j];
        let hi = if j + 1 < m { self.levels[j + 1] } else { 0.0 };
        // last segment ends at the outer boundary after half a cell
        let f = if j + 1 < m { f } else { 2.0 * f };
        lo + (hi - lo) * f.min(1.0)
    }

    pub fn value_at(&self, r: f64) -> f64 {
        if r >= self.outer_radius {
            return 0.0;
        }
        self.at_volume(self.volume_of(r.abs()))
    }

    /// `ω_N·(sup{r : v(r) > t})^N`, evaluated exactly on the interpolant.
    pub fn superlevel_volume(&self, t: f64) -> f64 {
        let a = self.cell_area;
        let m = self.levels.len();
        let j = self.levels.partition_point(|&v| v > t);
        if j == 0 {
            return 0.0;
        }
        let wj = self.levels[j - 1];
        let (s0, s1, w1) = if j < m {
            ((j as f64 - 0.5) * a, (j as f64 + 0.5) * a, self.levels[j])
        } else {
            ((m as f64 - 0.5) * a, m as f64 * a, 0.0)
        };
        if wj == w1 {
            return s0;
        }
        (s0 + (s1 - s0) * (wj - t) / (wj - w1)).min(m as f64 * a)
    }

    /// `∫ v^p` over the ball, integrated in the volume variable with
    /// Simpson's rule per linear piece (exact for p = 1, 2).
    pub fn lp_integral(&self, p: f64) -> f64 {
        let a = self.cell_area;
        let m = self.levels.len();
        if m == 0 {
            return 0.0;
        }
        let f = |v: f64| v.powf(p);
        let mut total = 0.5 * a * f(self.levels[0]);
        let seg = |lo: f64, hi: f64, len: f64| len / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
        for j in 0..m - 1 {
            total += seg(self.levels[j], self.levels[j + 1], a);
        }
        total + seg(self.levels[m - 1], 0.0, 0.5 * a)
    }

    /// Radial energy `∫ (v′)² N ω_N r^{N−1} dr` by centered differences
    /// (one-sided at the ends) and the trapezoid rule, on radii spaced by the
    /// source grid's `h`.
    ///
    /// Finer radial spacing resolves the lattice discrepancy of the sorted
    /// samples and inflates the energy without bound.
    pub fn radial_energy(&self) -> f64 {
        let steps = ((self.outer_radius / self.grid_h).ceil() as usize).max(2);
        let hr = self.outer_radius / steps as f64;
        let v: Vec<f64> = (0..=steps).map(|j| self.value_at(j as f64 * hr)).collect();
        let surface = self.dim as f64 * unit_ball_volume(self.dim);
        let mut e = 0.0;
        for j in 0..=steps {
            let dv = if j == 0 {
                (v[1] - v[0]) / hr
            } else if j == steps {
                (v[j] - v[j - 1]) / hr
            } else {
                (v[j + 1] - v[j - 1]) / (2.0 * hr)
            };
            let w = if j == 0 || j == steps { 0.5 } else { 1.0 };
            e += w * dv * dv * surface * (j as f64 * hr).powi(self.dim as i32 - 1) * hr;
        }
        e
    }

    /// Rearranging an already radial nonincreasing profile returns it unchanged.
    pub fn rearrange(&self) -> RadialProfile {
        let mut levels = self.levels.clone();
        levels.sort_by(|a, b| b.total_cmp(a));
        RadialProfile::from_levels(self.dim, levels, self.cell_area, self.grid_h, self.radii.len() - 1)
    }
}

pub fn euclidean_rearrangement(d: &GridDomain, u: &[f64], dim: u32) -> Result<RadialProfile> {
    check_dim(dim)?;
    let dist = distribution_function(d, u)?;
    if dist.max_value == 0.0 {
        return Err(Error::ZeroVector);
    }
    let samples = MIN_PROFILE_SAMPLES.max(4 * (d.len() as f64).sqrt().ceil() as usize);
    Ok(RadialProfile::from_levels(dim, dist.sorted_desc, dist.cell_area, d.h(), samples))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyaSzegoReport {
    pub e_orig: f64,
    pub e_star: f64,
    pub ratio: f64,
    pub tau: f64,
    pub holds: bool,
}

/// Discrete Dirichlet energy of `u` extended by zero outside the domain:
/// every cell face, including those on the outer boundary.
pub fn grid_energy(d: &GridDomain, u: &[f64]) -> Result<f64> {
    if u.len() != d.len() {
        return Err(Error::DimensionMismatch { expected: d.len(), got: u.len() });
    }
    let mut e = 0.0;
    for c in 0..d.len() {
        for (dir, n) in d.neighbors(c).into_iter().enumerate() {
            match n {
                // each interior face once, from its -x/-y side
                Some(n) if dir % 2 == 1 => e += (u[c] - u[n]).powi(2),
                Some(_) => {}
                None => e += u[c] * u[c],
            }
        }
    }
    Ok(e)
}

pub fn polya_szego_check(d: &GridDomain, u: &[f64], dim: u32) -> Result<PolyaSzegoReport> {
    polya_szego_check_with(d, u, dim, TAU_PS)
}

pub fn polya_szego_check_with(d: &GridDomain, u: &[f64], dim: u32, tau: f64) -> Result<PolyaSzegoReport> {
    if dim != 2 {
        return Err(Error::InvalidParameter(format!(
            "energies of planar grid functions compare only in dimension 2, got {dim}"
        )));
    }
    let profile = euclidean_rearrangement(d, u, dim)?;
    let e_orig = grid_energy(d, u)?;
    let e_star = profile.radial_energy();
    Ok(PolyaSzegoReport {
        e_orig,
        e_star,
        ratio: e_star / e_orig,
        tau,
        holds: e_star <= e_orig * (1.0 + tau),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FaberKrahnReport {
    pub lambda1: f64,
    pub volume: f64,
    pub ball: f64,
    pub epsilon: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `λ₁ ≥ (1 − ε)·λ₁(ball of equal volume)`. A negative `ε` asks for a strict
/// margin above the ball value, which the ball itself must fail.
pub fn faber_krahn_check(lambda1: f64, volume: f64, dim: u32, epsilon: f64) -> Result<FaberKrahnReport> {
    if !(lambda1 > 0.0) || !(epsilon > -1.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need lambda1 > 0 and epsilon in (-1, 1), got {lambda1}, {epsilon}"
        )));
    }
    let ball = ball_dirichlet_eigenvalue(volume, dim)?;
    let rhs = (1.0 - epsilon) * ball;
    Ok(FaberKrahnReport {
        lambda1,
        volume,
        ball,
        epsilon,
        rhs,
        holds: lambda1 >= rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylRow {
    pub lambda: f64,
    pub count: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeylReport {
    pub table: Vec<WeylRow>,
    pub limit_estimate: f64,
    pub target: f64,
    pub relative_deviation: f64,
}

/// Counting function against the Weyl constant `ω_N·area/(2π)^N`.
pub fn weyl_analysis(s: &Spectrum, area: f64, dim: u32) -> Result<WeylReport> {
    check_dim(dim)?;
    let k = s.k();
    if k < MIN_WEYL_EIGENVALUES {
        return Err(Error::InvalidParameter(format!(
            "Weyl analysis needs at least {MIN_WEYL_EIGENVALUES} eigenvalues, got {k}"
        )));
    }
    let half = dim as f64 / 2.0;
    let table: Vec<WeylRow> = s
        .eigenvalues
        .iter()
        .map(|&lambda| {
            let count = s.eigenvalues.partition_point(|&m| m <= lambda);
            let ratio = if lambda > 0.0 { count as f64 / lambda.powf(half) } else { f64::NAN };
            WeylRow { lambda, count, ratio }
        })
        .collect();
    let mut top: Vec<f64> = table[k - k / 3..].iter().map(|r| r.ratio).collect();
    top.sort_by(f64::total_cmp);
    let limit_estimate = median_sorted(&top);
    let target = unit_ball_volume(dim) * area / (2.0 * PI).powf(dim as f64);
    Ok(WeylReport {
        table,
        limit_estimate,
        target,
        relative_deviation: limit_estimate / target - 1.0,
    })
}

fn median_sorted(v: &[f64]) -> f64 {
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
