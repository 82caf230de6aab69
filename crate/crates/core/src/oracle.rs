//! Closed-form spectra of the square `[0, π]²`, continuous and on the grid.

use serde::Serialize;

/// `#{(m, n) : m, n ≥ lo, m² + n² ≤ λ}`.
fn lattice_count(lambda: f64, lo: i64) -> u64 {
    if lambda < 0.0 {
        return 0;
    }
    let r = lambda.sqrt().floor() as i64 + 1;
    let mut count = 0;
    for m in lo..=r {
        let rest = lambda - (m * m) as f64;
        if rest < 0.0 {
            break;
        }
        let top = rest.sqrt().floor() as i64;
        // guard against rounding at perfect squares
        let top = (top - 1..=top + 1).filter(|&n| (n * n) as f64 <= rest).max().unwrap_or(-1);
        if top >= lo {
            count += (top - lo + 1) as u64;
        }
    }
    count
}

/// Dirichlet counting function of `[0, π]²`.
pub fn dirichlet_square_count(lambda: f64) -> u64 {
    lattice_count(lambda, 1)
}

/// Neumann counting function of `[0, π]²`.
pub fn neumann_square_count(lambda: f64) -> u64 {
    lattice_count(lambda, 0)
}

/// A quarter of the `Z²` points in the disk of radius `√λ`.
pub fn quarter_lattice_count(lambda: f64) -> f64 {
    let q = lattice_count(lambda, 1) as f64;
    let axis = lambda.max(0.0).sqrt().floor();
    // full disk = 4·(open quadrant) + 4·(positive half-axis) + origin
    (4.0 * q + 4.0 * axis + 1.0) / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeCounts {
    pub lambda_max: f64,
    pub dirichlet: u64,
    pub neumann: u64,
    pub quarter_disk: f64,
    pub weyl_target: f64,
    pub dirichlet_ratio: f64,
    pub quarter_ratio: f64,
    /// `πλ/4 − √λ`, the two-term Dirichlet asymptotic.
    pub dirichlet_two_term: f64,
}

pub fn lattice_counts(lambda_max: f64) -> LatticeCounts {
    let target = std::f64::consts::FRAC_PI_4;
    let dirichlet = dirichlet_square_count(lambda_max);
    let quarter = quarter_lattice_count(lambda_max);
    LatticeCounts {
        lambda_max,
        dirichlet,
        neumann: neumann_square_count(lambda_max),
        quarter_disk: quarter,
        weyl_target: target,
        dirichlet_ratio: dirichlet as f64 / lambda_max,
        quarter_ratio: quarter / lambda_max,
        dirichlet_two_term: target * lambda_max - lambda_max.sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquareMode {
    pub lambda: f64,
    pub m: usize,
    pub n: usize,
}

impl SquareMode {
    /// Nodal count of the pure tensor mode.
    pub fn nodal_count(&self) -> usize {
        self.m * self.n
    }
}

fn sorted_modes(mut modes: Vec<SquareMode>, k: usize) -> Vec<SquareMode> {
    modes.sort_by(|a, b| a.lambda.total_cmp(&b.lambda).then(a.m.cmp(&b.m)));
    modes.truncate(k);
    modes
}

/// Lowest `k` Dirichlet modes `m² + n²` of `[0, π]²`.
pub fn square_dirichlet_modes(k: usize) -> Vec<SquareMode> {
    let top = (k as f64).sqrt().ceil() as usize * 2 + 2;
    let modes = (1..=top)
        .flat_map(|m| (1..=top).map(move |n| SquareMode { lambda: (m * m + n * n) as f64, m, n }))
        .collect();
    sorted_modes(modes, k)
}

/// Lowest `k` Neumann modes of `[0, π]²`.
pub fn square_neumann_modes(k: usize) -> Vec<SquareMode> {
    let top = (k as f64).sqrt().ceil() as usize * 2 + 2;
    let modes = (0..=top)
        .flat_map(|m| (0..=top).map(move |n| SquareMode { lambda: (m * m + n * n) as f64, m, n }))
        .collect();
    sorted_modes(modes, k)
}

/// Lowest `k` eigenpairs of the five-point Dirichlet Laplacian on the
/// `(p−1)²` interior nodes of `[0, π]²` at `h = π/p`.
pub fn grid_square_dirichlet_modes(p: usize, k: usize) -> Vec<SquareMode> {
    let h = std::f64::consts::PI / p as f64;
    let s = |m: usize| (m as f64 * h / 2.0).sin().powi(2);
    let modes = (1..p)
        .flat_map(|m| {
            (1..p).map(move |n| SquareMode {
                lambda: 4.0 / (h * h) * (s(m) + s(n)),
                m,
                n,
            })
        })
        .collect();
    sorted_modes(modes, k)
}

/// Lowest `k` eigenvalues of the graph Laplacian on a `q × q` block of cells
/// with spacing `h` (the Neumann operator of a square grid domain).
pub fn grid_square_neumann_eigenvalues(q: usize, h: f64, k: usize) -> Vec<f64> {
    let s = |m: usize| (std::f64::consts::PI * m as f64 / (2.0 * q as f64)).sin().powi(2);
    let mut v: Vec<f64> = (0..q)
        .flat_map(|m| (0..q).map(move |n| 4.0 / (h * h) * (s(m) + s(n))))
        .collect();
    v.sort_by(f64::total_cmp);
    v.truncate(k);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(lambda: f64, lo: i64) -> u64 {
        let mut c = 0;
        for m in lo..200 {
            for n in lo..200 {
                if ((m * m + n * n) as f64) <= lambda {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn counts_match_brute_force() {
        for lambda in [0.0, 1.0, 2.0, 5.0, 25.0, 50.0, 99.5, 1000.0, 2000.0] {
            assert_eq!(dirichlet_square_count(lambda), brute(lambda, 1), "{lambda}");
            assert_eq!(neumann_square_count(lambda), brute(lambda, 0), "{lambda}");
        }
        // Gauss circle: r = 5 gives 81 points
        assert_eq!(quarter_lattice_count(25.0) * 4.0, 81.0);
    }

    #[test]
    fn square_lists() {
        let d: Vec<f64> = square_dirichlet_modes(10).iter().map(|m| m.lambda).collect();
        assert_eq!(d, vec![2.0, 5.0, 5.0, 8.0, 10.0, 10.0, 13.0, 13.0, 17.0, 17.0]);
        let n: Vec<f64> = square_neumann_modes(10).iter().map(|m| m.lambda).collect();
        assert_eq!(n, vec![0.0, 1.0, 1.0, 2.0, 4.0, 4.0, 5.0, 5.0, 8.0, 9.0]);
    }

    #[test]
    fn grid_modes_approach_continuum() {
        let g = grid_square_dirichlet_modes(256, 6);
        for (a, b) in g.iter().zip(square_dirichlet_modes(6)) {
            assert!(a.lambda < b.lambda && (a.lambda / b.lambda - 1.0).abs() < 1e-3);
        }
        let n = grid_square_neumann_eigenvalues(4, 1.0, 3);
        assert_eq!(n[0], 0.0);
    }
}
