use std::f64::consts::PI;

use serde::Serialize;

use super::GridDomain;
use crate::error::{Error, Result};

/// Ratio between Euclidean and Manhattan length of an isotropically oriented
/// curve (2πr / 8r).
pub const ANISOTROPY_CORRECTION: f64 = PI / 4.0;

/// Discretization slack for [`coarea_check`].
pub const TAU_COAREA: f64 = 0.05;

/// Subset of the interior cells of one [`GridDomain`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    domain_id: u64,
    member: Vec<bool>,
}

impl CellSet {
    pub fn empty(d: &GridDomain) -> Self {
        CellSet {
            domain_id: d.id(),
            member: vec![false; d.len()],
        }
    }

    pub fn full(d: &GridDomain) -> Self {
        CellSet {
            domain_id: d.id(),
            member: vec![true; d.len()],
        }
    }

    /// Membership decided from the cell index and cell center.
    pub fn from_fn<F>(d: &GridDomain, mut pred: F) -> Self
    where
        F: FnMut(usize, (f64, f64)) -> bool,
    {
        CellSet {
            domain_id: d.id(),
            member: (0..d.len()).map(|c| pred(c, d.center(c))).collect(),
        }
    }

    pub fn from_members(d: &GridDomain, member: Vec<bool>) -> Result<Self> {
        if member.len() != d.len() {
            return Err(Error::DimensionMismatch {
                expected: d.len(),
                got: member.len(),
            });
        }
        Ok(CellSet {
            domain_id: d.id(),
            member,
        })
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.member[idx]
    }

    pub fn members(&self) -> &[bool] {
        &self.member
    }

    pub fn count(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.iter().any(|&m| m)
    }

    /// Complement within the parent domain.
    pub fn complement(&self) -> Self {
        CellSet {
            domain_id: self.domain_id,
            member: self.member.iter().map(|m| !m).collect(),
        }
    }

    pub fn area(&self, d: &GridDomain) -> f64 {
        self.count() as f64 * d.cell_area()
    }

    fn check_parent(&self, d: &GridDomain) -> Result<()> {
        if self.domain_id != d.id() || self.member.len() != d.len() {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Perimeter {
    /// Faces separating a member cell from a non-member or exterior cell.
    pub faces: usize,
    /// Of those, faces whose other side is an interior non-member cell.
    pub interior_faces: usize,
    /// `faces · h` (Manhattan length).
    pub raw: f64,
    /// `raw · π/4`.
    pub corrected: f64,
}

pub fn discrete_perimeter(d: &GridDomain, e: &CellSet) -> Result<Perimeter> {
    e.check_parent(d)?;
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut faces = 0;
    let mut interior_faces = 0;
    for c in (0..d.len()).filter(|&c| e.member[c]) {
        for n in d.neighbors(c) {
            match n {
                None => faces += 1,
                Some(n) if !e.member[n] => {
                    faces += 1;
                    interior_faces += 1;
                }
                Some(_) => {}
            }
        }
    }
    let raw = faces as f64 * d.h();
    Ok(Perimeter {
        faces,
        interior_faces,
        raw,
        corrected: raw * ANISOTROPY_CORRECTION,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsoperimetricRatio {
    pub raw: f64,
    pub corrected: f64,
    /// `N·ω_N^{1/N}`, the value attained by balls.
    pub extremal: f64,
}

/// `Per(E) / |E|^{(N-1)/N}` for the raw and corrected perimeters.
pub fn isoperimetric_ratio(d: &GridDomain, e: &CellSet, dim: u32) -> Result<IsoperimetricRatio> {
    if dim != 2 {
        return Err(Error::InvalidParameter(format!(
            "grid domains are planar; dimension {dim} unsupported"
        )));
    }
    let per = discrete_perimeter(d, e)?;
    let scale = e.area(d).sqrt();
    Ok(IsoperimetricRatio {
        raw: per.raw / scale,
        corrected: per.corrected / scale,
        extremal: 2.0 * PI.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoareaReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Discrete form of `∫_0^R Per(B_r(x), A) dr ≤ |B_R(x) ∩ A|`.
///
/// Balls are the cells whose centers are closer than `r` to the center of `x`.
/// The radius partition is `r_j = j·Δr`, `j = 0..J`, with `J = ⌈R/h⌉` and
/// `Δr = R/J`. A face counts toward `Per(B_r, A)` when both of its cells lie
/// in `A` and exactly one lies in the ball; it is a ball face for exactly the
/// radii in `(min(d_a,d_b), max(d_a,d_b)]`, so the sum is taken face by face.
///
/// The sphere's normal at a face is the direction θ from `x` to the face
/// midpoint, so each face is weighted by the exact Manhattan-to-Euclidean
/// factor `1/(|cos θ| + |sin θ|)` rather than the isotropic average π/4. The
/// average is only right when a whole circle crosses `A`; a short arc of a
/// large sphere at θ = 45° would otherwise be overcounted by 11%.
pub fn coarea_check(
    d: &GridDomain,
    x: usize,
    a: &CellSet,
    radius: f64,
    slack: f64,
) -> Result<CoareaReport> {
    a.check_parent(d)?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "coarea radius must be positive, got {radius}"
        )));
    }
    if x >= d.len() {
        return Err(Error::InvalidParameter(format!("cell {x} not in domain")));
    }
    let h = d.h();
    let steps = ((radius / h) - 1e-12).ceil().max(1.0) as usize;
    let dr = radius / steps as f64;
    let (cx, cy) = d.center(x);
    let dist: Vec<f64> = (0..d.len())
        .map(|c| {
            let (px, py) = d.center(c);
            (px - cx).hypot(py - cy)
        })
        .collect();

    let mut weighted = 0.0f64;
    let mut rhs_cells = 0usize;
    for c in 0..d.len() {
        if !a.member[c] {
            continue;
        }
        if dist[c] < radius {
            rhs_cells += 1;
        }
        let nb = d.neighbors(c);
        // +x and +y neighbors visit each face once
        for n in [nb[1], nb[3]].into_iter().flatten() {
            if !a.member[n] {
                continue;
            }
            let (lo, hi) = if dist[c] <= dist[n] {
                (dist[c], dist[n])
            } else {
                (dist[n], dist[c])
            };
            let last = ((hi / dr).floor() as i64).min(steps as i64 - 1);
            let first = (lo / dr).floor() as i64;
            if last > first {
                let (ax, ay) = d.center(c);
                let (bx, by) = d.center(n);
                let (mx, my) = (0.5 * (ax + bx) - cx, 0.5 * (ay + by) - cy);
                let weight = mx.hypot(my) / (mx.abs() + my.abs());
                weighted += (last - first) as f64 * weight;
            }
        }
    }
    let lhs = weighted * h * dr;
    let rhs = rhs_cells as f64 * d.cell_area();
    Ok(CoareaReport {
        lhs,
        rhs,
        slack,
        holds: lhs <= rhs * (1.0 + slack) + 1e-15,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{rasterize_disk, rasterize_rectangle};

    #[test]
    fn square_block_faces() {
        let d = rasterize_rectangle(1.0, 1.0, 20.0).unwrap();
        let h = d.h();
        for k in [1usize, 3, 7] {
            let e = CellSet::from_fn(&d, |c, _| {
                let (i, j) = d.grid_position(c);
                (5..5 + k).contains(&i) && (5..5 + k).contains(&j)
            });
            let p = discrete_perimeter(&d, &e).unwrap();
            assert_eq!(p.faces, 4 * k);
            assert!((p.corrected - PI / 4.0 * 4.0 * k as f64 * h).abs() < 1e-12);
            let r = isoperimetric_ratio(&d, &e, 2).unwrap();
            assert!((r.raw - 4.0).abs() < 1e-12);
            assert!((r.corrected - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_set_errors() {
        let d = rasterize_rectangle(1.0, 1.0, 10.0).unwrap();
        let e = CellSet::empty(&d);
        assert!(matches!(discrete_perimeter(&d, &e), Err(Error::EmptySet)));
        assert!(matches!(isoperimetric_ratio(&d, &e, 2), Err(Error::EmptySet)));
    }

    #[test]
    fn foreign_set_rejected() {
        let d1 = rasterize_rectangle(1.0, 1.0, 10.0).unwrap();
        let d2 = rasterize_rectangle(1.0, 1.0, 11.0).unwrap();
        let e = CellSet::full(&d1);
        assert!(matches!(discrete_perimeter(&d2, &e), Err(Error::DomainMismatch)));
    }

    #[test]
    fn disk_perimeter_within_five_percent() {
        let d = rasterize_disk(1.0, 200.0).unwrap();
        let p = discrete_perimeter(&d, &CellSet::full(&d)).unwrap();
        assert!((p.corrected / (2.0 * PI) - 1.0).abs() < 0.05);
    }

    #[test]
    fn interior_faces_shared_with_complement() {
        let d = rasterize_disk(1.0, 30.0).unwrap();
        let e = CellSet::from_fn(&d, |_, (x, y)| x + 0.3 * y > 0.1);
        let pe = discrete_perimeter(&d, &e).unwrap();
        let pc = discrete_perimeter(&d, &e.complement()).unwrap();
        assert_eq!(pe.interior_faces, pc.interior_faces);
        assert_eq!(e.count() + e.complement().count(), d.len());
    }

    #[test]
    fn coarea_trivial_cases() {
        let d = rasterize_rectangle(1.0, 1.0, 50.0).unwrap();
        let x = d.len() / 2;
        let full = CellSet::full(&d);
        let r = coarea_check(&d, x, &full, 2.0, TAU_COAREA).unwrap();
        assert!(r.holds);
        assert!((r.rhs - d.area()).abs() < 1e-12);

        let far = CellSet::from_fn(&d, |c, _| c == 0);
        let r = coarea_check(&d, x, &far, 0.1, TAU_COAREA).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs, 0.0);
        assert!(r.holds);

        assert!(coarea_check(&d, x, &full, 0.0, TAU_COAREA).is_err());
        assert!(coarea_check(&d, x, &full, -1.0, TAU_COAREA).is_err());
    }

    #[test]
    fn coarea_half_plane() {
        // 200x200 cells, axis-aligned half plane, R = 0.3
        let d = rasterize_rectangle(1.0, 1.0, 201.0).unwrap();
        let a = CellSet::from_fn(&d, |_, (x, _)| x < 0.5);
        let x = (0..d.len())
            .min_by(|&p, &q| {
                let dp = d.center(p);
                let dq = d.center(q);
                let fp = (dp.0 - 0.45).hypot(dp.1 - 0.5);
                let fq = (dq.0 - 0.45).hypot(dq.1 - 0.5);
                fp.total_cmp(&fq)
            })
            .unwrap();
        let r = coarea_check(&d, x, &a, 0.3, TAU_COAREA).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.lhs > 0.8 * r.rhs);
    }
}
