//! Rasterized planar domains on a uniform square grid.
//!
//! A [`GridDomain`] is the set of grid cells whose centers fall strictly inside
//! a continuum shape. Built-in shapes place the grid so that cell centers sit on
//! the lattice `i·h` of the shape's natural frame; for rectangles this puts the
//! outermost ring of lattice nodes exactly on the boundary, where they are
//! excluded.

mod cellset;
mod descriptor;
mod koch;

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cellset::{
    coarea_check, discrete_perimeter, isoperimetric_ratio, CellSet, CoareaReport,
    IsoperimetricRatio, Perimeter, ANISOTROPY_CORRECTION, TAU_COAREA,
};
pub use descriptor::{rle_decode, rle_encode, DomainDescriptor};
pub use koch::{koch_area, koch_polygon, koch_min_resolution};

const NONE: u32 = u32::MAX;

/// Continuum shape parameters. Lengths are in the same units as `1/resolution`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ShapeSpec {
    Rectangle { width: f64, height: f64 },
    Disk { radius: f64 },
    Annulus { inner: f64, outer: f64 },
    #[serde(rename = "lshape")]
    LShape { arm: f64, thickness: f64 },
    Koch { level: u32 },
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeTag {
    Rectangle,
    Disk,
    Annulus,
    LShape,
    KochPrefractal(u32),
    Custom,
}

impl ShapeSpec {
    pub fn tag(&self) -> ShapeTag {
        match self {
            ShapeSpec::Rectangle { .. } => ShapeTag::Rectangle,
            ShapeSpec::Disk { .. } => ShapeTag::Disk,
            ShapeSpec::Annulus { .. } => ShapeTag::Annulus,
            ShapeSpec::LShape { .. } => ShapeTag::LShape,
            ShapeSpec::Koch { level } => ShapeTag::KochPrefractal(*level),
            ShapeSpec::Custom => ShapeTag::Custom,
        }
    }
}

impl fmt::Display for ShapeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeTag::Rectangle => write!(f, "rectangle"),
            ShapeTag::Disk => write!(f, "disk"),
            ShapeTag::Annulus => write!(f, "annulus"),
            ShapeTag::LShape => write!(f, "lshape"),
            ShapeTag::KochPrefractal(level) => write!(f, "koch({level})"),
            ShapeTag::Custom => write!(f, "custom"),
        }
    }
}

/// Shape plus resolution (cells per unit length); what configs and the CLI
/// pass around.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    #[serde(flatten)]
    pub shape: ShapeSpec,
    pub resolution: f64,
}

impl DomainSpec {
    pub fn build(&self) -> Result<GridDomain> {
        match self.shape {
            ShapeSpec::Rectangle { width, height } => {
                rasterize_rectangle(width, height, self.resolution)
            }
            ShapeSpec::Disk { radius } => rasterize_disk(radius, self.resolution),
            ShapeSpec::Annulus { inner, outer } => {
                rasterize_annulus(inner, outer, self.resolution)
            }
            ShapeSpec::LShape { arm, thickness } => {
                rasterize_lshape(arm, thickness, self.resolution)
            }
            ShapeSpec::Koch { level } => rasterize_koch(level, self.resolution),
            ShapeSpec::Custom => Err(Error::InvalidGeometry(
                "custom domains are built from an explicit mask".into(),
            )),
        }
    }
}

/// Rasterized open set. Immutable after construction.
#[derive(Debug, Clone)]
pub struct GridDomain {
    nx: usize,
    ny: usize,
    h: f64,
    origin: (f64, f64),
    mask: Vec<bool>,
    cells: Vec<usize>,
    index: Vec<u32>,
    shape: ShapeSpec,
    resolution: f64,
    pruned: usize,
    id: u64,
}

/// The four lattice directions in the order used everywhere: -x, +x, -y, +y.
pub const DIRECTIONS: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

impl GridDomain {
    /// Builds a domain from an explicit per-cell mask (row-major, `j * nx + i`).
    /// The mask is taken as given: no connectivity pruning.
    pub fn from_mask(
        nx: usize,
        ny: usize,
        h: f64,
        origin: (f64, f64),
        mask: Vec<bool>,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 || !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "grid {nx}x{ny} with h={h}"
            )));
        }
        if mask.len() != nx * ny {
            return Err(Error::DimensionMismatch {
                expected: nx * ny,
                got: mask.len(),
            });
        }
        Self::assemble(nx, ny, h, origin, mask, ShapeSpec::Custom, 1.0 / h, 0)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        nx: usize,
        ny: usize,
        h: f64,
        origin: (f64, f64),
        mask: Vec<bool>,
        shape: ShapeSpec,
        resolution: f64,
        pruned: usize,
    ) -> Result<Self> {
        let mut index = vec![NONE; nx * ny];
        let mut cells = Vec::new();
        for (c, &inside) in mask.iter().enumerate() {
            if inside {
                index[c] = cells.len() as u32;
                cells.push(c);
            }
        }
        if cells.is_empty() {
            return Err(Error::InvalidGeometry(
                "no cell center lies inside the shape".into(),
            ));
        }
        let mut hasher = DefaultHasher::new();
        (nx, ny, h.to_bits(), origin.0.to_bits(), origin.1.to_bits()).hash(&mut hasher);
        mask.hash(&mut hasher);
        Ok(GridDomain {
            nx,
            ny,
            h,
            origin,
            mask,
            cells,
            index,
            shape,
            resolution,
            pruned,
            id: hasher.finish(),
        })
    }

    /// Keeps the largest 4-connected component of `mask`; used by the built-in
    /// rasterizers so every built-in domain is a single component.
    fn from_shape_mask(
        nx: usize,
        ny: usize,
        h: f64,
        origin: (f64, f64),
        mut mask: Vec<bool>,
        shape: ShapeSpec,
        resolution: f64,
    ) -> Result<Self> {
        let labels = grid_components(nx, ny, &mask);
        let pruned = if labels.count > 1 {
            let keep = labels
                .sizes
                .iter()
                .enumerate()
                .max_by_key(|&(i, &s)| (s, std::cmp::Reverse(i)))
                .map(|(i, _)| i as u32 + 1)
                .unwrap();
            let mut pruned = 0;
            for (c, m) in mask.iter_mut().enumerate() {
                if *m && labels.label[c] != keep {
                    *m = false;
                    pruned += 1;
                }
            }
            pruned
        } else {
            0
        };
        Self::assemble(nx, ny, h, origin, mask, shape, resolution, pruned)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn origin(&self) -> (f64, f64) {
        self.origin
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn shape(&self) -> &ShapeSpec {
        &self.shape
    }

    pub fn shape_tag(&self) -> ShapeTag {
        self.shape.tag()
    }

    /// Cells removed by connectivity pruning at construction.
    pub fn pruned_cells(&self) -> usize {
        self.pruned
    }

    /// Content fingerprint; two domains with equal grids and masks share it.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Number of interior cells M.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_area(&self) -> f64 {
        self.h * self.h
    }

    pub fn area(&self) -> f64 {
        self.cells.len() as f64 * self.cell_area()
    }

    /// Grid position `(i, j)` of interior cell `idx`.
    pub fn grid_position(&self, idx: usize) -> (usize, usize) {
        let c = self.cells[idx];
        (c % self.nx, c / self.nx)
    }

    /// Interior index of grid cell `(i, j)`, if it is inside the domain.
    pub fn interior_at(&self, i: isize, j: isize) -> Option<usize> {
        if i < 0 || j < 0 || i as usize >= self.nx || j as usize >= self.ny {
            return None;
        }
        let v = self.index[j as usize * self.nx + i as usize];
        (v != NONE).then_some(v as usize)
    }

    pub fn center(&self, idx: usize) -> (f64, f64) {
        let (i, j) = self.grid_position(idx);
        (
            self.origin.0 + (i as f64 + 0.5) * self.h,
            self.origin.1 + (j as f64 + 0.5) * self.h,
        )
    }

    /// The four neighbors of interior cell `idx` in [`DIRECTIONS`] order;
    /// `None` marks an exterior neighbor.
    pub fn neighbors(&self, idx: usize) -> [Option<usize>; 4] {
        let (i, j) = self.grid_position(idx);
        let (i, j) = (i as isize, j as isize);
        DIRECTIONS.map(|(di, dj)| self.interior_at(i + di, j + dj))
    }

    /// Number of 4-connected components of the interior cell set.
    pub fn component_count(&self) -> usize {
        grid_components(self.nx, self.ny, &self.mask).count
    }

    pub fn descriptor(&self, with_mask: bool) -> DomainDescriptor {
        DomainDescriptor::of(self, with_mask)
    }
}

struct GridLabels {
    label: Vec<u32>,
    sizes: Vec<usize>,
    count: usize,
}

fn grid_components(nx: usize, ny: usize, mask: &[bool]) -> GridLabels {
    let mut label = vec![0u32; nx * ny];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..nx * ny {
        if !mask[start] || label[start] != 0 {
            continue;
        }
        let id = sizes.len() as u32 + 1;
        label[start] = id;
        queue.push_back(start);
        let mut size = 0;
        while let Some(c) = queue.pop_front() {
            size += 1;
            let (i, j) = ((c % nx) as isize, (c / nx) as isize);
            for (di, dj) in DIRECTIONS {
                let (a, b) = (i + di, j + dj);
                if a < 0 || b < 0 || a as usize >= nx || b as usize >= ny {
                    continue;
                }
                let n = b as usize * nx + a as usize;
                if mask[n] && label[n] == 0 {
                    label[n] = id;
                    queue.push_back(n);
                }
            }
        }
        sizes.push(size);
    }
    GridLabels {
        count: sizes.len(),
        label,
        sizes,
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidGeometry(format!("{name} must be positive, got {v}")))
    }
}

/// Relative tolerance for "strictly inside" tests against lattice nodes.
fn strict_eps(h: f64) -> f64 {
    1e-9 * h
}

/// Grid whose cell centers sit on `i·h` for `i = 0..=ceil(extent/h)` in both
/// axes, i.e. origin `(-h/2, -h/2)`.
fn node_grid<F>(
    width: f64,
    height: f64,
    resolution: f64,
    shape: ShapeSpec,
    inside: F,
) -> Result<GridDomain>
where
    F: Fn(f64, f64) -> bool,
{
    let h = 1.0 / resolution;
    let nx = (width / h - 1e-9).ceil() as usize + 1;
    let ny = (height / h - 1e-9).ceil() as usize + 1;
    let mut mask = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            mask[j * nx + i] = inside(i as f64 * h, j as f64 * h);
        }
    }
    GridDomain::from_shape_mask(nx, ny, h, (-0.5 * h, -0.5 * h), mask, shape, resolution)
}

pub fn rasterize_rectangle(width: f64, height: f64, resolution: f64) -> Result<GridDomain> {
    check_positive("width", width)?;
    check_positive("height", height)?;
    check_positive("resolution", resolution)?;
    let eps = strict_eps(1.0 / resolution);
    node_grid(
        width,
        height,
        resolution,
        ShapeSpec::Rectangle { width, height },
        |x, y| x > eps && x < width - eps && y > eps && y < height - eps,
    )
}

pub fn rasterize_lshape(arm: f64, thickness: f64, resolution: f64) -> Result<GridDomain> {
    check_positive("arm", arm)?;
    check_positive("thickness", thickness)?;
    check_positive("resolution", resolution)?;
    if thickness >= arm {
        return Err(Error::InvalidGeometry(format!(
            "L-shape needs thickness < arm, got thickness={thickness}, arm={arm}"
        )));
    }
    let eps = strict_eps(1.0 / resolution);
    let open = move |x: f64, lo: f64, hi: f64| x > lo + eps && x < hi - eps;
    node_grid(
        arm,
        arm,
        resolution,
        ShapeSpec::LShape { arm, thickness },
        move |x, y| {
            (open(x, 0.0, arm) && open(y, 0.0, thickness))
                || (open(x, 0.0, thickness) && open(y, 0.0, arm))
        },
    )
}

/// Square grid centered on the origin with a lattice node at the center.
fn centered_grid<F>(
    half_extent: f64,
    resolution: f64,
    shape: ShapeSpec,
    inside: F,
) -> Result<GridDomain>
where
    F: Fn(f64, f64) -> bool,
{
    let h = 1.0 / resolution;
    let n = (half_extent / h).ceil() as usize + 1;
    let nx = 2 * n + 1;
    let mut mask = vec![false; nx * nx];
    for j in 0..nx {
        for i in 0..nx {
            let x = (i as f64 - n as f64) * h;
            let y = (j as f64 - n as f64) * h;
            mask[j * nx + i] = inside(x, y);
        }
    }
    let o = -(n as f64 + 0.5) * h;
    GridDomain::from_shape_mask(nx, nx, h, (o, o), mask, shape, resolution)
}

pub fn rasterize_disk(radius: f64, resolution: f64) -> Result<GridDomain> {
    check_positive("radius", radius)?;
    check_positive("resolution", resolution)?;
    let eps = strict_eps(1.0 / resolution);
    centered_grid(radius, resolution, ShapeSpec::Disk { radius }, |x, y| {
        x.hypot(y) < radius - eps
    })
}

pub fn rasterize_annulus(inner: f64, outer: f64, resolution: f64) -> Result<GridDomain> {
    check_positive("inner radius", inner)?;
    check_positive("outer radius", outer)?;
    check_positive("resolution", resolution)?;
    if inner >= outer {
        return Err(Error::InvalidGeometry(format!(
            "annulus needs inner < outer, got {inner} >= {outer}"
        )));
    }
    let eps = strict_eps(1.0 / resolution);
    centered_grid(outer, resolution, ShapeSpec::Annulus { inner, outer }, |x, y| {
        let r = x.hypot(y);
        r > inner + eps && r < outer - eps
    })
}

/// Koch-snowflake prefractal of the given level on an equilateral triangle of
/// unit side.
pub fn rasterize_koch(level: u32, resolution: f64) -> Result<GridDomain> {
    check_positive("resolution", resolution)?;
    if level > 6 {
        return Err(Error::InvalidParameter(format!(
            "Koch level must be in 0..=6, got {level}"
        )));
    }
    let min_resolution = koch_min_resolution(level);
    if resolution <= min_resolution {
        return Err(Error::ResolutionTooCoarse {
            level,
            resolution,
            min_resolution,
        });
    }
    let poly = koch_polygon(level);
    let h = 1.0 / resolution;
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in &poly {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let origin = (x0 - h, y0 - h);
    let nx = ((x1 - x0) / h).ceil() as usize + 3;
    let ny = ((y1 - y0) / h).ceil() as usize + 3;
    let mask = koch::scanline_fill(&poly, nx, ny, h, origin);
    GridDomain::from_shape_mask(nx, ny, h, origin, mask, ShapeSpec::Koch { level }, resolution)
}
