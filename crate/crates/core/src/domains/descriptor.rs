use serde::{Deserialize, Serialize};

use super::{DomainSpec, GridDomain, ShapeSpec};
use crate::error::{Error, Result};

/// JSON-serializable summary of a [`GridDomain`]. With `mask_rle` present the
/// exact grid can be rebuilt without re-rasterizing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDescriptor {
    pub shape_tag: String,
    pub parameters: ShapeSpec,
    pub resolution: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub origin: [f64; 2],
    pub cells: usize,
    pub area: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask_rle: Option<Vec<u32>>,
}

impl DomainDescriptor {
    pub(super) fn of(d: &GridDomain, with_mask: bool) -> Self {
        DomainDescriptor {
            shape_tag: d.shape_tag().to_string(),
            parameters: d.shape().clone(),
            resolution: d.resolution(),
            h: d.h(),
            nx: d.nx(),
            ny: d.ny(),
            origin: [d.origin().0, d.origin().1],
            cells: d.len(),
            area: d.area(),
            mask_rle: with_mask.then(|| rle_encode(d.mask())),
        }
    }

    /// Rebuilds the domain: from the stored mask when present, otherwise by
    /// re-rasterizing the shape.
    pub fn to_domain(&self) -> Result<GridDomain> {
        match &self.mask_rle {
            Some(runs) => {
                let mask = rle_decode(runs, self.nx * self.ny)?;
                let mut d = GridDomain::from_mask(
                    self.nx,
                    self.ny,
                    self.h,
                    (self.origin[0], self.origin[1]),
                    mask,
                )?;
                d.shape = self.parameters.clone();
                d.resolution = self.resolution;
                Ok(d)
            }
            None => DomainSpec {
                shape: self.parameters.clone(),
                resolution: self.resolution,
            }
            .build(),
        }
    }
}

/// Run lengths alternating false/true, starting with a (possibly empty) false run.
pub fn rle_encode(mask: &[bool]) -> Vec<u32> {
    let mut runs = Vec::new();
    let mut current = false;
    let mut len = 0u32;
    for &m in mask {
        if m == current {
            len += 1;
        } else {
            runs.push(len);
            current = m;
            len = 1;
        }
    }
    runs.push(len);
    runs
}

pub fn rle_decode(runs: &[u32], expected_len: usize) -> Result<Vec<bool>> {
    let mut mask = Vec::with_capacity(expected_len);
    let mut value = false;
    for &r in runs {
        mask.extend(std::iter::repeat(value).take(r as usize));
        value = !value;
    }
    if mask.len() != expected_len {
        return Err(Error::DimensionMismatch {
            expected: expected_len,
            got: mask.len(),
        });
    }
    Ok(mask)
}
