//! Five-point Dirichlet and Neumann Laplacians on a [`GridDomain`].
//!
//! Both operators share the off-diagonal pattern `-1/h²` between 4-adjacent
//! interior cells. They differ on the diagonal: Dirichlet keeps `4/h²`
//! (exterior neighbors act as zeros), Neumann uses the interior degree
//! `deg/h²` (the graph Laplacian, no flux through the boundary).

use crate::domains::GridDomain;
use crate::error::{Error, Result};
use crate::sparse::{BoundaryCondition, SparseSymOperator};

pub fn assemble_dirichlet(d: &GridDomain) -> Result<SparseSymOperator> {
    assemble(d, BoundaryCondition::Dirichlet)
}

pub fn assemble_neumann(d: &GridDomain) -> Result<SparseSymOperator> {
    assemble(d, BoundaryCondition::Neumann)
}

pub fn assemble(d: &GridDomain, bc: BoundaryCondition) -> Result<SparseSymOperator> {
    if d.is_empty() {
        return Err(Error::EmptySet);
    }
    let s = 1.0 / (d.h() * d.h());
    let rows = (0..d.len())
        .map(|c| {
            let mut row = Vec::with_capacity(5);
            let mut degree = 0usize;
            for n in d.neighbors(c).into_iter().flatten() {
                row.push((n, -s));
                degree += 1;
            }
            let diag = match bc {
                BoundaryCondition::Dirichlet => 4.0 * s,
                BoundaryCondition::Neumann => degree as f64 * s,
            };
            row.push((c, diag));
            row
        })
        .collect();
    Ok(SparseSymOperator::from_rows(rows, d.h())?.with_bc(bc))
}
