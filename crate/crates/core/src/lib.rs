//! Dirichlet and Neumann Laplacian eigenpairs on rasterized planar domains,
//! nodal-domain counting, and numerical checks of the spectral inequalities
//! that bound nodal counts (Courant, Pleijel, Weyl, Faber–Krahn, Pólya–Szegő,
//! isoperimetric and coarea).

pub mod domains;
pub mod error;
pub mod experiment;
pub mod laplacian;
pub mod nodal;
pub mod oracle;
pub mod rearrange;
pub mod sparse;

pub use domains::{CellSet, DomainSpec, GridDomain, ShapeSpec, ShapeTag};
pub use error::{Error, Result};
pub use laplacian::{assemble_dirichlet, assemble_neumann};
pub use sparse::{smallest_eigenpairs, BoundaryCondition, SolverOptions, SparseSymOperator, Spectrum};
