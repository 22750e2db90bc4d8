//! Elliptic domain and boundary-fitted polar grid.

mod domain;
mod grid;
mod stencil;

pub use domain::{build_domain, ArcSide, DomainSpec, OuterArc};
pub use grid::{generate_grid, AngularMap, Grid, NodeMetric, NodeTag, RadialMap, REFERENCE_CELLS};
pub use stencil::{build_stencils, corner_laplacian, node_stencil, NodeStencil, SideMode, StencilEntry};
