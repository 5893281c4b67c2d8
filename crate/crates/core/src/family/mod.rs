//! The monotone quadratic family over `[0, 1]²`: parameter coordinates,
//! fiber bisection, archipelago scans, island tracing, hyperbolicity sampling
//! and kneading realization.

pub mod fiber;
pub mod hyperbolic;
pub mod island;
pub mod param;
pub mod realize;
pub mod scan;

pub use fiber::{fiber_bisect, FiberSearch};
pub use hyperbolic::{classify_hyperbolic, hyperbolic_density, DensityReport, HyperbolicEvidence};
pub use island::{
    classify_boundary_point, trace_island_boundary, BoundaryClass, BoundarySide, ExtremalKind, IslandBoundary,
    TraceOptions,
};
pub use param::{cone_relation, family_map, fiber_range, ConeRelation, ParamPoint};
pub use realize::{realize_kneading, PruningCertificate, Realization};
pub use scan::{scan_archipelago, scan_archipelago_with, CellStatus, ScanCell, ScanGrid};
