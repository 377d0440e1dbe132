// NaN-rejecting comparisons such as `!(x > 0.0)` are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::large_enum_variant)]
// Index loops read better than iterator chains in the small matrix kernels.
#![allow(clippy::needless_range_loop)]

pub mod constructions;
pub mod delaunay;
pub mod isodelaunay;
pub mod numeric;
pub mod periods;
pub mod surface;
pub mod symmetry;
