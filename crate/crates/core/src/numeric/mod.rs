//! Deterministic linear-algebra and differentiation kernel: packed symmetric
//! matrices, second-order jets, orthonormal frames, and the 2-plane search.

pub mod frame;
pub mod grassmann;
pub mod symmat;
pub mod taylor2;

pub use frame::{euclidean, gram_schmidt, Frame, FrameSplit, PlaneSpec};
pub use grassmann::{min_over_planes, PlaneMin, SearchBudget};
pub use symmat::SymMat;
pub use taylor2::Taylor2;
