//! Scaled relative graphs (SRGs) of nonlinear and LTI operators as regions of
//! the complex plane, the interconnection algebra on those regions, and
//! incremental L2 stability certificates for feedback loops.

pub mod error;
pub mod feedback;
pub mod geom;
pub mod sim;
pub mod srg;
pub mod transferfn;

pub use error::{Result, SrgError};
pub use geom::{Primitive, Region};
pub use transferfn::{parse_tf, FreqGrid, TransferFunction};
pub use num_complex::Complex64;
