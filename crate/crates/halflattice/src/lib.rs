//! Chiral differential operators on a torus as a half-lattice vertex
//! algebra: truncated Fock sums, Heisenberg and vertex modes, `A(α)`,
//! spectral-flow relabelling, the descent algorithm and module
//! classification.
//!
//! ```
//! use cdo_halflattice::{classify_module, TorusModuleSpec};
//! use cdo_core::Q;
//!
//! let kappa = vec![vec![Q::new(3.into(), 2.into())]];
//! let spec = TorusModuleSpec::cdo_sum(kappa, &[vec![1], vec![-2]], 2, 3).unwrap();
//! assert_eq!(classify_module(&spec).unwrap(), vec![vec![-2], vec![1]]);
//! ```

pub mod descent;
pub mod engine;
pub mod relations;
pub mod spec;
pub mod state;

pub use descent::{d_of, descent_weight_vector, DescentResult};
pub use engine::{Engine, L0Side, Operator, Side};
pub use spec::{classify_module, sf_twist_state, SectorSpec, TorusModuleSpec};
pub use state::{Basis, Mono, Sector, State};
