//! Loop groups on embedded graphs and the inductive loop transform.
//!
//! The crate builds up, layer by layer, the pieces needed to move between
//! three pictures of an abelian gauge theory on a graph:
//!
//! * **words** — based loops and paths up to retracing ([`graph`], [`word`],
//!   [`basis`]), with holonomy and Wilson observables under `U(1)` and
//!   `SU(2)` connections ([`holonomy`]);
//! * **harmonics** — trigonometric polynomials on tori with exact Haar
//!   integration and Fourier analysis ([`harmonics`]), organized into nested
//!   integer-lattice levels ([`levels`]);
//! * **states** — the unitary loop transform between cylinder functions and
//!   finitely supported functions on the hoop lattice ([`transform`]), and
//!   the positivity correspondence for measures ([`positivity`]).
//!
//! [`json`] pins the wire format used by the CLI, [`sample`] provides seeded
//! random generators for all of the above, and [`verify`] bundles the
//! end-to-end randomized checks the acceptance suite and the CLI `selftest`
//! both run.

pub mod basis;
pub mod error;
pub mod graph;
pub mod harmonics;
pub mod holonomy;
pub mod json;
pub mod levels;
pub mod positivity;
pub mod sample;
pub mod transform;
pub mod verify;
pub mod word;

pub use basis::{path_abelianize, spanning_tree_generators, GeneratorBasis, GeneratorWord};
pub use error::{Error, Result};
pub use graph::{Edge, Graph};
pub use harmonics::{fft_oracle, CoeffFunction, TrigPoly};
pub use holonomy::{holonomy, interpolate, wilson, Connection, GroupElement, GroupKind};
pub use levels::{
    hnf_solve, is_independent, join_levels, refinement_matrix, Level, RefinementMatrix,
};
pub use positivity::{
    density_from_functional, functional_from_density, grid_positivity_test, l2_continuity_check,
    psd_test, CharacterFunctional, MeasureDensity,
};
pub use transform::{
    cylinder_inner_product, include_coeffs, include_function, inverse_transform,
    loop_transform, path_transform, verify_diagram, CylinderFunction, LoopState,
};
pub use word::{reduce_steps, Orientation, Step, Word, WordKind};
