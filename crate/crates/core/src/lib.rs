//! Desk-scale reconstruction of Ricci-flat Kähler geometry on Kummer-type
//! K3 surfaces: exact orbifold/cohomology bookkeeping on one side, and a
//! radially reduced Eguchi-Hanson gluing with a Monge-Ampère solver on the
//! other.
//!
//! The crate splits into an exact half and a numeric half.
//!
//! * [`exact`] — cyclotomic field arithmetic, rational linear algebra and
//!   Smith normal form.
//! * [`orbifold`] — enumeration of the singular set of `T^4/Γ` with
//!   stabilizers, invariant anti-self-dual dimension and the `19` count.
//! * [`ledger`] — the exact rational intersection ledger for `H^2(X)`:
//!   cup products, Gram matrices and the class family of the solved metric.
//! * [`hodge`] — pointwise 2-form algebra on `R^4`: Hodge star, wedge,
//!   type (1,1) projection and constant-form pullbacks.
//! * [`radial`], [`ale`] — log-grid radial profiles and the Eguchi-Hanson
//!   model (potential, moment maps, anti-self-dual generator).
//! * [`gluing`] — cutoff gluing of the flat and ALE potentials, weight
//!   functions, weighted norms and decay sweeps.
//! * [`monge_ampere`] — the linearized solver and Picard iteration for the
//!   radial Monge-Ampère model problem.
//! * [`glued_forms`] — the glued closed 2-form families, their decay tables,
//!   harmonic correction and bubbling diagnostics.
//! * [`config`], [`report`] — run configuration and CSV/report emission for
//!   the CLI.
//!
//! With the default `parallel` feature the sweep drivers fan out over
//! `rayon`; disabling it falls back to sequential iteration with identical
//! results.

pub mod ale;
pub mod config;
pub mod exact;
pub mod glued_forms;
pub mod gluing;
pub mod hodge;
pub mod ledger;
pub mod monge_ampere;
pub mod orbifold;
pub mod par;
pub mod radial;
pub mod report;

pub use exact::{Cyclotomic, ExactError, Matrix, Rational};
