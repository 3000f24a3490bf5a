//! Simulation of Raman ladders whose second step is blocked by unequal
//! light shifts, for a single atom and for a symmetric atomic ensemble.
//!
//! Building blocks, roughly in pipeline order:
//!
//! * [`hamiltonians`]: five-level single-atom ladder, truncated six-level
//!   collective ladder, brute-force N-atom product-space Hamiltonian.
//! * [`reduction`]: adiabatic elimination, light shifts and the blockade
//!   shift, closed-form effective three-level models.
//! * [`dynamics`]: exact propagation under a time-independent Hamiltonian.
//! * [`collective`]: symmetric collective states in the product space and
//!   checks of the truncated model against the full one.
//! * [`analysis`]: leakage, transfer fidelity, fitted Raman frequency and
//!   parallel parameter sweeps.

pub mod analysis;
pub mod collective;
pub mod dynamics;
pub mod error;
pub mod hamiltonians;
pub mod model;
pub mod reduction;

pub use analysis::{blockade_report, BlockadeReport, RegimeFlags, RoleMap, RunSettings, Scenario, ScenarioRun};
pub use dynamics::{propagate, PropagationConfig, PropagationMethod};
pub use error::{Error, Result};
pub use hamiltonians::{CollectiveLabel, FullEnsembleBasis, FullEnsembleHamiltonian, DEFAULT_MAX_ATOMS};
pub use model::{derived_detunings, DriveParams, HamiltonianMatrix, LightShiftSet, QuantumState, Trajectory};
pub use reduction::LadderKind;
