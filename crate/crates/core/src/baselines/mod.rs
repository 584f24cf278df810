//! Reference propagators: first-order Trotter circuits and fixed-ansatz
//! variational dynamics with the Hamiltonian variational ansatz.

mod hva;
mod trotter;

pub use hva::{build_hva, vqds_fixed_run, HvaSpec};
pub use trotter::{trotter_records, trotter_run, TrotterStep};
