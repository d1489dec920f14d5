//! Shared fixtures for the criterion benches.

use dlshor_core::numtheory::make_instance;
use dlshor_core::DlpInstance;

/// Fixed instances of increasing size, seeded so every bench run sees the same circuits.
pub fn instances() -> Vec<DlpInstance> {
    [(7, 3), (23, 11), (47, 23), (127, 7)]
        .into_iter()
        .map(|(p, q)| make_instance(p, q, 2024).expect("valid pair"))
        .collect()
}
