//! Scar wave packets for the circular billiard.
//!
//! The crate computes the exact spectrum of the hard-wall disk (zeros of the
//! integer-order Bessel functions), finds approximately degenerate shells of
//! modes attached to closed `(p, q)` orbits, superposes shell members into
//! angularly localized packets and measures how long such packets survive
//! compared to the classical period.
//!
//! Module map:
//!
//! * [`special_functions`]: `J_l(x)`, `J_l'(x)` and their positive zeros.
//! * [`spectrum`]: eigenmodes, the semiclassical residual, shell search.
//! * [`scar`]: packet construction, amplitudes, ridge densities, lifetimes.
//! * [`evolution`]: survival probability and the numerical lifetime.
//! * [`orbits`]: closed polygon/star orbits and tube diagnostics.
//! * [`grid`]: density grids, CSV and PGM output.
//! * [`report`] and [`cli`]: JSON documents and the `scars` command line.

pub mod cli;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod orbits;
pub mod report;
pub mod scar;
pub mod special_functions;
pub mod spectrum;

pub use error::{Error, Result};
pub use evolution::{
    lifetime_consistency, survival, survival_curve, ConsistencyReport, SurvivalCurve,
};
pub use grid::{eval_grid, DensityGrid, GridMeta, GridSource};
pub use orbits::{caustic_radius_of, orbit_vertices, tube_fraction, OrbitPath};
pub use scar::{build_packet, lifetime_report, AsymptoticDensity, LifetimeReport, ScarPacket};
pub use special_functions::{bessel_j, bessel_j_prime, bessel_zero, bessel_zeros_upto, BesselEval};
pub use spectrum::{
    enumerate_modes, find_shell, mean_level_density, semiclassical_residual, shell_spread,
    BilliardConfig, EigenMode, Shell, ShellSearch,
};
