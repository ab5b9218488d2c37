//! Scans correlated initial-state assignments for the demo Hamiltonian and
//! prints, for each candidate, the joint-state margin at the maximally mixed
//! system state and the most negative Choi eigenvalue of the induced map on
//! the demo time grid.
//!
//! Run with `cargo run --release --example demo_search`.

use dynamap::demo::{DEMO_GRID, DEMO_HAMILTONIAN};
use dynamap::{
    assignment_is_physical, full_linear_map, is_completely_positive, time_grid, DensityMatrix,
    InitialAssignment, JointScenario, Tolerances,
};

fn main() -> dynamap::Result<()> {
    let tol = Tolerances::default();
    let scn = JointScenario::new("search", 2, 2, DEMO_HAMILTONIAN.matrix(), &tol)?;
    let times = time_grid(DEMO_GRID.start, DEMO_GRID.stop, DEMO_GRID.steps)?;
    let mixed = DensityMatrix::maximally_mixed(2);

    let mut rows = Vec::new();
    for &bz in &[0.0, 0.2, 0.4] {
        for &strength in &[0.2, 0.4, 0.6, 0.8] {
            for pattern in ["xx", "xy", "iso"] {
                let mut a = InitialAssignment::product(2, 2);
                a.env_means[2] = bz;
                match pattern {
                    "xx" => a.correlations[0][0] = strength,
                    "xy" => a.correlations[0][1] = strength,
                    _ => (0..3).for_each(|k| a.correlations[k][k] = -strength),
                }
                let margin = assignment_is_physical(&a, &scn, &mixed, &tol)?.min_eigenvalue;
                let mut worst = (f64::INFINITY, 0.0);
                for &t in &times {
                    let v = is_completely_positive(&full_linear_map(&scn, &a, t)?, &tol)?;
                    if v.min_eigenvalue < worst.0 {
                        worst = (v.min_eigenvalue, t);
                    }
                }
                rows.push((pattern, strength, bz, margin, worst.0, worst.1));
            }
        }
    }

    println!("pattern strength b_z  joint_min_eig  min_choi   at_t");
    for (pattern, s, bz, margin, min_choi, t) in rows {
        println!("{pattern:>7} {s:8.2} {bz:4.1} {margin:14.6} {min_choi:10.6} {t:6.2}");
    }
    Ok(())
}
