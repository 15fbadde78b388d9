//! Eigenprojection trajectories along a list of regular pencil points.

use num_complex::Complex64;

use crate::chevalley::{eigenprojections, EigenprojectionSet};
use crate::error::{Error, Result};
use crate::numcore::{min_cost_assignment, Tolerances};
use crate::pencil::Pencil;

/// Projection sets along the sampled points with branch-consistent order,
/// plus the per-branch constancy report.
#[derive(Debug, Clone)]
pub struct TrajectoryReport {
    pub zs: Vec<Complex64>,
    /// One projection set per point; pair k refers to the same branch at
    /// every point.
    pub sets: Vec<EigenprojectionSet>,
    /// Max Frobenius deviation `‖Πᵢ(z) − Πᵢ(z′)‖` over point pairs, per branch.
    pub per_branch_deviation: Vec<f64>,
    /// Largest of the per-branch deviations.
    pub max_deviation: f64,
}

/// Computes the eigenprojections of `A + zB` at each point and labels the
/// branches consistently by nearest-projection matching between
/// consecutive points.
///
/// All points must be regular (the same number of distinct eigenvalues);
/// near-exceptional points surface as `IllConditioned` from the
/// projection computation or as a count mismatch.
pub fn eigenprojection_trajectory(
    pencil: &Pencil,
    zs: &[Complex64],
    tol: &Tolerances,
) -> Result<TrajectoryReport> {
    if zs.is_empty() {
        return Err(Error::InvalidInput("need at least one sample point".into()));
    }
    let mut sets: Vec<EigenprojectionSet> = Vec::with_capacity(zs.len());
    for &z in zs {
        sets.push(eigenprojections(&pencil.at(z), tol)?);
    }
    let branches = sets[0].len();
    if sets.iter().any(|s| s.len() != branches) {
        return Err(Error::IllConditioned {
            gap: 0.0, // distinct-count changed between points: not all regular
        });
    }

    // branch-consistent labeling: reorder each set to match the previous
    for t in 1..sets.len() {
        let prev = &sets[t - 1];
        let cur = &sets[t];
        let cost: Vec<Vec<f64>> = prev
            .pairs
            .iter()
            .map(|(_, p)| {
                cur.pairs.iter().map(|(_, q)| (p - q).norm_fro()).collect()
            })
            .collect();
        let perm = min_cost_assignment(&cost);
        let reordered = EigenprojectionSet {
            pairs: perm.iter().map(|&j| sets[t].pairs[j].clone()).collect(),
        };
        sets[t] = reordered;
    }

    let mut per_branch = vec![0.0f64; branches];
    for (i, slot) in per_branch.iter_mut().enumerate() {
        for s in 0..sets.len() {
            for t in s + 1..sets.len() {
                let dev = (&sets[s].pairs[i].1 - &sets[t].pairs[i].1).norm_fro();
                *slot = slot.max(dev);
            }
        }
    }
    let max_deviation = per_branch.iter().copied().fold(0.0, f64::max);
    Ok(TrajectoryReport { zs: zs.to_vec(), sets, per_branch_deviation: per_branch, max_deviation })
}
