//! Eigenvalue multisets, clustering, and multiset matching.

use num_complex::Complex64;

use crate::error::Result;
use crate::numcore::assign::{assignment_cost, min_cost_assignment};
use crate::numcore::{charpoly, roots_seeded, CMatrix, Tolerances};

/// The multiset of eigenvalues of a matrix, with algebraic multiplicity.
///
/// Values are stored canonically sorted by `(re, im)` so equal multisets
/// compare equal structurally; the semantics are order-free.
///
/// When the values come from the root finder they carry `poly_noise`, the
/// absolute evaluation-noise floor of the source polynomial at the roots.
/// Clustering uses it to merge candidate m-fold roots whose computed
/// values spread like the m-th root of that noise — far wider than the
/// bare identity threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMultiset {
    values: Vec<Complex64>,
    poly_noise: f64,
}

/// One group of eigenvalues identified to a single spectral point.
#[derive(Debug, Clone)]
pub struct Cluster {
    /// Mean of the member values, the representative eigenvalue.
    pub center: Complex64,
    /// Indices into the canonical value list.
    pub members: Vec<usize>,
}

impl Cluster {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }

    /// Largest member distance from the center, given the member values.
    pub fn radius(&self, spectrum: &SpectrumMultiset) -> f64 {
        self.members
            .iter()
            .map(|&i| (spectrum.values()[i] - self.center).norm())
            .fold(0.0, f64::max)
    }
}

impl SpectrumMultiset {
    pub fn new(values: Vec<Complex64>) -> SpectrumMultiset {
        Self::with_poly_noise(values, 0.0)
    }

    pub fn with_poly_noise(mut values: Vec<Complex64>, poly_noise: f64) -> SpectrumMultiset {
        values.sort_by(|a, b| {
            a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
        });
        SpectrumMultiset { values, poly_noise }
    }

    pub fn poly_noise(&self) -> f64 {
        self.poly_noise
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn product(&self) -> Complex64 {
        self.values.iter().product()
    }

    /// Scales every value, preserving multiset semantics. The noise floor
    /// scales with the coefficient rescaling, conservatively `|c|^n`.
    pub fn scaled(&self, c: Complex64) -> SpectrumMultiset {
        SpectrumMultiset::with_poly_noise(
            self.values.iter().map(|&z| z * c).collect(),
            self.poly_noise * c.norm().powi(self.values.len() as i32),
        )
    }

    /// Eigenvalue clusters at threshold `eps_cluster · (1 + max|λ|)`.
    ///
    /// Starts from single-linkage at the identity threshold, then — when a
    /// noise floor is available — agglomerates cluster pairs whose gap is
    /// within the m-fold root uncertainty `(noise / Π_{others}|z−zⱼ|)^{1/m}`.
    pub fn clusters(&self, tol: &Tolerances) -> Vec<Cluster> {
        self.clusters_with_tol(tol.cluster_tol(self.max_abs()))
    }

    /// Clusters at an explicit absolute identity threshold.
    pub fn clusters_with_tol(&self, threshold: f64) -> Vec<Cluster> {
        let n = self.values.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for i in 0..n {
            for j in i + 1..n {
                if (self.values[i] - self.values[j]).norm() <= threshold {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_of: Vec<Option<usize>> = vec![None; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            match root_of[r] {
                Some(g) => groups[g].push(i),
                None => {
                    root_of[r] = Some(groups.len());
                    groups.push(vec![i]);
                }
            }
        }
        if self.poly_noise > 0.0 {
            self.agglomerate_by_noise(&mut groups, threshold);
        }
        let mut clusters: Vec<Cluster> = groups
            .into_iter()
            .map(|members| {
                let center = members.iter().map(|&i| self.values[i]).sum::<Complex64>()
                    / members.len() as f64;
                Cluster { center, members }
            })
            .collect();
        clusters.sort_by(|a, b| {
            a.center
                .re
                .partial_cmp(&b.center.re)
                .unwrap()
                .then(a.center.im.partial_cmp(&b.center.im).unwrap())
        });
        clusters
    }

    /// Merges candidate multiple roots: two groups are joined when their
    /// gap is within the perturbation radius an exact (m₁+m₂)-fold root
    /// would show at this noise floor. The radius is capped so it never
    /// bridges genuinely separated spectra.
    fn agglomerate_by_noise(&self, groups: &mut Vec<Vec<usize>>, threshold: f64) {
        let cap = threshold.max(1e-3 * (1.0 + self.max_abs()));
        loop {
            let mut best: Option<(usize, usize, f64)> = None;
            for i in 0..groups.len() {
                for j in i + 1..groups.len() {
                    let ci = self.group_center(&groups[i]);
                    let cj = self.group_center(&groups[j]);
                    let gap = (ci - cj).norm();
                    let m = groups[i].len() + groups[j].len();
                    let mid = (ci + cj) / 2.0;
                    let mut outside = 1.0f64;
                    for (g, group) in groups.iter().enumerate() {
                        if g != i && g != j {
                            for &k in group {
                                outside *= (mid - self.values[k]).norm().max(1e-300);
                            }
                        }
                    }
                    let radius = (self.poly_noise / outside).powf(1.0 / m as f64);
                    let merge_tol = threshold.max((4.0 * radius).min(cap));
                    if gap <= merge_tol && best.is_none_or(|(_, _, g)| gap < g) {
                        best = Some((i, j, gap));
                    }
                }
            }
            let Some((i, j, _)) = best else { break };
            let moved = groups.remove(j);
            groups[i].extend(moved);
        }
    }

    fn group_center(&self, group: &[usize]) -> Complex64 {
        group.iter().map(|&i| self.values[i]).sum::<Complex64>() / group.len() as f64
    }

    /// Number of distinct eigenvalues at clustering tolerance.
    pub fn distinct_count(&self, tol: &Tolerances) -> usize {
        self.clusters(tol).len()
    }

    /// Smallest distance between two cluster centers (∞ for one cluster).
    pub fn min_cluster_gap(&self, tol: &Tolerances) -> f64 {
        let cl = self.clusters(tol);
        let mut gap = f64::INFINITY;
        for i in 0..cl.len() {
            for j in i + 1..cl.len() {
                gap = gap.min((cl[i].center - cl[j].center).norm());
            }
        }
        gap
    }
}

/// `OSp(M)`: the eigenvalue multiset of `M`, from the characteristic
/// polynomial and simultaneous root iteration.
pub fn spectrum(m: &CMatrix, tol: &Tolerances) -> Result<SpectrumMultiset> {
    spectrum_seeded(m, tol, 0)
}

/// `spectrum` with an explicit seed for the root finder's initial phases.
pub fn spectrum_seeded(m: &CMatrix, tol: &Tolerances, seed: u64) -> Result<SpectrumMultiset> {
    let mut last = None;
    for attempt in 0..4u64 {
        match roots_seeded(&charpoly(m), tol, seed.wrapping_add(attempt)) {
            Ok(r) => return Ok(r),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

/// The N solutions of `ζ^N = z` (all zero when `z = 0`).
pub fn nth_roots(z: Complex64, n: u32) -> Vec<Complex64> {
    assert!(n >= 1, "need a positive root order");
    if z.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); n as usize];
    }
    let r = z.norm().powf(1.0 / n as f64);
    let base = z.arg() / n as f64;
    (0..n)
        .map(|k| {
            let th = base + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            Complex64::new(r * th.cos(), r * th.sin())
        })
        .collect()
}

/// Matches two equal-length multisets within `eps_cluster·(1+max|·|)`.
///
/// Returns the permutation σ with `|S_k − T_σ(k)|` below tolerance for all
/// k (found by minimum-cost assignment), or `None` when no such pairing
/// exists.
pub fn multiset_match(
    s: &SpectrumMultiset,
    t: &SpectrumMultiset,
    tol: &Tolerances,
) -> Option<Vec<usize>> {
    if s.len() != t.len() {
        return None;
    }
    let n = s.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let threshold = tol.cluster_tol(s.max_abs().max(t.max_abs()));
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| (s.values[i] - t.values[j]).norm()).collect())
        .collect();
    let perm = min_cost_assignment(&cost);
    let worst = perm
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .fold(0.0, f64::max);
    if worst <= threshold {
        Some(perm)
    } else {
        None
    }
}

/// Total assignment cost of the best pairing, exposed for ambiguity tests.
pub fn match_cost(s: &SpectrumMultiset, t: &SpectrumMultiset) -> f64 {
    let n = s.len();
    assert_eq!(n, t.len());
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| (s.values[i] - t.values[j]).norm()).collect())
        .collect();
    let perm = min_cost_assignment(&cost);
    assignment_cost(&cost, &perm)
}
