//! Minimum-cost bipartite assignment (Jonker–Volgenant style Hungarian).

/// Returns `perm` minimizing `Σ cost[i][perm[i]]` for a square cost matrix.
///
/// Classic O(n³) shortest augmenting path formulation with potentials.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    assert!(cost.iter().all(|row| row.len() == n), "cost matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    const INF: f64 = f64::INFINITY;
    // 1-based internal arrays, the usual formulation.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1]; // p[j]: row matched to column j (0 = none)
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            perm[p[j] - 1] = j - 1;
        }
    }
    perm
}

/// Total cost of an assignment.
pub fn assignment_cost(cost: &[Vec<f64>], perm: &[usize]) -> f64 {
    perm.iter().enumerate().map(|(i, &j)| cost[i][j]).sum()
}

/// A permutation together with its total cost.
pub type ScoredAssignment = (Vec<usize>, f64);

/// Best and second-best assignment costs with their permutations, by
/// exhaustive enumeration. Only sensible for small n (the eigenvalue
/// counts handled here); callers fall back to the best-only solver above
/// when n is larger.
pub fn best_two_assignments(
    cost: &[Vec<f64>],
) -> (Vec<usize>, f64, Option<ScoredAssignment>) {
    let n = cost.len();
    assert!(n <= 8, "exhaustive enumeration limited to n <= 8");
    let mut best: Option<ScoredAssignment> = None;
    let mut second: Option<ScoredAssignment> = None;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let c = assignment_cost(cost, &perm);
        match &best {
            None => best = Some((perm.clone(), c)),
            Some((_, bc)) if c < *bc => {
                second = best.take();
                best = Some((perm.clone(), c));
            }
            Some(_) => match &second {
                None => second = Some((perm.clone(), c)),
                Some((_, sc)) if c < *sc => second = Some((perm.clone(), c)),
                _ => {}
            },
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let (bp, bc) = best.unwrap();
    (bp, bc, second)
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_known_instance() {
        let cost = vec![
            vec![4.0, 1.0, 3.0],
            vec![2.0, 0.0, 5.0],
            vec![3.0, 2.0, 2.0],
        ];
        let perm = min_cost_assignment(&cost);
        // optimal: 0→1 (1), 1→0 (2), 2→2 (2) = 5
        assert_eq!(assignment_cost(&cost, &perm), 5.0);
    }

    #[test]
    fn agrees_with_enumeration_on_random_instances() {
        let mut state = 0x12345u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64) / (u32::MAX as f64)
        };
        for _ in 0..50 {
            let n = 2 + (next() * 4.0) as usize;
            let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
            let p = min_cost_assignment(&cost);
            let (bp, bc, _) = best_two_assignments(&cost);
            let got = assignment_cost(&cost, &p);
            assert!((got - bc).abs() < 1e-12, "hungarian {got} vs brute {bc} ({p:?} vs {bp:?})");
        }
    }
}
