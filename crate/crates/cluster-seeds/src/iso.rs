//! Quiver isomorphism by backtracking with multiplier/frozen/weight/degree
//! pruning.  Seeds in this library have at most a few dozen vertices.

use crate::root_data::WeightTuple;
use crate::seed::Seed;

/// What an isomorphism has to preserve.
#[derive(Clone, Debug, Default)]
pub struct IsoOptions {
    /// Compare `b` of the first seed with `-b` of the second.
    pub reverse_arrows: bool,
    /// Require equal weight tuples (after `point_perm`).
    pub match_weights: bool,
    /// Require equal frozen status.
    pub match_frozen: bool,
    /// Slot `p` of the first seed's weights corresponds to slot `point_perm[p]`
    /// of the second seed's weights.  Identity when absent.
    pub point_perm: Option<Vec<usize>>,
}

impl IsoOptions {
    /// Everything matched, arrows as they are, identity on marked points.
    pub fn strict() -> Self {
        IsoOptions {
            reverse_arrows: false,
            match_weights: true,
            match_frozen: true,
            point_perm: None,
        }
    }

    pub fn reversed(mut self, reverse: bool) -> Self {
        self.reverse_arrows = reverse;
        self
    }

    pub fn with_points(mut self, perm: Vec<usize>) -> Self {
        self.point_perm = Some(perm);
        self
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    frozen: Option<bool>,
    d: i64,
    weights: Option<WeightTuple>,
    row: Vec<i64>,
}

fn signatures(seed: &Seed, opts: &IsoOptions, first: bool) -> Vec<Signature> {
    let sign = if first && opts.reverse_arrows { -1 } else { 1 };
    (0..seed.len())
        .map(|i| {
            let mut row: Vec<i64> = seed.b2()[i].iter().filter(|&&b| b != 0).map(|&b| sign * b).collect();
            row.sort_unstable();
            let weights = if opts.match_weights {
                seed.weights(i).map(|w| match (&opts.point_perm, first) {
                    (Some(p), true) => w.permuted(p),
                    _ => w.clone(),
                })
            } else {
                None
            };
            Signature {
                frozen: opts.match_frozen.then(|| seed.is_frozen(i)),
                d: seed.vertex(i).d,
                weights,
                row,
            }
        })
        .collect()
}

/// Finds a vertex bijection `map` (first-seed index -> second-seed index)
/// preserving the requested data, or `None`.  The returned bijection is the
/// lexicographically least one in vertex order.
pub fn quiver_isomorphic(s1: &Seed, s2: &Seed, opts: &IsoOptions) -> Option<Vec<usize>> {
    let n = s1.len();
    if s2.len() != n {
        return None;
    }
    let sig1 = signatures(s1, opts, true);
    let sig2 = signatures(s2, opts, false);
    let mut a = sig1.clone();
    let mut b = sig2.clone();
    a.sort();
    b.sort();
    if a != b {
        return None;
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| sig1[i] == sig2[j]).collect())
        .collect();
    // Vertices are assigned in their natural order and candidates tried in
    // increasing order, so the first complete assignment is the least one.
    let sign = if opts.reverse_arrows { -1 } else { 1 };
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        s1: &Seed,
        s2: &Seed,
        sign: i64,
        candidates: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == map.len() {
            return true;
        }
        for &j in &candidates[i] {
            if used[j] {
                continue;
            }
            let consistent = (0..i).all(|p| {
                sign * s1.b2()[i][p] == s2.b2()[j][map[p]] && sign * s1.b2()[p][i] == s2.b2()[map[p]][j]
            }) && sign * s1.b2()[i][i] == s2.b2()[j][j];
            if !consistent {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if go(i + 1, s1, s2, sign, candidates, map, used) {
                return true;
            }
            used[j] = false;
            map[i] = usize::MAX;
        }
        false
    }
    go(0, s1, s2, sign, &candidates, &mut map, &mut used).then_some(map)
}

/// All permutations of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Searches marked-point permutations (lexicographic order) for one under
/// which the seeds are isomorphic; returns the permutation and the mapping.
pub fn find_point_permutation(
    s1: &Seed,
    s2: &Seed,
    reverse_arrows: bool,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let m = s1.points()?;
    permutations(m).into_iter().find_map(|perm| {
        let opts = IsoOptions::strict().reversed(reverse_arrows).with_points(perm.clone());
        quiver_isomorphic(s1, s2, &opts).map(|map| (perm, map))
    })
}
