//! Backtracking search for a weight-preserving permutation exchanging two vertices.

use num_traits::Zero;

use crate::network::{Network, VertexPair};
use crate::rational::Rational;

/// Per-vertex invariant: on-site value and the sorted multiset of incident coupling weights.
type Invariant = (Rational, Vec<Rational>);

fn invariants(net: &Network) -> Vec<Invariant> {
    (1..=net.n())
        .map(|i| {
            let mut weights: Vec<Rational> = net.neighbors(i).into_iter().map(|(_, w)| w.clone()).collect();
            weights.sort();
            (net.onsite(i).clone(), weights)
        })
        .collect()
}

/// True iff some permutation of the vertices maps `u <-> v` and preserves every on-site value
/// and every coupling exactly.
pub fn has_swap_automorphism(net: &Network, pair: VertexPair) -> bool {
    if pair.check(net).is_err() {
        return false;
    }
    let n = net.n();
    let (u, v) = (pair.u - 1, pair.v - 1);
    let h = net.matrix();
    let inv = invariants(net);
    if inv[u] != inv[v] {
        return false;
    }

    // breadth-first order from u keeps each new vertex adjacent to already-placed ones
    let mut order = vec![u, v];
    let mut placed = vec![false; n];
    placed[u] = true;
    placed[v] = true;
    let mut head = 0;
    while order.len() < n {
        if head < order.len() {
            let x = order[head];
            head += 1;
            for (y, w) in h[x].iter().enumerate() {
                if !placed[y] && !w.is_zero() {
                    placed[y] = true;
                    order.push(y);
                }
            }
        } else if let Some(y) = placed.iter().position(|p| !p) {
            placed[y] = true;
            order.push(y);
        }
    }

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    image[u] = v;
    image[v] = u;
    used[u] = true;
    used[v] = true;
    extend(&h, &inv, &order, 2, &mut image, &mut used)
}

fn extend(
    h: &[Vec<Rational>],
    inv: &[Invariant],
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for cand in 0..h.len() {
        if used[cand] || inv[cand] != inv[x] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&y| h[x][y] == h[cand][image[y]]);
        if !consistent {
            continue;
        }
        image[x] = cand;
        used[cand] = true;
        if extend(h, inv, order, depth + 1, image, used) {
            return true;
        }
        used[cand] = false;
        image[x] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pair(u: usize, v: usize) -> VertexPair {
        VertexPair::new(u, v).unwrap()
    }

    #[test]
    fn chains_are_mirror_symmetric() {
        let two = Network::uniform(2, &[(1, 2)], &int(1)).unwrap();
        assert!(has_swap_automorphism(&two, pair(1, 2)));
        let three = Network::uniform(3, &[(1, 2), (2, 3)], &int(1)).unwrap();
        assert!(has_swap_automorphism(&three, pair(1, 3)));
        assert!(!has_swap_automorphism(&three, pair(1, 2)));
    }

    #[test]
    fn potentials_break_symmetry() {
        let mut three = Network::uniform(3, &[(1, 2), (2, 3)], &int(1)).unwrap();
        three.set_onsite(1, int(1)).unwrap();
        assert!(!has_swap_automorphism(&three, pair(1, 3)));
    }

    #[test]
    fn swap_needs_other_vertices_to_move() {
        // 4-cycle 1-2-3-4: swapping 1 and 3 fixes 2 and 4; swapping 1 and 2 needs 3 <-> 4
        let cycle = Network::uniform(4, &[(1, 2), (2, 3), (3, 4), (4, 1)], &int(1)).unwrap();
        assert!(has_swap_automorphism(&cycle, pair(1, 3)));
        assert!(has_swap_automorphism(&cycle, pair(1, 2)));
    }

    #[test]
    fn disconnected_components() {
        let net = Network::uniform(4, &[(1, 2), (3, 4)], &int(1)).unwrap();
        assert!(has_swap_automorphism(&net, pair(1, 3)));
        let uneven = Network::from_parts(
            vec![int(0); 4],
            [(1, 2, int(1)), (3, 4, int(2))],
        )
        .unwrap();
        assert!(!has_swap_automorphism(&uneven, pair(1, 3)));
    }
}
