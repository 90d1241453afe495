mod common;

use std::collections::BTreeSet;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use latent_core::automorphism::has_swap_automorphism;
use latent_core::network::{attach, delete_vertex, parse_network, serialize_network, Network};
use latent_core::pgst::{trace_ratios, parity_decompose};
use latent_core::photon::{
    correlation_matrix, occupations, permanent, total_unitary, transition_probability, ComplexMatrix, Statistics,
};
use latent_core::rational::{ratio, Rational};
use latent_core::spectral::{
    char_poly, is_cospectral, is_strongly_cospectral, isospectral_reduction, reduction_charpoly,
    singlet_sites, walk_equivalent_sites,
};
use latent_core::walk::{eigh, envelope_scan_chunked, evolve, fidelity, AmplitudeState};
use latent_core::{ninesite, RationalPoly, VertexPair};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| *r != ratio(0, 1))
}

fn network(min_n: usize, max_n: usize) -> impl Strategy<Value = Network> {
    (min_n..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            prop::collection::vec(prop_oneof![3 => Just(ratio(0, 1)), 1 => rational()], n),
            prop::collection::vec(prop::option::weighted(0.5, nonzero_rational()), pairs),
        )
            .prop_map(move |(onsite, weights)| {
                let mut ids = Vec::with_capacity(pairs);
                for i in 1..=n {
                    for j in i + 1..=n {
                        ids.push((i, j));
                    }
                }
                let edges = ids.into_iter().zip(weights).filter_map(|((i, j), w)| w.map(|w| (i, j, w)));
                Network::from_parts(onsite, edges).unwrap()
            })
    })
}

fn network_with_pair(min_n: usize, max_n: usize) -> impl Strategy<Value = (Network, VertexPair)> {
    network(min_n.max(2), max_n).prop_flat_map(|net| {
        let n = net.n();
        (Just(net), 1..=n, 1..n).prop_map(move |(net, u, shift)| {
            let v = (u - 1 + shift) % n + 1;
            (net, VertexPair::new(u, v).unwrap())
        })
    })
}

/// Networks with a guaranteed cospectral pair: two mirrored halves joined at a hub, plus a
/// random extension hung off the pair's singlet sites.
fn cospectral_network() -> impl Strategy<Value = (Network, VertexPair)> {
    (1usize..=3, any::<u64>()).prop_map(|(m, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (net, pair) = common::mirrored(&mut rng, m);
        let singlets: Vec<usize> = singlet_sites(&net, pair).unwrap().into_iter().collect();
        if singlets.is_empty() {
            return (net, pair);
        }
        (common::random_attachment(&mut rng, &net, &singlets), pair)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn serialization_round_trips(net in network(1, 7)) {
        let text = serialize_network(&net);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(serialize_network(&back), text);
    }

    #[test]
    fn deletions_commute((net, pair) in network_with_pair(3, 7)) {
        let du = delete_vertex(&net, pair.u).unwrap();
        let dv = delete_vertex(&net, pair.v).unwrap();
        let a = delete_vertex(&du.network, du.image(pair.v).unwrap()).unwrap();
        let b = delete_vertex(&dv.network, dv.image(pair.u).unwrap()).unwrap();
        prop_assert_eq!(a.network, b.network);
    }

    #[test]
    fn swap_search_is_symmetric_and_label_free((net, pair) in network_with_pair(2, 7), seed in any::<u64>()) {
        let found = has_swap_automorphism(&net, pair);
        prop_assert_eq!(found, has_swap_automorphism(&net, pair.swapped()));
        let n = net.n();
        let mut perm: Vec<usize> = (1..=n).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let relabelled = net.relabel(&perm).unwrap();
        let image = VertexPair::new(perm[pair.u - 1], perm[pair.v - 1]).unwrap();
        prop_assert_eq!(found, has_swap_automorphism(&relabelled, image));
    }

    #[test]
    fn bridgeless_attach_restricts_back(base in network(1, 5), ext in network(1, 4)) {
        let joined = attach(&base, &[], Some(&ext), &[]).unwrap();
        let ids: Vec<usize> = (1..=base.n()).collect();
        prop_assert_eq!(joined.restrict(&ids).unwrap(), base);
    }

    #[test]
    fn reduction_charpoly_divides_char_poly((net, pair) in network_with_pair(2, 6)) {
        let red = isospectral_reduction(&net, pair).unwrap();
        let r = reduction_charpoly(&red);
        let p = char_poly(&net);
        prop_assert!(r.divides(&p));
        let quotient = p.exact_div(&r).unwrap();
        prop_assert_eq!(&(&quotient * &r), &p);
    }

    #[test]
    fn walk_equivalence_power_bound((net, pair) in network_with_pair(2, 6)) {
        let n = net.n();
        prop_assert_eq!(walk_equivalent_sites(&net, pair, n), walk_equivalent_sites(&net, pair, 2 * n + 1));
    }

    #[test]
    fn exact_results_are_deterministic((net, pair) in network_with_pair(2, 6)) {
        prop_assert_eq!(char_poly(&net), char_poly(&net));
        prop_assert_eq!(isospectral_reduction(&net, pair).unwrap(), isospectral_reduction(&net, pair).unwrap());
    }

    #[test]
    fn singlet_attachments_preserve_cospectrality((net, pair) in cospectral_network()) {
        prop_assert!(is_cospectral(&net, pair).unwrap());
    }

    #[test]
    fn parity_factors_rebuild_char_poly((net, pair) in cospectral_network()) {
        let p = parity_decompose(&net, pair).unwrap();
        prop_assert_eq!(p.plus.degree() + p.minus.degree() + p.zero.degree(), net.n());
        let product = &(&p.plus * &p.minus) * &p.zero;
        prop_assert_eq!(product, char_poly(&net));
    }

    #[test]
    fn parity_matches_eigenvector_signs((net, pair) in cospectral_network()) {
        prop_assume!(is_strongly_cospectral(&net, pair).unwrap());
        let p = parity_decompose(&net, pair).unwrap();
        let sys = eigh(&net).unwrap();
        let vals = sys.values();
        for (j, &lambda) in vals.iter().enumerate() {
            // degenerate eigenvectors are not unique; only isolated eigenvalues are checked
            let isolated = vals.iter().enumerate().all(|(i, &x)| i == j || (x - lambda).abs() > 1e-6);
            let (a, b) = (sys.q(pair.u - 1, j), sys.q(pair.v - 1, j));
            if !isolated || (a.abs() < 1e-8 && b.abs() < 1e-8) {
                continue;
            }
            let scale = 1.0 + lambda.abs().powi(net.n() as i32);
            let root_of = |q: &RationalPoly| q.eval_f64(lambda).abs() < 1e-7 * scale;
            if (a - b).abs() < 1e-8 {
                prop_assert!(root_of(&p.plus));
            } else {
                prop_assert!((a + b).abs() < 1e-8);
                prop_assert!(root_of(&p.minus));
            }
        }
    }

    #[test]
    fn trace_ratios_ignore_positive_scaling(
        a in prop::collection::vec(-5i64..=5, 1..5), b in prop::collection::vec(-5i64..=5, 1..5),
        s in (1i64..=9, 1i64..=9)
    ) {
        let mut a = a; a.push(1);
        let mut b = b; b.push(1);
        let (pa, pb) = (RationalPoly::from_ints(&a), RationalPoly::from_ints(&b));
        let c = ratio(s.0, s.1);
        prop_assert_eq!(trace_ratios(&pa, &pb).unwrap(), trace_ratios(&pa.scale(&c), &pb.scale(&c)).unwrap());
    }

    #[test]
    fn eigensystem_reconstructs((net, _pair) in network_with_pair(2, 8)) {
        let n = net.n();
        let sys = eigh(&net).unwrap();
        let h = net.matrix_f64();
        for i in 0..n {
            for k in 0..n {
                let qtq: f64 = (0..n).map(|j| sys.q(j, i) * sys.q(j, k)).sum();
                let identity = f64::from(u8::from(i == k));
                prop_assert!((qtq - identity).abs() < 1e-10);
                let rebuilt: f64 = (0..n).map(|j| sys.q(i, j) * sys.values()[j] * sys.q(k, j)).sum();
                prop_assert!((rebuilt - h[i * n + k]).abs() < 1e-10);
            }
        }
        prop_assert!(sys.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn propagator_is_unitary((net, pair) in network_with_pair(2, 8), tau in 0.0f64..500.0) {
        let n = net.n();
        let sys = eigh(&net).unwrap();
        let u = ComplexMatrix::new(n, n, sys.unitary(tau)).unwrap();
        prop_assert!(u.unitarity_defect() < 1e-10);
        let psi = evolve(&sys, tau, &AmplitudeState::site(n, pair.u).unwrap()).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-10);
        let (f, g) = (fidelity(&sys, pair.u, pair.v, tau).unwrap(), fidelity(&sys, pair.v, pair.u, tau).unwrap());
        prop_assert_eq!(f.to_bits(), g.to_bits());
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn cospectral_sites_share_return_amplitudes((net, pair) in cospectral_network(), tau in 0.0f64..200.0) {
        let sys = eigh(&net).unwrap();
        let a = sys.amplitude(pair.u, pair.u, tau).unwrap();
        let b = sys.amplitude(pair.v, pair.v, tau).unwrap();
        prop_assert!((a - b).norm() < 1e-9);
    }

    #[test]
    fn permanent_is_row_linear(seed in any::<u64>(), n in 1usize..=6, row in 0usize..6, c in (-3.0f64..3.0, -3.0f64..3.0)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = common::random_complex_matrix(&mut rng, n);
        let row = row % n;
        let c = Complex64::new(c.0, c.1);
        let mut scaled = m.clone();
        for j in 0..n {
            scaled.set(row, j, m.get(row, j) * c);
        }
        let (p, q) = (permanent(&m).unwrap(), permanent(&scaled).unwrap());
        prop_assert!((q - p * c).norm() < 1e-10 * (1.0 + q.norm()));
    }

    #[test]
    fn probabilities_respect_phase_freedom(seed in any::<u64>(), n in 2usize..=5, global in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_unitary(&mut rng, n);
        let data: Vec<Complex64> = (0..n * n).map(|k| u.get(k / n, k % n) * Complex64::from_polar(1.0, global)).collect();
        let rotated = ComplexMatrix::new(n, n, data).unwrap();
        let entrywise: Vec<Complex64> =
            (0..n * n).map(|k| u.get(k / n, k % n) * Complex64::from_polar(1.0, 0.7 * k as f64)).collect();
        let scrambled = ComplexMatrix::new(n, n, entrywise).unwrap();
        let mut r = vec![0; n];
        r[0] = 1;
        r[n - 1] += 1;
        for s in occupations(n, 2) {
            let pb = transition_probability(&r, &s, &u, Statistics::Bosonic).unwrap();
            let pb2 = transition_probability(&r, &s, &rotated, Statistics::Bosonic).unwrap();
            prop_assert!((pb - pb2).abs() < 1e-12);
            let pd = transition_probability(&r, &s, &u, Statistics::Distinguishable).unwrap();
            let pd2 = transition_probability(&r, &s, &scrambled, Statistics::Distinguishable).unwrap();
            prop_assert!((pd - pd2).abs() < 1e-12);
        }
    }

    #[test]
    fn two_photon_diagonals_differ_by_factorial(seed in any::<u64>(), n in 2usize..=6, phase in 0.0f64..6.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_unitary(&mut rng, n);
        let gb = correlation_matrix(&u, (1, n), phase, Statistics::Bosonic, false).unwrap();
        let gd = correlation_matrix(&u, (1, n), phase, Statistics::Distinguishable, false).unwrap();
        for i in 1..=n {
            prop_assert!((gb.get(i, i) - 2.0 * gd.get(i, i)).abs() < 1e-12);
        }
    }

    #[test]
    fn distinguishable_entries_follow_output_rows(seed in any::<u64>(), n in 2usize..=6, phase in 0.0f64..6.3) {
        // one photon enters at each of sites 1 and n; site i is row i of the total unitary
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_unitary(&mut rng, n);
        let t = total_unitary(&u, (1, n), n, phase).unwrap();
        let p = |i: usize, a: usize| t.get(i - 1, a - 1).norm_sqr();
        let gd = correlation_matrix(&u, (1, n), phase, Statistics::Distinguishable, false).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                let direct = p(i, 1) * p(j, n) + p(i, n) * p(j, 1);
                prop_assert!((gd.get(i, j) - direct).abs() < 1e-12, "({i},{j})");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn probabilities_are_complete(seed in any::<u64>(), n in 2usize..=9, photons in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_unitary(&mut rng, n);
        let inputs = occupations(n, photons);
        let r = &inputs[seed as usize % inputs.len()];
        for statistics in [Statistics::Bosonic, Statistics::Distinguishable] {
            let total: f64 = occupations(n, photons)
                .iter()
                .map(|s| transition_probability(r, s, &u, statistics).unwrap())
                .sum();
            prop_assert!((total - 1.0).abs() < 1e-9, "{statistics:?}: {total}");
        }
    }

    #[test]
    fn chunked_scans_agree(chunk in 1usize..5000, tau_max in 1.0f64..60.0) {
        let sys = eigh(&ninesite::shipped()).unwrap();
        let reference = envelope_scan_chunked(&sys, 2, 6, tau_max, 0.02, usize::MAX, false).unwrap();
        let split = envelope_scan_chunked(&sys, 2, 6, tau_max, 0.02, chunk, true).unwrap();
        prop_assert_eq!(&split, &reference);
        prop_assert!(reference.envelope.windows(2).all(|w| w[0].running_max <= w[1].running_max));
        for p in &reference.peaks {
            let h = 1e-3;
            let (l, r) = (fidelity(&sys, 2, 6, p.tau - h).unwrap(), fidelity(&sys, 2, 6, p.tau + h).unwrap());
            prop_assert!(p.tau == 0.0 || p.tau >= tau_max - 0.02 || (p.f >= l && p.f >= r));
        }
    }

    #[test]
    fn singlet_pairs_stay_dark(tau in 0.0f64..300.0) {
        let sys = eigh(&ninesite::shipped()).unwrap();
        let u = ComplexMatrix::new(9, 9, sys.unitary(tau)).unwrap();
        let singlets: BTreeSet<usize> = ninesite::SINGLETS.into_iter().collect();
        for statistics in [Statistics::Bosonic, Statistics::Distinguishable] {
            let g = correlation_matrix(&u, (2, 6), std::f64::consts::FRAC_PI_2, statistics, false).unwrap();
            prop_assert!(g.max_entry(|i, j| singlets.contains(&i) && singlets.contains(&j)) < 1e-9);
        }
    }
}
