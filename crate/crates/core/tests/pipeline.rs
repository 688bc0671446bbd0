use num_traits::Signed;
use porient_core::bisection::{max_bisection_exact, orientation_obstruction};
use porient_core::config_model::{project, sample_simple_graph, Multigraph};
use porient_core::critical_points::AppendixCertificate;
use porient_core::moments::{classify, condition_one, expected_count_exact, ClassLabel, ParamPair, CERTIFIED_PAIRS};
use porient_core::orientation::{exists_exact, is_p_orientation, sample_oriented_pairing};
use porient_core::second_moment::{hessian_det_closed_exact, laplace_ratio};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn certified_pairs_carry_complete_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for pair in CERTIFIED_PAIRS {
        assert!(condition_one(pair));
        assert!(hessian_det_closed_exact(pair).is_positive());
        let cert = AppendixCertificate::build(pair, 128, &mut rng).unwrap();
        assert!(cert.verdict, "{pair}\n{}", cert.to_report());
        assert!(!cert.exploratory);
        assert!(laplace_ratio(pair, 128).unwrap().to_f64() > 1.0);
        assert_eq!(classify(pair.d, pair.p), ClassLabel::AffirmativeY);
    }
}

#[test]
fn sampled_oriented_pairings_are_p_orientations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (d, p) in [(3, 1), (6, 1), (9, 2)] {
        let pair = ParamPair::new(d, p).unwrap();
        for _ in 0..20 {
            let (f, o) = sample_oriented_pairing(pair, 12, &mut rng).unwrap();
            assert!(is_p_orientation(&project(&f), &o, p as usize));
        }
    }
}

#[test]
fn witnesses_are_consistent_with_bisections() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let g = sample_simple_graph(5, 10, &mut rng).unwrap();
        let w = exists_exact(&g, 1).unwrap().expect("small 5-regular graphs have 1-orientations here");
        let best = max_bisection_exact(&g).unwrap().best_size;
        assert!(w.bisection.crossing_edges(&g) <= best);
        assert!(best >= 3 * 10 / 2);
        assert!(!orientation_obstruction(&g, 1).unwrap());
    }
}

#[test]
fn edge_list_round_trip() {
    let g = Multigraph::complete(4);
    let back = Multigraph::parse_edge_list(&g.to_edge_list()).unwrap();
    assert_eq!(back, g);
}

#[test]
fn first_moment_is_positive_exactly_when_feasible() {
    assert!(expected_count_exact(ParamPair::new(3, 1).unwrap(), 4).unwrap().is_positive());
    assert!(expected_count_exact(ParamPair::new(4, 2).unwrap(), 4).unwrap().is_positive());
    assert!(ParamPair::new(3, 3).is_err());
}
