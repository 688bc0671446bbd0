use super::*;
use crate::config_model::{enumerate_pairings, sample_pairing, sample_simple_graph};
use crate::moments::{expected_count_exact, mu_r};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

fn naive_count(g: &Multigraph, p: usize) -> u64 {
    (0u64..1 << g.m())
        .filter(|bits| {
            let o = Orientation::from_reversed((0..g.m()).map(|e| bits >> e & 1 == 1).collect());
            is_p_orientation(g, &o, p)
        })
        .count() as u64
}

#[test]
fn k4_one_orientations() {
    let k4 = Multigraph::complete(4);
    assert_eq!(naive_count(&k4, 1), 24);
    assert_eq!(count_bruteforce(&k4, 1).unwrap(), 24);
}

#[test]
fn all_into_one_vertex_is_rejected() {
    let k4 = Multigraph::complete(4);
    let reversed = k4.edges.iter().map(|&(u, _)| u == 3).collect();
    let o = Orientation::from_reversed(reversed);
    assert_eq!(in_degrees(&k4, &o)[3], 3);
    assert!(!is_p_orientation(&k4, &o, 1));
}

#[test]
fn cycles_have_two_eulerian_orientations() {
    for n in 3..9 {
        let c = Multigraph::cycle(n);
        assert_eq!(count_bruteforce(&c, 1).unwrap(), 2, "C_{n}");
        assert!(is_p_orientation(&c, &Orientation::forward(n), 1));
    }
}

#[test]
fn odd_order_regular_graphs_have_none() {
    let k5 = Multigraph::complete(5);
    assert_eq!(count_bruteforce(&k5, 1).unwrap(), 0);
    assert!(count_bruteforce(&k5, 2).unwrap() > 0);
    let petersen_like = Multigraph::complete(7);
    assert_eq!(count_bruteforce(&petersen_like, 2).unwrap(), 0);
}

#[test]
fn bruteforce_matches_naive_on_multigraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let f = sample_pairing(3, 6, &mut rng).unwrap();
        let g = project(&f);
        assert_eq!(count_bruteforce(&g, 1).unwrap(), naive_count(&g, 1));
    }
    let big = Multigraph::complete(9);
    assert!(count_bruteforce(&big, 4).is_err());
}

#[test]
fn targets_on_small_graphs() {
    let c4 = Multigraph::cycle(4);
    let o = feasible_with_targets(&c4, &[1, 1, 1, 1]).unwrap().unwrap();
    assert_eq!(in_degrees(&c4, &o), vec![1, 1, 1, 1]);
    assert!(matches!(feasible_with_targets(&c4, &[1, 1, 1]), Err(Error::InvalidParams(_))));
    assert!(matches!(feasible_with_targets(&c4, &[2, 1, 1, 1]), Err(Error::TargetSum { sum: 5, expected: 4 })));
    assert_eq!(feasible_with_targets(&c4, &[3, 1, 0, 0]).unwrap(), None);
}

#[test]
fn k4_targets_agree_with_brute_force() {
    let k4 = Multigraph::complete(4);
    for r in [[3, 1, 1, 1], [0, 0, 3, 3], [2, 2, 2, 0], [3, 3, 0, 0], [0, 1, 2, 3]] {
        let found = feasible_with_targets(&k4, &r).unwrap();
        let brute = (0u32..64).any(|bits| {
            let o = Orientation::from_reversed((0..6).map(|e| bits >> e & 1 == 1).collect());
            in_degrees(&k4, &o) == r
        });
        assert_eq!(found.is_some(), brute, "{r:?}");
        if let Some(o) = found {
            assert_eq!(in_degrees(&k4, &o), r);
        }
    }
}

#[test]
fn loops_count_once() {
    let g = Multigraph::new(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap();
    let o = feasible_with_targets(&g, &[2, 1]).unwrap().unwrap();
    assert_eq!(in_degrees(&g, &o), vec![2, 1]);
    assert_eq!(count_bruteforce(&g, 1).unwrap(), naive_count(&g, 1));
}

fn check_witness(g: &Multigraph, p: usize, w: &Witness) {
    let d = g.regular_degree().unwrap();
    assert!(is_p_orientation(g, &w.orientation, p));
    let b = &w.bisection;
    assert_eq!(b.in_vertices.len(), g.n / 2);
    assert_eq!(b.out_vertices.len(), g.n / 2);
    if 2 * p != d {
        let indeg = in_degrees(g, &w.orientation);
        assert!(b.in_vertices.iter().all(|&v| indeg[v] == p));
        let side = b.sides(g.n);
        let inside = g.edges.iter().filter(|&&(u, v)| side[u] && side[v]).count();
        let w_to_u = w.orientation.arcs(g).iter().filter(|&&(t, h)| !side[t] && side[h]).count();
        assert_eq!(inside + w_to_u, p * g.n / 2);
        assert!(b.crossing_edges(g) >= d.abs_diff(2 * p) * g.n / 2);
    }
}

#[test]
fn exact_agrees_with_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for &(d, n) in &[(3, 6), (3, 8), (4, 6), (4, 8), (5, 6), (5, 8)] {
        for _ in 0..8 {
            let g = sample_simple_graph(d, n, &mut rng).unwrap();
            for p in 1..d {
                let count = count_bruteforce(&g, p).unwrap();
                let w = exists_exact(&g, p).unwrap();
                assert_eq!(w.is_some(), count > 0, "d={d} n={n} p={p}");
                if let Some(w) = w {
                    check_witness(&g, p, &w);
                }
            }
        }
    }
}

#[test]
fn exact_rejects_bad_input() {
    assert_eq!(exists_exact(&Multigraph::complete(5), 2), Err(Error::OddVertexCount(5)));
    assert!(matches!(exists_exact(&Multigraph::cycle(26), 1), Err(Error::TooLarge { .. })));
    let path = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
    assert!(matches!(exists_exact(&path, 1), Err(Error::InvalidParams(_))));
}

#[test]
fn eulerian_always_exists() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let g = project(&sample_pairing(4, 10, &mut rng).unwrap());
        let w = exists_exact(&g, 2).unwrap().unwrap();
        check_witness(&g, 2, &w);
        let h = exists_heuristic(&g, 2, HeuristicBudget { restarts: 1, steps_per_vertex: 0 }, &mut rng).unwrap();
        check_witness(&g, 2, &h);
    }
}

#[test]
fn heuristic_finds_existing_orientations() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut tried = 0;
    while tried < 30 {
        let g = sample_simple_graph(5, 10, &mut rng).unwrap();
        if exists_exact(&g, 2).unwrap().is_none() {
            continue;
        }
        tried += 1;
        let w = exists_heuristic(&g, 2, HeuristicBudget::default(), &mut rng).expect("heuristic failed");
        check_witness(&g, 2, &w);
    }
}

#[test]
fn dual_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (f, o) = sample_oriented_pairing(ParamPair::new(5, 1).unwrap(), 8, &mut rng).unwrap();
    let g = project(&f);
    assert_eq!(dual(&dual(&o)), o);
    assert!(is_p_orientation(&g, &dual(&o), 1));
}

#[test]
fn directed_cycles_on_small_cycles() {
    let c3 = Pairing::from_pairs(2, 3, vec![(1, 2), (3, 4), (5, 0)]).unwrap();
    let census = directed_cycle_census(&c3, &Orientation::from_reversed(vec![true, false, false]), 3);
    assert_eq!(census.counts, vec![0, 0, 1]);
    let c4 = Pairing::from_pairs(2, 4, vec![(1, 2), (3, 4), (5, 6), (7, 0)]).unwrap();
    let g = project(&c4);
    let alternating = Orientation::from_reversed(vec![false, false, true, false]);
    assert_eq!(in_degrees(&g, &alternating), vec![0, 2, 0, 2]);
    assert_eq!(directed_cycle_census(&c4, &Orientation::forward(4), 4).get(4), 0);
    let around = Orientation::from_reversed(vec![true, false, false, false]);
    assert_eq!(directed_cycle_census(&c4, &around, 4).get(4), 1);
    assert_eq!(directed_cycle_census(&c4, &alternating, 4).get(4), 0);
}

#[test]
fn loops_and_digons_are_directed_cycles() {
    let f = Pairing::from_pairs(3, 2, vec![(0, 1), (2, 3), (4, 5)]).unwrap();
    let o = Orientation::forward(3);
    assert_eq!(directed_cycle_census(&f, &o, 2).counts, vec![2, 0]);
    let f = Pairing::from_pairs(3, 2, vec![(0, 3), (1, 4), (2, 5)]).unwrap();
    let o = Orientation::from_reversed(vec![false, true, false]);
    assert_eq!(directed_cycle_census(&f, &o, 3).counts, vec![0, 2, 0]);
}

#[test]
fn reversing_cycles() {
    let k4 = Multigraph::complete(4);
    // Edges: 0:(0,1) 1:(0,2) 2:(0,3) 3:(1,2) 4:(1,3) 5:(2,3); directed triangle 0->1->2->0.
    let o = Orientation::from_reversed(vec![false, true, false, false, false, false]);
    let r = reverse_cycle(&k4, &o, &[0, 3, 1]).unwrap();
    assert_eq!(in_degrees(&k4, &r), in_degrees(&k4, &o));
    assert_ne!(r, o);
    assert_eq!(reverse_cycle(&k4, &r, &[1, 3, 0]).unwrap(), o);
    assert!(matches!(reverse_cycle(&k4, &o, &[0, 4]), Err(Error::NotDirectedCycle(_))));
    assert!(matches!(reverse_cycle(&k4, &o, &[]), Err(Error::NotDirectedCycle(_))));
    assert!(matches!(reverse_cycle(&k4, &o, &[9]), Err(Error::NotDirectedCycle(_))));
}

#[test]
fn oriented_pairings_are_p_orientations() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (d, p, n) in [(3, 1, 6), (8, 1, 10), (9, 2, 12), (4, 2, 6), (7, 5, 4)] {
        let pair = ParamPair::new(d, p).unwrap();
        for _ in 0..20 {
            let (f, o) = sample_oriented_pairing(pair, n, &mut rng).unwrap();
            assert!(is_p_orientation(&project(&f), &o, p as usize));
        }
    }
    assert_eq!(
        sample_oriented_pairing(ParamPair::new(3, 1).unwrap(), 3, &mut rng),
        Err(Error::OddVertexCount(3))
    );
}

fn oriented_space(d: usize, n: usize, p: usize) -> Vec<(Pairing, Orientation)> {
    let mut out = Vec::new();
    for f in enumerate_pairings(d, n).unwrap() {
        let g = project(&f);
        for bits in 0u64..1 << g.m() {
            let o = Orientation::from_reversed((0..g.m()).map(|e| bits >> e & 1 == 1).collect());
            if is_p_orientation(&g, &o, p) {
                out.push((f.clone(), o));
            }
        }
    }
    out
}

#[test]
fn oriented_space_size_for_three_one() {
    let space = oriented_space(3, 2, 1);
    assert_eq!(space.len(), 108);
    let space4 = oriented_space(3, 4, 1);
    let total_pairings = 10395u64;
    let ey = expected_count_exact(ParamPair::new(3, 1).unwrap(), 4).unwrap();
    assert_eq!(ey * crate::exact_math::int_ratio(total_pairings.into()), crate::exact_math::int_ratio(space4.len().into()));
}

#[test]
fn sampler_is_uniform_on_the_smallest_space() {
    let space = oriented_space(3, 2, 1);
    let index: HashMap<(Pairing, Orientation), usize> = space.into_iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let draws = 108 * 400;
    let mut hist = vec![0u64; 108];
    for _ in 0..draws {
        let x = sample_oriented_pairing(ParamPair::new(3, 1).unwrap(), 2, &mut rng).unwrap();
        hist[index[&x]] += 1;
    }
    let expected = 400.0;
    let chi2: f64 = hist.iter().map(|&h| (h as f64 - expected).powi(2) / expected).sum();
    // 107 degrees of freedom; 99.9% quantile is about 159.
    assert!(chi2 < 160.0, "chi2 = {chi2}");
}

#[test]
fn mean_directed_loops_match_mu() {
    let pair = ParamPair::new(8, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let trials = 2000;
    let mut sums = [0f64; 3];
    let mut sq = [0f64; 3];
    for _ in 0..trials {
        let (f, o) = sample_oriented_pairing(pair, 200, &mut rng).unwrap();
        let c = directed_cycle_census(&f, &o, 3);
        for r in 0..3 {
            let w = c.counts[r] as f64;
            sums[r] += w;
            sq[r] += w * w;
        }
    }
    for r in 0..3 {
        let mean = sums[r] / trials as f64;
        let var = sq[r] / trials as f64 - mean * mean;
        let mu = mu_r(pair, r as u32 + 1).to_f64().unwrap();
        let se = (var / trials as f64).sqrt();
        assert!((mean - mu).abs() < 4.0 * se, "r={} mean={mean} mu={mu} se={se}", r + 1);
    }
}

#[test]
fn pair_classes_of_equal_and_dual_orientations() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pair = ParamPair::new(7, 2).unwrap();
    let (f, o) = sample_oriented_pairing(pair, 10, &mut rng).unwrap();
    let same = pair_class_vector(&f, &o, &o, 2).unwrap();
    assert_eq!(same.k, 5);
    for (j, row) in same.counts.iter().enumerate() {
        let expect = if j == 2 { [5, 0, 0, 5] } else { [0; 4] };
        assert_eq!(*row, expect);
    }
    let flipped = pair_class_vector(&f, &o, &dual(&o), 2).unwrap();
    assert_eq!(flipped, same.involution());
    assert!(flipped.satisfies_sum_constraints());
    assert_eq!(flipped.involution(), same);
}

#[test]
fn pair_classes_reject_bad_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (f, o) = sample_oriented_pairing(ParamPair::new(5, 1).unwrap(), 6, &mut rng).unwrap();
    assert!(matches!(pair_class_vector(&f, &o, &Orientation::forward(15), 1), Err(Error::NotPOrientation(_))));
    assert!(pair_class_vector(&f, &o, &Orientation::forward(3), 1).is_err());
    let (f4, o4) = sample_oriented_pairing(ParamPair::new(4, 2).unwrap(), 6, &mut rng).unwrap();
    assert!(matches!(pair_class_vector(&f4, &o4, &o4, 2), Err(Error::InvalidParams(_))));
}

#[test]
fn pair_classes_over_an_enumerated_space() {
    let mut by_pairing: HashMap<Pairing, Vec<Orientation>> = HashMap::new();
    for (f, o) in oriented_space(3, 4, 1) {
        by_pairing.entry(f).or_default().push(o);
    }
    let mut pairings: Vec<&Pairing> = by_pairing.keys().collect();
    pairings.sort_by_key(|f| f.pairs().to_vec());
    for f in pairings.into_iter().step_by(40) {
        let os = &by_pairing[f];
        for o1 in os {
            for o2 in os {
                let v = pair_class_vector(f, o1, o2, 1).unwrap();
                assert!(v.satisfies_sum_constraints());
                let direct = in_in_point_count(f, o1, o2) as i64;
                let s: i64 = v.counts.iter().enumerate().map(|(j, c)| j as i64 * (c[0] + c[3]) as i64 - j as i64 * (c[1] + c[2]) as i64).sum();
                assert_eq!(direct, 4 + (3 - 4) * v.k as i64 + s);
            }
        }
    }
}

#[test]
fn directed_edge_list_format() {
    let c3 = Multigraph::cycle(3);
    let o = Orientation::from_reversed(vec![true, true, true]);
    assert_eq!(o.to_directed_edge_list(&c3), "3 3\n1 0\n2 1\n0 2\n");
}
