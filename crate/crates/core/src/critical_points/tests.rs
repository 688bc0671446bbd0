use super::*;
use crate::moments::CERTIFIED_PAIRS;
use crate::second_moment::gradient_phi;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PREC: u32 = 160;

fn pp(d: u32, p: u32) -> ParamPair {
    ParamPair::new(d, p).unwrap()
}

fn tol(bits: u32) -> HighPrecisionReal {
    HighPrecisionReal::from_rational(&BigRational::new(BigInt::one(), BigInt::one() << bits), PREC)
}

fn round5(x: &HighPrecisionReal) -> f64 {
    (x.to_f64() * 1e5).round() / 1e5
}

/// Coefficients of `f(1 + x) / divisor`, listed from the top degree down to `x^1`.
const SHIFTED_LISTS: [(u32, u32, i64, &[i64]); 5] = [
    (6, 1, 48, &[1, 6, 15, 20, 14, 4]),
    (10, 2, 180, &[11, 110, 487, 1256, 2086, 2324, 1758, 904, 308, 56]),
    (
        13,
        3,
        1,
        &[
            26884, 349492, 2217072, 9010144, 25545520, 52351728, 78942864, 88217844, 72935148, 44129800, 18997264,
            5373368, 767624,
        ],
    ),
    (14, 3, 2912, &[13, 182, 1249, 5524, 17204, 38896, 64284, 77088, 65538, 37708, 13442, 2488, 180, 24]),
    (
        17,
        4,
        14280,
        &[
            29, 493, 4308, 25180, 107500, 348452, 873756, 1708421, 2606175, 3083938, 2795936, 1903902, 946946, 332816,
            80872, 13860, 1540,
        ],
    ),
];

#[test]
fn shifted_f_matches_reference_lists() {
    for (d, p, divisor, list) in SHIFTED_LISTS {
        let s = shifted_f(pp(d, p)).unwrap();
        let mut coeffs: Vec<BigInt> = list.iter().rev().map(|&c| BigInt::from(c * divisor)).collect();
        coeffs.insert(0, BigInt::zero());
        assert_eq!(s.shifted, IntPolynomial::new(coeffs), "({d},{p})");
        assert_eq!(s.shifted.degree(), Some(d as usize));
        assert!(interior_uniqueness(pp(d, p)));
    }
}

#[test]
fn f_vanishes_at_one_and_is_antisymmetric() {
    for d in 3..=20u32 {
        for p in 1..=4u32.min(d - 1) {
            if d == 2 * p {
                assert!(build_f(pp(d, p)).is_err());
                continue;
            }
            let f = build_f(pp(d, p)).unwrap();
            assert!(f.eval_rational(&BigRational::one()).is_zero(), "({d},{p})");
            assert_eq!(f.reciprocal(d as usize + 2), -&f, "({d},{p})");
            let (f1, f2) = build_f_parts(pp(d, p)).unwrap();
            let q = pp(d, p).canonical().p as usize;
            assert_eq!(f2, -&f1.reciprocal(q + 1), "({d},{p})");
        }
    }
}

fn primitive(poly: &IntPolynomial) -> IntPolynomial {
    let c = poly.content();
    let lead = poly.coeff(poly.degree().unwrap());
    let c = if lead.is_negative() { -c } else { c };
    poly.div_exact(&c)
}

#[test]
fn g_matches_reference_polynomials() {
    let cases: [(u32, u32, &[i64]); 4] = [
        (10, 2, &[-7560, -720, 990]),
        (13, 3, &[-240240, -141570, 60060, 13442]),
        (14, 3, &[-480480, -240240, 96096, 18928]),
        (17, 4, &[-15315300, -16336320, 1856400, 2598960, 207060]),
    ];
    for (d, p, coeffs) in cases {
        let g = build_g(pp(d, p));
        assert_eq!(primitive(&g), primitive(&IntPolynomial::from_i64(coeffs)), "({d},{p})");
        assert_eq!(g.sign_changes(), 1);
    }
    assert_eq!(primitive(&build_g(pp(6, 1))), IntPolynomial::from_i64(&[-5, 1]));
}

#[test]
fn theta_ratio_factor_for_13_3() {
    let t = theta_family(pp(13, 3));
    let c = t.theta.content();
    assert_eq!(t.theta.div_exact(&c), IntPolynomial::from_i64(&[120, 135, 30, 1]));
    assert_eq!(t.theta1.div_exact(&c), IntPolynomial::from_i64(&[0, 135, 60, 3]));
    assert_eq!(t.eta.div_exact(&c), IntPolynomial::from_i64(&[1, 30, 135, 120]));
}

#[test]
fn interior_param_recovers_z_star() {
    for pair in CERTIFIED_PAIRS {
        let (d, p) = (pair.d, pair.p);
        let pair = pp(d, p);
        assert_eq!(interior_param(pair, &BigRational::one(), &rational(1, 4)).unwrap(), z_star(pair));
        assert_eq!(interior_z_for(pair, &BigRational::one()).unwrap(), rational(1, 4));
    }
}

#[test]
fn interior_family_solves_the_ratio_equations() {
    let pair = pp(13, 3);
    let e = (pair.d - 4 * pair.p) as f64;
    for w in [rational(1, 3), rational(2, 3), rational(5, 4), rational(2, 1)] {
        let z = interior_z_for(pair, &w).unwrap();
        let pt = interior_param(pair, &(&w * &w), &z).unwrap();
        assert!(pt.is_interior());
        let grad = gradient_phi(&pt.to_f64(), pair).unwrap();
        for (j, row) in (1..=3).zip(grad[1..].chunks_exact(4)) {
            for s in 0..4 {
                let sign = crate::second_moment::SLOT_SIGN[s] as f64;
                let resid = row[s] - j as f64 * sign / e * grad[0];
                assert!(resid.abs() < 1e-9, "w={w} j={j} s={s}: {resid}");
            }
        }
        assert!(grad[0].abs() > 1e-6, "spurious critical point at w={w}");
    }
}

#[test]
fn boundary_param_and_phi_tilde_agree() {
    let pair = pp(14, 3);
    for x in [rational(1, 2), rational(1, 1), rational(25, 9), rational(7, 2)] {
        let pt = boundary_param(pair, &x).unwrap();
        assert!(pt.in_k());
        let (a, b) = pt.ab(14);
        assert_eq!((a.clone(), b.clone()), tilde_ab(pair, &x));
        let direct = phi0(&pt, pair, PREC).unwrap();
        assert!(direct.within(&phi_tilde(pair, &x, PREC).unwrap(), &tol(100)));
    }
}

#[test]
fn phi_tilde_prime_matches_finite_differences() {
    let pair = pp(13, 3);
    let h = rational(1, 1_000_000);
    for i in 0..50 {
        let x = rational(1, 1) + rational(3 * i, 49);
        let up = phi_tilde(pair, &(&x + &h), PREC).unwrap();
        let down = phi_tilde(pair, &(&x - &h), PREC).unwrap();
        let fd = (&up - &down).to_f64() / 2e-6;
        let exact = phi_tilde_prime(pair, &x, PREC).unwrap().to_f64();
        assert!((fd - exact).abs() < 1e-6 * (1.0 + exact.abs()), "x={x}: {fd} vs {exact}");
    }
}

#[test]
fn boundary_checks_pass_for_certified_pairs() {
    let expected = [
        (6, 1, 5.92693, 6.18621),
        (10, 2, 13.55439, 13.58107),
        (13, 3, 20.23978, 20.35954),
        (14, 3, 21.90716, 21.94994),
        (17, 4, 29.20305, 29.23482),
    ];
    for (d, p, bound, star) in expected {
        let check = boundary_max_check(pp(d, p), PREC).unwrap();
        assert!(check.passed(), "({d},{p}): {:?}", check.failures());
        assert_eq!(round5(&check.phi_tilde_bound), bound, "({d},{p})");
        assert_eq!(round5(&check.phi_star), star, "({d},{p})");
    }
    let six = boundary_max_check(pp(6, 1), PREC).unwrap();
    let closed = &HighPrecisionReal::from_int(140625, PREC).ln().unwrap() * &HighPrecisionReal::from_ratio(1, 2, PREC);
    assert!(six.phi_tilde_anchor.within(&closed, &tol(100)));
}

#[test]
fn boundary_root_is_a_fixed_point_of_b_over_a() {
    for pair in CERTIFIED_PAIRS {
        let (d, p) = (pair.d, pair.p);
        let pair = pp(d, p);
        let bracket = certified_bracket(pair).unwrap();
        let x = refined_boundary_root(pair, &bracket).unwrap();
        let (a, b) = tilde_ab(pair, &x);
        let gap = (b / a - &x).to_f64().unwrap();
        assert!(gap.abs() < 1e-9, "({d},{p}): {gap}");
        assert!(phi_tilde_prime(pair, &x, PREC).unwrap().to_f64().abs() < 1e-9);
    }
}

#[test]
fn bad_brackets_fail_the_check() {
    let pair = pp(13, 3);
    let shifted = RootBracket { lo: rational(3, 1), hi: rational(4, 1), anchor: rational(3, 1) };
    let check = boundary_max_check_with(pair, shifted, PREC).unwrap();
    assert!(!check.bracket_valid);
    assert!(!check.passed());
    let wide = RootBracket { lo: rational(1, 1), hi: rational(4, 1), anchor: rational(1, 1) };
    let check = boundary_max_check_with(pair, wide, PREC).unwrap();
    assert!(check.bracket_valid);
    assert!(!check.mvt_ok || !check.below_star);
    let inverted = RootBracket { lo: rational(3, 1), hi: rational(2, 1), anchor: rational(3, 1) };
    assert!(boundary_max_check_with(pair, inverted, PREC).is_err());
    assert!(boundary_max_check(pp(9, 2), PREC).is_err());
}

#[test]
fn searched_bracket_contains_the_stored_root() {
    for pair in CERTIFIED_PAIRS {
        let (d, p) = (pair.d, pair.p);
        let pair = pp(d, p);
        let found = search_bracket(pair).unwrap();
        let root = refined_boundary_root(pair, &certified_bracket(pair).unwrap()).unwrap();
        assert!(found.lo <= root && root <= found.hi, "({d},{p})");
    }
}

#[test]
fn corner_gap_matches_closed_form() {
    for (d, p) in [(6, 1), (8, 1), (10, 2), (13, 3), (14, 3), (17, 4), (9, 2)] {
        let pair = pp(d, p);
        assert!(corner_check(pair, PREC).unwrap().within(&corner_gap_closed(pair, PREC).unwrap(), &tol(100)));
    }
    assert!(corner_gap_closed(pp(8, 1), PREC).unwrap().within(&HighPrecisionReal::zero(PREC), &tol(120)));
    let ln_three_halves = &HighPrecisionReal::from_ratio(3, 2, PREC).ln().unwrap();
    assert!(corner_check(pp(6, 1), PREC).unwrap().within(ln_three_halves, &tol(100)));
}

#[test]
fn boundary_points_are_not_local_maxima() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (d, p) in [(6, 1), (13, 3)] {
        assert!(boundary_escape_check_n(pp(d, p), 20, 0, &mut rng).unwrap(), "({d},{p})");
    }
    assert!(boundary_escape_check_n(pp(10, 2), 10, 1, &mut rng).unwrap());
}

#[test]
fn rejects_bad_input() {
    let pair = pp(13, 3);
    assert!(interior_param(pair, &rational(-1, 1), &rational(1, 4)).is_err());
    assert!(interior_param(pair, &rational(1, 1), &rational(1, 2)).is_err());
    assert!(boundary_param(pair, &BigRational::zero()).is_err());
    assert!(phi_tilde(pair, &rational(-1, 2), PREC).is_err());
    assert!(build_f(pp(4, 2)).is_err());
    assert!(corner_check(pp(6, 3), PREC).is_err());
    assert!(phi0(&z_star(pair), pair, PREC).is_err());
}

#[test]
fn certificate_report_for_certified_and_exploratory_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cert = AppendixCertificate::build(pp(6, 1), PREC, &mut rng).unwrap();
    assert!(cert.verdict && !cert.exploratory);
    let report = cert.to_report();
    assert!(report.contains("verdict: true"));
    assert!(report.contains("g_root_bracket: [5, 5]"));
    assert!(report.lines().all(|l| l.contains(": ")));
    let explore = AppendixCertificate::build(pp(9, 2), PREC, &mut rng).unwrap();
    assert!(explore.exploratory);
    assert!(explore.to_report().contains("mode: exploratory"));
}
