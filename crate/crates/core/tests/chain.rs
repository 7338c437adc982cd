mod common;

use common::{random_etale, rng, split};
use grassmann_core::incidence::admissible;
use grassmann_core::subspace::{dual_product, right_product};
use grassmann_core::{
    big_phi, duality_inverse, duality_map, euclid_sequence, fiber_dimension, gl1_translate, good_witness_etale, in_g,
    phi_fiber_sample, phi_step, sample_g_point, sample_good_flag, DomainCondition, Error, PrimeField, Reduction, Side,
    Subspace, DEFAULT_BUDGET,
};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn composite_is_equivariant_for_a_fixed_flag() {
    for (seed, (n, r)) in [(3, 2), (4, 3), (5, 3), (7, 4)].into_iter().enumerate() {
        let mut rng = rng(seed as u64);
        let alg = random_etale(n, &mut rng);
        let chain = euclid_sequence(n, r).unwrap();
        let flag = sample_good_flag(&alg, &chain, &mut rng, DEFAULT_BUDGET).unwrap();
        for _ in 0..10 {
            let y = Subspace::random(alg.field(), Side::Primal, n, r, &mut rng, DEFAULT_BUDGET).unwrap();
            let a = alg.random_invertible(&mut rng, DEFAULT_BUDGET).unwrap();
            let (out, trace) = big_phi(&alg, &y, &flag).unwrap();
            let ay = gl1_translate(&alg, &a, &y).unwrap();
            let (out_a, _) = big_phi(&alg, &ay, &flag).unwrap();
            assert_eq!(out_a, gl1_translate(&alg, &a, &out).unwrap(), "n={n} r={r}");
            assert_eq!(out.dim(), gcd(n, r));
            assert_eq!(trace.total_fiber_dim(), r * (n - r) - gcd(n, r) * (n - gcd(n, r)));
        }
    }
}

#[test]
fn trace_follows_the_euclid_data() {
    let mut rng = rng(11);
    let alg = random_etale(5, &mut rng);
    let chain = euclid_sequence(5, 3).unwrap();
    let flag = sample_good_flag(&alg, &chain, &mut rng, DEFAULT_BUDGET).unwrap();
    let y = Subspace::random(alg.field(), Side::Primal, 5, 3, &mut rng, DEFAULT_BUDGET).unwrap();
    let (out, trace) = big_phi(&alg, &y, &flag).unwrap();
    let dims: Vec<(usize, usize, usize)> =
        trace.steps.iter().map(|s| (s.output.r(), s.output.s(), s.output.u_dim())).collect();
    assert_eq!(dims, vec![(2, 3, 1), (2, 1, 2), (0, 1, 4)]);
    let cases: Vec<Reduction> = trace.steps.iter().map(|s| s.case).collect();
    assert_eq!(cases, vec![Reduction::Dual, Reduction::Primal, Reduction::Dual]);
    let fibers: Vec<usize> = trace.steps.iter().map(|s| s.fiber_dim).collect();
    assert_eq!(fibers, vec![0, 0, 2]);
    assert!(trace.dualized.is_none());
    assert_eq!(out.dim(), 1);
}

#[test]
fn even_step_count_goes_through_the_duality() {
    let mut rng = rng(12);
    let alg = random_etale(3, &mut rng);
    let chain = euclid_sequence(3, 2).unwrap();
    let flag = sample_good_flag(&alg, &chain, &mut rng, DEFAULT_BUDGET).unwrap();
    assert!(flag.dual().is_some());
    let y = Subspace::random(alg.field(), Side::Primal, 3, 2, &mut rng, DEFAULT_BUDGET).unwrap();
    let (out, trace) = big_phi(&alg, &y, &flag).unwrap();
    assert_eq!(trace.dualized.as_ref().map(Subspace::dim), Some(1));
    assert_eq!(trace.steps.iter().map(|s| s.fiber_dim).collect::<Vec<_>>(), vec![0, 0]);
    assert_eq!(out.side(), Side::Primal);
    assert_eq!(out.dim(), 1);
}

#[test]
fn divisor_case_is_identity() {
    for (n, r) in [(6, 3), (6, 2), (8, 4)] {
        let mut rng = rng(n as u64 * 10 + r as u64);
        let alg = random_etale(n, &mut rng);
        let flag = sample_good_flag(&alg, &euclid_sequence(n, r).unwrap(), &mut rng, DEFAULT_BUDGET).unwrap();
        for _ in 0..5 {
            let y = Subspace::random(alg.field(), Side::Primal, n, r, &mut rng, DEFAULT_BUDGET).unwrap();
            assert_eq!(big_phi(&alg, &y, &flag).unwrap().0, y);
        }
    }
}

#[test]
fn duality_roundtrips() {
    for (n, d) in [(4, 2), (6, 2), (6, 3), (9, 3)] {
        let mut rng = rng(100 + n as u64);
        let alg = random_etale(n, &mut rng);
        let u = Subspace::random(alg.field(), Side::Primal, n, n / d - 1, &mut rng, DEFAULT_BUDGET).unwrap();
        for _ in 0..5 {
            let y = Subspace::random(alg.field(), Side::Primal, n, d, &mut rng, DEFAULT_BUDGET).unwrap();
            let x = duality_map(&alg, &y, &u).unwrap();
            assert_eq!(x.dim(), d);
            assert_eq!(duality_inverse(&alg, &x, &u).unwrap(), y);
            let a = alg.random_invertible(&mut rng, DEFAULT_BUDGET).unwrap();
            let ay = gl1_translate(&alg, &a, &y).unwrap();
            assert_eq!(duality_map(&alg, &ay, &u).unwrap(), gl1_translate(&alg, &a, &x).unwrap());
        }
    }
}

#[test]
fn duality_reports_degenerate_products() {
    let f = PrimeField::default();
    let alg = split(f, 4);
    let e0 = Subspace::coordinate(f, Side::Primal, 4, &[0]);
    let y = Subspace::coordinate(f, Side::Primal, 4, &[0, 1]);
    let err = duality_map(&alg, &y, &e0).unwrap_err();
    assert_eq!(err, Error::OutsideDomain { step: None, condition: DomainCondition::ProductRank });
    assert!(err.is_domain_violation());
}

#[test]
fn fiber_samples_map_back_to_their_target() {
    let mut rng = rng(21);
    for n in 3..=7 {
        let alg = random_etale(n, &mut rng);
        let field = alg.field();
        for s in 1..n {
            for q in 1..n {
                for t in 0..s {
                    let r = q * s + t;
                    for u in 0..n {
                        if !admissible(n, r, s, u) || !admissible(n, t, s, u + q) {
                            continue;
                        }
                        let u_small =
                            Subspace::random(field, Side::Primal, n, u + q, &mut rng, DEFAULT_BUDGET).unwrap();
                        let u_big = u_small.clone();
                        let u_small = u_small.random_within(u, &mut rng, DEFAULT_BUDGET).unwrap();
                        let target = sample_g_point(&alg, t, s, &u_big, &mut rng, DEFAULT_BUDGET).unwrap();
                        let pre = phi_fiber_sample(&alg, &target, &u_small, Reduction::Dual, &mut rng, DEFAULT_BUDGET)
                            .unwrap();
                        assert_eq!((pre.r(), pre.s()), (r, s));
                        assert!(pre.x().contains(target.x()));
                        assert_eq!(phi_step(&alg, &pre, &u_big).unwrap(), target);
                        // Preimages of the target form an open part of a Grassmannian of
                        // (q s)-planes in (Y.U)^⊥ / X_t.
                        let room = right_product(&alg, target.y(), &u_small).annihilator();
                        let expected = q * s * (room.dim() - t - q * s);
                        assert_eq!(fiber_dimension(n, u, r, s), expected);
                    }
                }
            }
        }
    }
}

#[test]
fn mirror_fiber_samples_map_back() {
    let mut rng = rng(22);
    let alg = random_etale(7, &mut rng);
    let field = alg.field();
    let u_big = Subspace::random(field, Side::Primal, 7, 2, &mut rng, DEFAULT_BUDGET).unwrap();
    let u_small = u_big.random_within(0, &mut rng, DEFAULT_BUDGET).unwrap();
    // (r, s) = (2, 5) reduces to (2, 1) with q = 2.
    let target = sample_g_point(&alg, 2, 1, &u_big, &mut rng, DEFAULT_BUDGET).unwrap();
    let pre = phi_fiber_sample(&alg, &target, &u_small, Reduction::Primal, &mut rng, DEFAULT_BUDGET).unwrap();
    assert_eq!((pre.r(), pre.s()), (2, 5));
    assert_eq!(phi_step(&alg, &pre, &u_big).unwrap(), target);
    let room = dual_product(&alg, &u_small, target.x()).annihilator();
    assert_eq!(fiber_dimension(7, 0, 2, 5), 4 * (room.dim() - 1 - 4));
}

#[test]
fn witness_covers_every_admissible_tuple() {
    let mut rng = rng(31);
    for n in 1..=8 {
        let alg = random_etale(n, &mut rng);
        for r in 0..=n {
            for s in 0..=n {
                for u in 0..=n {
                    if !admissible(n, r, s, u) {
                        assert!(good_witness_etale(&alg, r, s, u).is_err());
                        continue;
                    }
                    let w = good_witness_etale(&alg, r, s, u).unwrap();
                    assert_eq!((w.x.dim(), w.y.dim(), w.u.dim()), (r, s, u), "n={n} r={r} s={s} u={u}");
                    assert!(in_g(&alg, &w.x, &w.y, &w.u).unwrap());
                }
            }
        }
    }
}

#[test]
fn step_is_equivariant() {
    let mut rng = rng(41);
    let alg = random_etale(7, &mut rng);
    let field = alg.field();
    let u1 = Subspace::random(field, Side::Primal, 7, 2, &mut rng, DEFAULT_BUDGET).unwrap();
    let u0 = Subspace::zero(field, Side::Primal, 7);
    for _ in 0..10 {
        let pt = sample_g_point(&alg, 7, 3, &u0, &mut rng, DEFAULT_BUDGET).unwrap();
        let a = alg.random_invertible(&mut rng, DEFAULT_BUDGET).unwrap();
        let image = phi_step(&alg, &pt, &u1).unwrap();
        let moved = phi_step(&alg, &pt.translate(&alg, &a).unwrap(), &u1).unwrap();
        assert_eq!(moved, image.translate(&alg, &a).unwrap());
        assert_eq!((image.r(), image.s()), (1, 3));
    }
}

#[test]
fn chain_fiber_sum_matches_affine_factor() {
    for n in 2..=12 {
        for r in 1..n {
            let chain = euclid_sequence(n, r).unwrap();
            let d = gcd(n, r);
            let mut total = 0;
            let mut u = 0;
            for i in 1..=chain.steps() {
                let (x, y) = chain.step_dims(i);
                total += fiber_dimension(n, u, x, y);
                u += chain.quotients()[i - 1];
            }
            assert_eq!(total, r * (n - r) - d * (n - d), "n={n} r={r}");
            assert_eq!(chain.affine_dimension(), total);
        }
    }
}
