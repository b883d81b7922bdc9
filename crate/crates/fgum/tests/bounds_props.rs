mod common;

use num_traits::Zero;

use fgum::bounds::{
    ball_constant, count_n, dual_affine_image, dual_cohamming, dual_hamming, dual_spike, dual_threshold_ball,
    dual_threshold_indicator, n2_optimal, primal_candidate, threshold_zero_certificate, N2Regime, PrimalFamily,
};
use fgum::f2lin::{binomial, is_universal};
use fgum::lp::{complementary_slackness, solve_primal};
use fgum::profiles::{bernoulli_profile, CostFunction};
use fgum::{AmplitudeProfile, F2Matrix, F2Vec, Rational};

use common::*;

fn invertible(n: usize) -> Vec<F2Matrix> {
    full_rank_matrices(n, n).into_iter().map(|rows| F2Matrix::new(n, rows).unwrap()).collect()
}

#[test]
fn closed_form_families_are_feasible() {
    let zero = Rational::zero();
    for n in 1..=4 {
        for cert in [dual_hamming::<Rational>(n), dual_cohamming(n), dual_spike(n)] {
            let rep = cert.audit(&zero).unwrap();
            assert!(rep.feasible(), "{:?} n={n}: {:?}", cert.family, rep.violations.first());
        }
    }
    // Every affine image for n ≤ 3, a sample of them for n = 4.
    for n in 1..=4 {
        let ps = invertible(n);
        let step = if n == 4 { 997 } else { 1 };
        for (pi, p) in ps.iter().enumerate().step_by(step) {
            for v in 0..1u32 << n {
                for base in [dual_hamming::<Rational>(n), dual_spike(n)] {
                    let img = dual_affine_image(&base, p, F2Vec::new(n, v).unwrap()).unwrap();
                    assert!(img.audit(&zero).unwrap().feasible(), "n={n} P#{pi} v={v}");
                }
            }
        }
    }
}

#[test]
fn affine_image_examples() {
    let id = F2Matrix::identity(3);
    let co = dual_affine_image(&dual_hamming::<Rational>(3), &id, F2Vec::all_ones(3)).unwrap();
    assert_eq!(co.solution.b(), dual_cohamming::<Rational>(3).solution.b());
    let same = dual_affine_image(&dual_spike::<Rational>(3), &id, F2Vec::zero(3)).unwrap();
    assert_eq!(same.solution.b(), dual_spike::<Rational>(3).solution.b());
    let swap = F2Matrix::parse("01;10", 2).unwrap();
    let sp = dual_affine_image(&dual_spike::<Rational>(2), &swap, F2Vec::zero(2)).unwrap();
    assert_eq!(sp.solution.b(), dual_spike::<Rational>(2).solution.b());
    assert!(dual_affine_image(&dual_spike::<Rational>(2), &F2Matrix::parse("11;11", 2).unwrap(), F2Vec::zero(2)).is_err());
}

#[test]
fn threshold_duals_feasible() {
    let zero = Rational::zero();
    for n in 1..=4 {
        for tau in 1..=n {
            // Complements of single points are τ-universal only when τ ≥ 1; check via the predicate.
            for hole in 0..1u32 << n {
                let set: Vec<u32> = (0..1u32 << n).filter(|&x| x != hole).collect();
                if is_universal(&set, tau, n).unwrap() {
                    let c = dual_threshold_indicator::<Rational>(&set, tau, n).unwrap();
                    assert!(c.audit(&zero).unwrap().feasible());
                } else {
                    assert!(dual_threshold_indicator::<Rational>(&set, tau, n).is_err());
                }
            }
        }
        for d in 0..n {
            for gamma in [2.5, 3.0, 4.0] {
                if let Ok(c) = dual_threshold_ball::<Rational>(n, d, gamma) {
                    assert!(c.audit(&zero).unwrap().feasible());
                }
            }
        }
    }
}

#[test]
fn ball_examples() {
    assert_eq!(ball_constant(3, 1).unwrap(), r(2, 1));
    for tau in 1..=5 {
        let two = 1i64 << tau;
        assert_eq!(ball_constant(tau, 0).unwrap(), r(two, two - 1));
    }
    let p = bernoulli_profile(4, 0.05).unwrap();
    let c = dual_threshold_ball::<f64>(4, 1, 3.0).unwrap();
    assert!((c.objective(&p) - 2.0 * p.tail_mass::<f64>(1)).abs() < 1e-12);
}

#[test]
fn weak_duality_random() {
    let mut g = rng(21);
    for n in 1..=3 {
        for _ in 0..34 {
            let p = random_profile(&mut g, n);
            let (rep, _) = solve_primal::<Rational>(&p, &CostFunction::average(n)).unwrap();
            let rho = rep.objective.unwrap();
            for cert in [dual_hamming::<Rational>(n), dual_cohamming(n), dual_spike(n)] {
                assert!(cert.objective(&p) >= rho);
            }
        }
    }
}

#[test]
fn nonnegative_candidates_are_certified() {
    let mut g = rng(22);
    let mut profiles: Vec<AmplitudeProfile> = (1..=3).flat_map(|n| (0..20).map(|_| random_profile(&mut g, n)).collect::<Vec<_>>()).collect();
    for n in 1..=3 {
        for (a, b) in [(1, 5), (1, 3), (2, 5), (3, 5), (4, 5)] {
            profiles.push(AmplitudeProfile::product(n, &r(a, b)).unwrap());
        }
    }
    let mut certified = [0usize; 3];
    for p in &profiles {
        let n = p.n();
        let (rep, _) = solve_primal::<Rational>(p, &CostFunction::average(n)).unwrap();
        let rho = rep.objective.unwrap();
        for (fi, fam) in [PrimalFamily::Hamming, PrimalFamily::Cohamming, PrimalFamily::Spike].into_iter().enumerate() {
            let cand = primal_candidate::<Rational>(fam, p).unwrap();
            if !cand.nonnegative {
                continue;
            }
            let dual = fam.paired_dual::<Rational>(n);
            let cs = complementary_slackness(&cand.solution, &dual.solution, p, &CostFunction::average(n), &Rational::zero()).unwrap();
            assert!(cs.certified, "{fam:?} on {:?}", p.to_json());
            assert_eq!(cand.objective, dual.objective(p));
            assert_eq!(cand.objective, rho);
            certified[fi] += 1;
        }
    }
    assert!(certified.iter().all(|&c| c > 0), "{certified:?}");
}

#[test]
fn candidate_examples() {
    let p = AmplitudeProfile::from_exact(2, vec![r(1, 20), r(3, 20), r(3, 10), r(1, 2)]).unwrap();
    let co = primal_candidate::<Rational>(PrimalFamily::Cohamming, &p).unwrap();
    assert!(co.nonnegative);
    assert_eq!(co.objective, r(11, 10));
    assert!(!primal_candidate::<Rational>(PrimalFamily::Spike, &p).unwrap().nonnegative);
    let q = AmplitudeProfile::from_exact(2, vec![r(1, 20), r(3, 10), r(3, 10), r(7, 20)]).unwrap();
    let sp = primal_candidate::<Rational>(PrimalFamily::Spike, &q).unwrap();
    assert!(sp.nonnegative);
    assert_eq!(sp.objective, r(6, 5));
}

#[test]
fn count_n_matches_brute_force() {
    for n in 0..=5 {
        for k in 0..=n {
            for i in 0..1u32 << n {
                for x in 0..1u32 << n {
                    assert_eq!(count_n(k, i, x, n), brute_count_n(k, i, x, n), "k={k} i={i} x={x} n={n}");
                }
            }
        }
    }
}

#[test]
fn affine_ball_intersection_bound() {
    for n in 1..=5 {
        for k in 0..=n {
            for a in affine_subspaces(n, k) {
                for d in 0..=n {
                    let inside = a.iter().filter(|&&x| popcount(x) <= d).count() as u64;
                    let bound: u64 = (0..=d.min(k)).map(|j| binomial(k, j)).sum();
                    assert!(inside <= bound);
                }
            }
        }
    }
}

#[test]
fn minimum_average_weight() {
    for n in 1..=5 {
        for k in 0..=n {
            for a in affine_subspaces(n, k) {
                let total: usize = a.iter().map(|&x| 2 * popcount(x)).sum();
                assert!(total >= k << k);
            }
        }
    }
}

#[test]
fn n2_rule_matches_lp() {
    let mut g = rng(23);
    for _ in 0..200 {
        let p = random_profile(&mut g, 2);
        let res = n2_optimal::<Rational>(&p).unwrap();
        let (rep, _) = solve_primal::<Rational>(&p, &CostFunction::average(2)).unwrap();
        assert_eq!(res.value, rep.objective.unwrap());
        for c in &res.certificates {
            assert!(c.audit(&Rational::zero()).unwrap().feasible());
            assert_eq!(c.objective(&p), res.value);
        }
    }
    let u = n2_optimal::<Rational>(&AmplitudeProfile::uniform(2).unwrap()).unwrap();
    assert_eq!(u.regime, N2Regime::Boundary);
    assert_eq!(u.value, r(2, 1));
    assert_eq!(u.certificates.len(), 2);
}

#[test]
fn threshold_certificates() {
    let pm = AmplitudeProfile::point_mass(2, 0).unwrap();
    let c = threshold_zero_certificate(&pm, 1).unwrap();
    assert!(c.rho_is_zero() && c.consistent);
    let mut g = rng(24);
    for n in 1..=4 {
        let p = random_profile(&mut g, n);
        for tau in 1..=n {
            let c = threshold_zero_certificate(&p, tau).unwrap();
            assert!(!c.rho_is_zero() && c.consistent);
            assert!(c.avoiding.is_some());
        }
    }
}
