//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! crate's enumeration, RREF or coset code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fgum::lp::{solve, LpModel, Relation, Sense, Status, VarLabel};
use fgum::{AmplitudeProfile, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

pub fn popcount(x: u32) -> usize {
    x.count_ones() as usize
}

pub fn parity(x: u32) -> bool {
    x.count_ones() % 2 == 1
}

/// Integer weights in 1..=max, normalized.
pub fn random_weights(rng: &mut ChaCha8Rng, n: usize, max: i64) -> Vec<Rational> {
    let raw: Vec<i64> = (0..1 << n).map(|_| rng.gen_range(1..=max)).collect();
    let total: i64 = raw.iter().sum();
    raw.iter().map(|&x| r(x, total)).collect()
}

pub fn random_profile(rng: &mut ChaCha8Rng, n: usize) -> AmplitudeProfile {
    AmplitudeProfile::from_exact(n, random_weights(rng, n, 20)).unwrap()
}

/// Attaches amplitudes √w·e^{iθ} with random phases.
pub fn with_random_phases(rng: &mut ChaCha8Rng, p: AmplitudeProfile) -> AmplitudeProfile {
    let amps: Vec<Complex64> = (0..p.dim() as u32)
        .map(|i| Complex64::from_polar(p.weight_f64(i).sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    p.with_amplitudes(amps).unwrap()
}

fn closure(set: &BTreeSet<u32>, v: u32) -> BTreeSet<u32> {
    let mut out = set.clone();
    for &x in set {
        out.insert(x ^ v);
    }
    out
}

/// All linear subspaces of F_2^n grouped by dimension, grown one vector at a time.
pub fn subspaces(n: usize) -> Vec<Vec<BTreeSet<u32>>> {
    let mut by_dim: Vec<Vec<BTreeSet<u32>>> = vec![vec![BTreeSet::from([0u32])]];
    for _ in 0..n {
        let mut next: BTreeSet<BTreeSet<u32>> = BTreeSet::new();
        for s in by_dim.last().unwrap() {
            for v in 0..1u32 << n {
                if !s.contains(&v) {
                    next.insert(closure(s, v));
                }
            }
        }
        by_dim.push(next.into_iter().collect());
    }
    by_dim
}

/// Greedy basis of a subspace given by its elements.
pub fn basis(space: &BTreeSet<u32>) -> Vec<u32> {
    let mut span = BTreeSet::from([0u32]);
    let mut out = Vec::new();
    for &v in space {
        if !span.contains(&v) {
            span = closure(&span, v);
            out.push(v);
        }
    }
    out
}

/// All affine subspaces of dimension k (translates of k-dim subspaces), deduplicated.
pub fn affine_subspaces(n: usize, k: usize) -> Vec<BTreeSet<u32>> {
    let mut out = BTreeSet::new();
    for s in &subspaces(n)[k] {
        for a in 0..1u32 << n {
            out.insert(s.iter().map(|&x| x ^ a).collect::<BTreeSet<u32>>());
        }
    }
    out.into_iter().collect()
}

pub fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, j| acc * (n - j) as u64 / (j + 1) as u64)
}

/// #{S ⊆ [n], |S| = k : H = I_S has i ∈ D_H(1…1) and x = r_min of its coset}.
pub fn brute_count_n(k: usize, i: u32, x: u32, n: usize) -> u64 {
    let full = (1u32 << n) - 1;
    let mut count = 0;
    for s in 0..1u32 << n {
        if popcount(s) != k {
            continue;
        }
        let comp = full & !s;
        // G = rows e_j for j ∉ S: the syndrome of i is i restricted to S^c.
        if i & comp != comp {
            continue;
        }
        let coset: Vec<u32> = (0..1u32 << n).filter(|&y| y & comp == x & comp).collect();
        let leader = *coset.iter().min_by_key(|&&y| (popcount(y), y)).unwrap();
        if leader == x {
            count += 1;
        }
    }
    count
}

/// U meets every affine τ-subspace.
pub fn brute_universal(u: &[u32], tau: usize, n: usize) -> bool {
    let set: BTreeSet<u32> = u.iter().copied().collect();
    affine_subspaces(n, tau).iter().all(|a| a.iter().any(|x| set.contains(x)))
}

/// Dual constraint rows Σ_{i∈V} b_i ≥ C(k)·2^k over all affine k-subspaces V.
pub fn dual_rows(n: usize, cost: &[Rational]) -> Vec<(Vec<u32>, Rational)> {
    let mut rows = Vec::new();
    for k in 0..=n {
        for a in affine_subspaces(n, k) {
            rows.push((a.into_iter().collect(), cost[k].clone() * Rational::from_integer((1i64 << k).into())));
        }
    }
    rows
}

fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..m {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..m {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                }
                let t = &f * &b[col];
                b[r] -= t;
            }
        }
    }
    Some(b)
}

fn choose(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in start..m {
        if m - i < k - cur.len() {
            break;
        }
        cur.push(i);
        choose(m, k, i + 1, cur, f);
        cur.pop();
    }
}

/// Dual optimum by enumerating every vertex of {b ≥ 0, A b ≥ r}. Exponential: n ≤ 2.
pub fn dual_vertex_optimum(n: usize, w: &[Rational], cost: &[Rational]) -> Rational {
    assert!(n <= 2);
    let dim = 1usize << n;
    let mut rows: Vec<(Vec<Rational>, Rational)> = dual_rows(n, cost)
        .into_iter()
        .map(|(set, rhs)| {
            let mut a = vec![Rational::zero(); dim];
            for i in set {
                a[i as usize] = Rational::one();
            }
            (a, rhs)
        })
        .collect();
    for i in 0..dim {
        let mut a = vec![Rational::zero(); dim];
        a[i] = Rational::one();
        rows.push((a, Rational::zero()));
    }
    let mut best: Option<Rational> = None;
    choose(rows.len(), dim, 0, &mut Vec::new(), &mut |idx| {
        let a = idx.iter().map(|&j| rows[j].0.clone()).collect();
        let b = idx.iter().map(|&j| rows[j].1.clone()).collect();
        let Some(x) = solve_square(a, b) else { return };
        let feasible = rows.iter().all(|(a, rhs)| {
            let lhs: Rational = a.iter().zip(&x).map(|(u, v)| u * v).sum();
            lhs >= *rhs
        });
        if feasible {
            let obj: Rational = w.iter().zip(&x).map(|(u, v)| u * v).sum();
            if best.as_ref().map_or(true, |b| obj < *b) {
                best = Some(obj);
            }
        }
    });
    best.expect("dual polytope has a vertex")
}

/// Full-rank k×n matrices as row lists (every ordering and every basis).
pub fn full_rank_matrices(n: usize, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, k: usize, cur: &mut Vec<u32>, span: &BTreeSet<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 1..1u32 << n {
            if span.contains(&v) {
                continue;
            }
            cur.push(v);
            rec(n, k, cur, &closure(span, v), out);
            cur.pop();
        }
    }
    rec(n, k, &mut cur, &BTreeSet::from([0u32]), &mut out);
    out
}

/// The per-index program with one λ_i^H per matrix H (duplicates included) and
/// explicit constancy constraints λ_i w_i = λ_j w_j on each coset of the row space.
pub fn literal_primal(n: usize, w: &[Rational], cost: &[Rational]) -> Rational {
    let mut m = LpModel::<Rational>::new(Sense::Max);
    let mut per_index: Vec<Vec<usize>> = vec![Vec::new(); 1 << n];
    for k in 0..=n {
        for (hi, rows) in full_rank_matrices(n, k).into_iter().enumerate() {
            let mut span = BTreeSet::from([0u32]);
            for &v in &rows {
                span = closure(&span, v);
            }
            let vars: Vec<usize> = (0..1u32 << n)
                .map(|i| {
                    let v = m.add_var(VarLabel::Named(format!("l[{k}.{hi}][{i}]")), cost[k].clone() * w[i as usize].clone());
                    per_index[i as usize].push(v);
                    v
                })
                .collect();
            // Constancy along each coset i + span.
            for i in 0..1u32 << n {
                let rep = span.iter().map(|&s| s ^ i).min().unwrap();
                if rep != i {
                    let coeffs = vec![(vars[i as usize], w[i as usize].clone()), (vars[rep as usize], -w[rep as usize].clone())];
                    m.add_constraint(coeffs, Relation::Eq, Rational::zero(), "const");
                }
            }
        }
    }
    for (i, vars) in per_index.iter().enumerate() {
        if !w[i].is_zero() {
            m.add_constraint(vars.iter().map(|&v| (v, Rational::one())).collect(), Relation::Eq, Rational::one(), "sum");
        }
    }
    let rep = solve(&m).unwrap();
    assert_eq!(rep.status, Status::Optimal);
    rep.objective.unwrap()
}

pub fn cost_values(c: &fgum::CostFunction) -> Vec<Rational> {
    c.values().to_vec()
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

pub fn random_phased_profile(rng: &mut ChaCha8Rng, n: usize) -> AmplitudeProfile {
    let p = random_profile(rng, n);
    with_random_phases(rng, p)
}
