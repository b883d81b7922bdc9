mod common;

use std::collections::BTreeSet;

use fgum::f2lin::{
    avoiding_subspace, char_sum, enumerate_all_codes, enumerate_codes, enumerate_identity_rows, gaussian_binomial,
    is_universal,
};
use fgum::{F2Matrix, F2Vec, ParityCode};
use proptest::prelude::*;

use common::*;

#[test]
fn codes_match_naive_subspaces() {
    for n in 0..=5 {
        let naive = subspaces(n);
        for k in 0..=n {
            let codes = enumerate_codes(n, k).unwrap();
            assert_eq!(codes.len() as u64, gaussian_binomial(n, k));
            let got: BTreeSet<BTreeSet<u32>> = codes.iter().map(|c| c.h().span().into_iter().collect()).collect();
            let want: BTreeSet<BTreeSet<u32>> = naive[k].iter().cloned().collect();
            assert_eq!(got, want, "n={n} k={k}");
        }
    }
}

#[test]
fn parity_kernel_relations() {
    for n in 1..=5 {
        for code in enumerate_all_codes(n).unwrap() {
            let (h, g) = (code.h(), code.g());
            for &hr in h.rows() {
                for &gr in g.rows() {
                    assert!(!parity(hr & gr), "H·Gᵀ ≠ 0 for {code}");
                }
            }
            assert_eq!(h.rank() + g.rank(), n);
        }
    }
}

#[test]
fn coset_partition_properties() {
    for n in 1..=5 {
        for code in enumerate_all_codes(n).unwrap() {
            let part = code.cosets();
            let k = code.k();
            let mut seen = vec![false; 1 << n];
            for s in 0..part.num_cosets() {
                let members = part.coset(s as u32);
                assert_eq!(members.len(), 1 << k);
                for &x in members {
                    assert!(!seen[x as usize]);
                    seen[x as usize] = true;
                    assert_eq!(code.syndrome(x), s as u32);
                }
                let lo = members.iter().min_by_key(|&&x| (popcount(x), x)).unwrap();
                let hi = members.iter().max_by_key(|&&x| (popcount(x), std::cmp::Reverse(x))).unwrap();
                assert_eq!(part.r_min[s], *lo);
                assert_eq!(part.r_max[s], *hi);
            }
            assert!(seen.iter().all(|&b| b));
        }
    }
}

#[test]
fn identity_row_leaders() {
    // For H = I_S the minimal leader is zero on S and agrees with the syndrome elsewhere.
    for n in 1..=5 {
        for k in 0..=n {
            for h in enumerate_identity_rows(n, k) {
                let code = ParityCode::from_matrix(&h).unwrap();
                let s_mask: u32 = h.rows().iter().fold(0, |a, &r| a | r);
                let part = code.cosets();
                for s in 0..part.num_cosets() {
                    let leader = part.r_min[s];
                    assert_eq!(leader & s_mask, 0);
                    // The unique weight-minimal element.
                    let members = part.coset(s as u32);
                    let wmin = members.iter().map(|&x| popcount(x)).min().unwrap();
                    assert_eq!(members.iter().filter(|&&x| popcount(x) == wmin).count(), 1);
                }
            }
        }
    }
}

#[test]
fn code_sum_exhaustive() {
    for n in 0..=4 {
        for by_dim in subspaces(n) {
            for space in by_dim {
                let gen = F2Matrix::new(n, basis(&space)).unwrap();
                for v in 0..1u32 << n {
                    let sum = char_sum(&gen, F2Vec::new(n, v).unwrap());
                    let dual = space.iter().all(|&c| !parity(c & v));
                    let want = if dual { space.len() as i64 } else { 0 };
                    assert_eq!(sum, want);
                }
            }
        }
    }
}

#[test]
fn universality_exhaustive_small() {
    for n in 1..=3 {
        for mask in 0u64..1 << (1 << n) {
            let u: Vec<u32> = (0..1u32 << n).filter(|&x| mask >> x & 1 == 1).collect();
            for tau in 1..=n {
                let got = is_universal(&u, tau, n).unwrap();
                assert_eq!(got, brute_universal(&u, tau, n), "U={u:?} tau={tau}");
                if let Some((code, s)) = avoiding_subspace(&u, tau, n).unwrap() {
                    assert!(code.cosets().coset(s).iter().all(|x| !u.contains(x)));
                }
            }
        }
    }
}

fn matrix(n: usize) -> impl Strategy<Value = F2Matrix> {
    (0..=n).prop_flat_map(move |m| prop::collection::vec(0..1u32 << n, m)).prop_map(move |rows| F2Matrix::new(n, rows).unwrap())
}

proptest! {
    #[test]
    fn rref_is_a_row_space_invariant(m in matrix(6), mix in prop::collection::vec(any::<bool>(), 36)) {
        // Adding rows to each other preserves the row space, hence the canonical form.
        let mut rows = m.rows().to_vec();
        let r = rows.len();
        for (t, &flip) in mix.iter().enumerate() {
            let (a, b) = (t % 6, t / 6);
            if flip && a < r && b < r && a != b {
                rows[a] ^= rows[b];
            }
        }
        let m2 = F2Matrix::new(6, rows).unwrap();
        prop_assert_eq!(m.rref(), m2.rref());
        prop_assert_eq!(m.rank(), m.rref().n_rows());
    }

    #[test]
    fn inverse_roundtrip(rows in prop::collection::vec(0..1u32 << 5, 5)) {
        let m = F2Matrix::new(5, rows).unwrap();
        match m.inverse() {
            Ok(inv) => {
                for x in 0..32u32 {
                    prop_assert_eq!(inv.mul_vec(m.mul_vec(x)), x);
                }
            }
            Err(_) => prop_assert!(m.rank() < 5),
        }
    }

    #[test]
    fn char_sum_values(m in matrix(5), v in 0..32u32) {
        let s = char_sum(&m, F2Vec::new(5, v).unwrap());
        let size = 1i64 << m.rank();
        prop_assert!(s == 0 || s == size);
    }

    #[test]
    fn vector_text_roundtrip(n in 1usize..=16, bits in any::<u32>()) {
        let v = F2Vec::new(n, bits & ((1u64 << n) - 1) as u32).unwrap();
        prop_assert_eq!(F2Vec::parse(&v.to_string()).unwrap(), v);
    }
}
