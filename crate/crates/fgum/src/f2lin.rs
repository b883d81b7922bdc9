//! GF(2) linear algebra on bit-packed vectors, canonical parity codes and
//! their dual cosets.
//!
//! Vectors are `u32` words internally; [`F2Vec`] carries the dimension for
//! the public API and for printing. Canonical form for a row space is the
//! reduced row-echelon basis where each row's pivot is its lowest set bit,
//! pivot columns are cleared in every other row, and rows are sorted by pivot.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub const MAX_N: usize = 16;
/// Largest n accepted by [`enumerate_codes`].
pub const CODE_BUDGET: usize = 8;
/// Largest n accepted by [`is_universal`].
pub const UNIVERSAL_BUDGET: usize = 6;

#[inline]
pub fn weight(x: u32) -> usize {
    x.count_ones() as usize
}

/// Inner product over F_2.
#[inline]
pub fn dot(a: u32, b: u32) -> bool {
    (a & b).count_ones() & 1 == 1
}

#[inline]
pub fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

#[inline]
pub fn ones(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// MSB-first binary string of length `n`.
pub fn bit_string(bits: u32, n: usize) -> String {
    (0..n).rev().map(|j| if bits >> j & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str, n: usize) -> Result<u32> {
    let t = s.trim();
    if t.len() != n || !t.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Parse(format!("expected a {n}-bit string, got {s:?}")));
    }
    Ok(if n == 0 { 0 } else { u32::from_str_radix(t, 2).map_err(|e| Error::Parse(e.to_string()))? })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct F2Vec {
    n: u8,
    bits: u32,
}

impl F2Vec {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Budget { what: "vector dimension", n, limit: MAX_N });
        }
        if bits > ones(n) {
            return Err(Error::Dimension(format!("bits {bits:#b} do not fit in {n} coordinates")));
        }
        Ok(F2Vec { n: n as u8, bits })
    }

    pub fn zero(n: usize) -> Self {
        F2Vec { n: n as u8, bits: 0 }
    }

    pub fn all_ones(n: usize) -> Self {
        F2Vec { n: n as u8, bits: ones(n) }
    }

    /// Unit vector e_j, 1-based coordinate.
    pub fn unit(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= n);
        F2Vec { n: n as u8, bits: 1 << (j - 1) }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Coordinate x_j, 1-based.
    pub fn get(&self, j: usize) -> bool {
        self.bits >> (j - 1) & 1 == 1
    }

    pub fn hamming_weight(&self) -> usize {
        weight(self.bits)
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        dot(self.bits, other.bits)
    }

    pub fn add(&self, other: &F2Vec) -> F2Vec {
        debug_assert_eq!(self.n, other.n);
        F2Vec { n: self.n, bits: self.bits ^ other.bits }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        F2Vec::new(t.len(), parse_bits(t, t.len())?)
    }
}

impl fmt::Display for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bit_string(self.bits, self.n()))
    }
}

impl FromStr for F2Vec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        F2Vec::parse(s)
    }
}

impl Serialize for F2Vec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for F2Vec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        F2Vec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Rows are bit-packed like vectors: row r dotted with x gives (Mx)_r.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Matrix {
    n_cols: usize,
    rows: Vec<u32>,
}

impl F2Matrix {
    pub fn new(n_cols: usize, rows: Vec<u32>) -> Result<Self> {
        if n_cols > MAX_N {
            return Err(Error::Budget { what: "matrix width", n: n_cols, limit: MAX_N });
        }
        if let Some(r) = rows.iter().find(|&&r| r > ones(n_cols)) {
            return Err(Error::Dimension(format!("row {r:#b} wider than {n_cols} columns")));
        }
        Ok(F2Matrix { n_cols, rows })
    }

    pub fn empty(n_cols: usize) -> Self {
        F2Matrix { n_cols, rows: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { n_cols: n, rows: (0..n).map(|j| 1u32 << j).collect() }
    }

    pub fn from_vecs(n_cols: usize, rows: &[F2Vec]) -> Result<Self> {
        if rows.iter().any(|r| r.n() != n_cols) {
            return Err(Error::Dimension("rows of unequal length".into()));
        }
        F2Matrix::new(n_cols, rows.iter().map(|r| r.bits()).collect())
    }

    /// Rows as MSB-first bit strings separated by `;` or `,`, e.g. `"10;01"`.
    /// The empty string is the 0×n matrix.
    pub fn parse(s: &str, n_cols: usize) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Ok(F2Matrix::empty(n_cols));
        }
        let rows = t.split([';', ',']).map(|r| parse_bits(r, n_cols)).collect::<Result<Vec<_>>>()?;
        F2Matrix::new(n_cols, rows)
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn row_vecs(&self) -> Vec<F2Vec> {
        self.rows.iter().map(|&r| F2Vec { n: self.n_cols as u8, bits: r }).collect()
    }

    /// M·x, bit r of the result is row_r · x.
    pub fn mul_vec(&self, x: u32) -> u32 {
        self.rows.iter().enumerate().fold(0, |acc, (r, &row)| acc | (dot(row, x) as u32) << r)
    }

    /// Mᵀ·u: sum of the rows selected by the bits of u.
    pub fn transpose_mul(&self, u: u32) -> u32 {
        self.rows.iter().enumerate().filter(|(r, _)| u >> r & 1 == 1).fold(0, |acc, (_, &row)| acc ^ row)
    }

    pub fn rank(&self) -> usize {
        rref_rows(&self.rows, self.n_cols).len()
    }

    pub fn is_invertible(&self) -> bool {
        self.n_rows() == self.n_cols && self.rank() == self.n_cols
    }

    /// Canonical basis of the row space.
    pub fn rref(&self) -> F2Matrix {
        F2Matrix { n_cols: self.n_cols, rows: rref_rows(&self.rows, self.n_cols) }
    }

    /// All 2^rank elements of the row space, in the order of `transpose_mul(u)` for u ascending.
    pub fn span(&self) -> Vec<u32> {
        (0..1u32 << self.rows.len()).map(|u| self.transpose_mul(u)).collect()
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Result<F2Matrix> {
        if !self.is_invertible() {
            return Err(Error::Singular);
        }
        let n = self.n_cols;
        // Columns of the inverse: solve M z = e_j by brute force over the image table.
        let mut pre = vec![0u32; 1 << n];
        for z in 0..1u32 << n {
            pre[self.mul_vec(z) as usize] = z;
        }
        let cols: Vec<u32> = (0..n).map(|j| pre[1 << j]).collect();
        let rows = (0..n).map(|r| (0..n).fold(0u32, |acc, j| acc | (cols[j] >> r & 1) << j)).collect();
        Ok(F2Matrix { n_cols: n, rows })
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|&r| bit_string(r, self.n_cols)).collect();
        write!(f, "({})", rows.join(";"))
    }
}

impl Serialize for F2Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<String> = self.rows.iter().map(|&r| bit_string(r, self.n_cols)).collect();
        rows.serialize(s)
    }
}

fn rref_rows(rows: &[u32], n_cols: usize) -> Vec<u32> {
    let mut m: Vec<u32> = rows.iter().copied().filter(|&r| r != 0).collect();
    let mut r = 0;
    for col in 0..n_cols {
        let bit = 1u32 << col;
        let Some(p) = (r..m.len()).find(|&i| m[i] & bit != 0) else { continue };
        m.swap(r, p);
        let piv = m[r];
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= piv;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

pub fn rank(m: &F2Matrix) -> usize {
    m.rank()
}

/// Canonical generator G of Ker(H) for a full-rank H.
pub fn kernel_generator(h: &F2Matrix) -> Result<F2Matrix> {
    let n = h.n_cols;
    let r = h.rref();
    if r.n_rows() != h.n_rows() {
        return Err(Error::RankDeficient { rank: r.n_rows(), rows: h.n_rows() });
    }
    let pivots: Vec<u32> = r.rows.iter().map(|&row| row & row.wrapping_neg()).collect();
    let pivot_mask = pivots.iter().fold(0, |a, &p| a | p);
    let mut basis = Vec::with_capacity(n - r.n_rows());
    for f in (0..n).map(|c| 1u32 << c).filter(|c| c & pivot_mask == 0) {
        let v = r.rows.iter().zip(&pivots).filter(|(row, _)| *row & f != 0).fold(f, |acc, (_, &p)| acc | p);
        basis.push(v);
    }
    Ok(F2Matrix { n_cols: n, rows: rref_rows(&basis, n) })
}

/// A row space of F_2^n with its canonical parity matrix H (k rows) and
/// canonical kernel generator G (n−k rows).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParityCode {
    n: usize,
    h: F2Matrix,
    g: F2Matrix,
}

impl ParityCode {
    pub fn from_matrix(h: &F2Matrix) -> Result<Self> {
        let g = kernel_generator(h)?;
        Ok(ParityCode { n: h.n_cols, h: h.rref(), g })
    }

    /// The rank-0 code: empty H, G = I_n.
    pub fn bottom(n: usize) -> Self {
        ParityCode { n, h: F2Matrix::empty(n), g: F2Matrix::identity(n) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.h.n_rows()
    }

    pub fn h(&self) -> &F2Matrix {
        &self.h
    }

    pub fn g(&self) -> &F2Matrix {
        &self.g
    }

    /// G·x, the label of the dual coset containing x.
    pub fn syndrome(&self, x: u32) -> u32 {
        self.g.mul_vec(x)
    }

    /// H·x.
    pub fn parity(&self, x: u32) -> u32 {
        self.h.mul_vec(x)
    }

    pub fn cosets(&self) -> CosetPartition {
        dual_cosets(self)
    }
}

impl fmt::Display for ParityCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k() == 0 {
            write!(f, "⊥")
        } else {
            write!(f, "{}", self.h)
        }
    }
}

impl Serialize for ParityCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.h.serialize(s)
    }
}

/// Dual cosets D_H(s) = {x : G·x = s}, indexed by syndrome.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CosetPartition {
    pub n: usize,
    pub k: usize,
    /// Syndrome of every x in F_2^n.
    pub syndrome_of: Vec<u32>,
    /// Sorted members of each coset.
    pub members: Vec<Vec<u32>>,
    pub r_min: Vec<u32>,
    pub r_max: Vec<u32>,
}

impl CosetPartition {
    pub fn num_cosets(&self) -> usize {
        self.members.len()
    }

    pub fn coset(&self, s: u32) -> &[u32] {
        &self.members[s as usize]
    }
}

pub fn dual_cosets(code: &ParityCode) -> CosetPartition {
    let n = code.n;
    let k = code.k();
    let syndrome_of: Vec<u32> = (0..1u32 << n).map(|x| code.syndrome(x)).collect();
    let mut members = vec![Vec::with_capacity(1 << k); 1 << (n - k)];
    for (x, &s) in syndrome_of.iter().enumerate() {
        members[s as usize].push(x as u32);
    }
    // Members are pushed in increasing order, so the first extremum found wins ties.
    let r_min = members.iter().map(|m| *m.iter().min_by_key(|&&x| weight(x)).unwrap()).collect();
    let r_max = members
        .iter()
        .map(|m| *m.iter().rev().max_by_key(|&&x| weight(x)).unwrap())
        .collect();
    CosetPartition { n, k, syndrome_of, members, r_min, r_max }
}

/// Gaussian binomial coefficient [n choose k]_2.
pub fn gaussian_binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    (num / den) as u64
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// One canonical code per k-dimensional row space of F_2^n.
pub fn enumerate_codes(n: usize, k: usize) -> Result<Vec<ParityCode>> {
    if n > CODE_BUDGET {
        return Err(Error::Budget { what: "code enumeration", n, limit: CODE_BUDGET });
    }
    if k > n {
        return Err(Error::InvalidArgument(format!("rank {k} exceeds n = {n}")));
    }
    let mut out = Vec::with_capacity(gaussian_binomial(n, k) as usize);
    for pivots in combinations(n, k) {
        let pivot_mask = pivots.iter().fold(0u32, |a, &p| a | 1 << p);
        // Free positions of each row: non-pivot columns above its pivot.
        let free: Vec<Vec<usize>> =
            pivots.iter().map(|&p| (p + 1..n).filter(|c| pivot_mask >> c & 1 == 0).collect()).collect();
        let total_free: usize = free.iter().map(Vec::len).sum();
        for assignment in 0..1u64 << total_free {
            let mut bit = 0;
            let rows: Vec<u32> = pivots
                .iter()
                .zip(&free)
                .map(|(&p, fr)| {
                    let mut row = 1u32 << p;
                    for &c in fr {
                        if assignment >> bit & 1 == 1 {
                            row |= 1 << c;
                        }
                        bit += 1;
                    }
                    row
                })
                .collect();
            let h = F2Matrix { n_cols: n, rows };
            let g = kernel_generator(&h).expect("echelon rows are independent");
            out.push(ParityCode { n, h, g });
        }
    }
    Ok(out)
}

/// All codes of every rank 0..=n, rank-major.
pub fn enumerate_all_codes(n: usize) -> Result<Vec<ParityCode>> {
    let mut v = Vec::new();
    for k in 0..=n {
        v.extend(enumerate_codes(n, k)?);
    }
    Ok(v)
}

/// k-subsets of {0..n-1} in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// E_k^n: the k-row submatrices of the identity, rows in increasing index order.
pub fn enumerate_identity_rows(n: usize, k: usize) -> Vec<F2Matrix> {
    combinations(n, k)
        .into_iter()
        .map(|s| F2Matrix { n_cols: n, rows: s.into_iter().map(|j| 1u32 << j).collect() })
        .collect()
}

/// Σ_{c∈C} (−1)^{v·c} for the code C spanned by the rows of `gen`.
pub fn char_sum(gen: &F2Matrix, v: F2Vec) -> i64 {
    gen.rref().span().into_iter().map(|c| sign(dot(c, v.bits()))).sum()
}

/// Whether `u` meets every affine subspace of dimension `tau` in F_2^n.
pub fn is_universal(u: &[u32], tau: usize, n: usize) -> Result<bool> {
    Ok(avoiding_subspace(u, tau, n)?.is_none())
}

/// An affine τ-subspace disjoint from `u`, as (code of rank τ, syndrome), if one exists.
/// The cosets of a rank-τ code are exactly the translates of its τ-dimensional row space.
pub fn avoiding_subspace(u: &[u32], tau: usize, n: usize) -> Result<Option<(ParityCode, u32)>> {
    if n > UNIVERSAL_BUDGET {
        return Err(Error::Budget { what: "universality check", n, limit: UNIVERSAL_BUDGET });
    }
    if tau == 0 || tau > n {
        return Err(Error::InvalidArgument(format!("tau = {tau} outside [1, {n}]")));
    }
    let mut inside = vec![false; 1 << n];
    for &x in u {
        if x as usize >= inside.len() {
            return Err(Error::Dimension(format!("element {x} outside F_2^{n}")));
        }
        inside[x as usize] = true;
    }
    for code in enumerate_codes(n, tau)? {
        let mut hit = vec![false; 1 << (n - tau)];
        for x in 0..1u32 << n {
            if inside[x as usize] {
                hit[code.syndrome(x) as usize] = true;
            }
        }
        if let Some(s) = hit.iter().position(|&h| !h) {
            return Ok(Some((code, s as u32)));
        }
    }
    Ok(None)
}
