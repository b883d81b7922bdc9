//! Explicit fine-grained unambiguous POVMs built from primal solutions, and
//! numerical checks of their defining properties.
//!
//! F_{H,y} = Σ_s (μ_s^H / 2^k)·|A_s⟩⟨A_s| with
//! A_s = Σ_u conj(α̂_{Hᵀu+v_s})^{-1}·(−1)^{y·u}·|hat(Hᵀu+v_s)⟩ and v_s = r_min(s);
//! F_⊥ = I − Σ F_{H,y}.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::f2lin::{bit_string, dot, ParityCode};
use crate::lp::{check_primal_feasible, CodeBook, PrimalSolution};
use crate::profiles::{AmplitudeProfile, CostFunction};
use crate::scalar::Scalar;
use crate::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Largest n for dense operator work.
pub const POVM_BUDGET: usize = 6;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PovmTolerances {
    pub positivity: f64,
    pub completeness: f64,
    pub unambiguity: f64,
    pub symmetry: f64,
    pub hermitian: f64,
    pub coset_constancy: f64,
}

impl Default for PovmTolerances {
    fn default() -> Self {
        PovmTolerances {
            positivity: 1e-9,
            completeness: 1e-8,
            unambiguity: 1e-10,
            symmetry: 1e-9,
            hermitian: 1e-12,
            coset_constancy: 1e-10,
        }
    }
}

/// Dense operator on (C^2)^{⊗n} in the computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct QOperator {
    pub n: usize,
    pub mat: CMat,
}

impl QOperator {
    pub fn zeros(n: usize) -> Self {
        QOperator { n, mat: CMat::zeros(1 << n, 1 << n) }
    }

    pub fn identity(n: usize) -> Self {
        QOperator { n, mat: CMat::identity(1 << n, 1 << n) }
    }

    pub fn hermitian_deviation(&self) -> f64 {
        max_abs(&(&self.mat - self.mat.adjoint()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.mat + self.mat.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(h).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// ⟨φ|F|φ⟩ (real part).
    pub fn expectation(&self, phi: &CVec) -> f64 {
        (phi.adjoint() * &self.mat * phi)[(0, 0)].re
    }

    /// X_a F X_a.
    pub fn conjugate_shift(&self, a: u32) -> QOperator {
        let d = 1usize << self.n;
        let a = a as usize;
        QOperator { n: self.n, mat: CMat::from_fn(d, d, |i, j| self.mat[(i ^ a, j ^ a)]) }
    }

    /// Matrix in the Fourier basis: W F W with W_{ij} = 2^{-n/2}(−1)^{i·j}.
    pub fn in_fourier_basis(&self) -> CMat {
        let w = hadamard(self.n);
        &w * &self.mat * &w
    }
}

fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hadamard(n: usize) -> CMat {
    let d = 1usize << n;
    let s = (d as f64).sqrt().recip();
    CMat::from_fn(d, d, |i, j| Complex64::new(if dot(i as u32, j as u32) { -s } else { s }, 0.0))
}

/// In-place unnormalized Walsh–Hadamard transform.
pub fn wht(v: &mut [Complex64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// |î⟩ in the computational basis.
pub fn fourier_vec(n: usize, i: u32) -> CVec {
    let d = 1usize << n;
    let s = (d as f64).sqrt().recip();
    CVec::from_fn(d, |j, _| Complex64::new(if dot(i, j as u32) { -s } else { s }, 0.0))
}

fn amplitudes(p: &AmplitudeProfile) -> Result<&[Complex64]> {
    if p.n() > POVM_BUDGET {
        return Err(Error::Budget { what: "dense operator", n: p.n(), limit: POVM_BUDGET });
    }
    p.amplitudes().ok_or(Error::MissingAmplitudes)
}

/// |ψ_x⟩ = Σ_i α̂_i (−1)^{i·x} |î⟩.
pub fn state_psi(p: &AmplitudeProfile, x: u32) -> Result<CVec> {
    let a = amplitudes(p)?;
    let d = a.len();
    let mut v: Vec<Complex64> = (0..d).map(|i| if dot(i as u32, x) { -a[i] } else { a[i] }).collect();
    wht(&mut v);
    let s = (d as f64).sqrt().recip();
    Ok(CVec::from_iterator(d, v.into_iter().map(|z| z * s)))
}

/// X_a|x⟩ = |x + a⟩.
pub fn shift_op(n: usize, a: u32) -> QOperator {
    let d = 1usize << n;
    QOperator { n, mat: CMat::from_fn(d, d, |i, j| if i == j ^ a as usize { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }) }
}

/// Z_a|x⟩ = (−1)^{a·x}|x⟩.
pub fn phase_op(n: usize, a: u32) -> QOperator {
    let d = 1usize << n;
    let diag = CVec::from_fn(d, |x, _| Complex64::new(if dot(a, x as u32) { -1.0 } else { 1.0 }, 0.0));
    QOperator { n, mat: CMat::from_diagonal(&diag) }
}

/// The vectors A_s, s ∈ F_2^{n−k}, for outcome (H, y).
pub fn coset_basis(p: &AmplitudeProfile, code: &ParityCode, y: u32) -> Result<Vec<CVec>> {
    let a = amplitudes(p)?;
    let n = p.n();
    if code.n() != n {
        return Err(Error::Dimension("code and profile dimensions differ".into()));
    }
    if let Some(i) = a.iter().position(|z| z.norm_sqr() == 0.0) {
        return Err(Error::ZeroWeight { index: bit_string(i as u32, n) });
    }
    let cos = code.cosets();
    let k = code.k();
    let out = (0..cos.num_cosets())
        .map(|s| {
            let v = cos.r_min[s];
            let mut fourier = vec![Complex64::new(0.0, 0.0); 1 << n];
            for u in 0..1u32 << k {
                let i = code.h().transpose_mul(u) ^ v;
                let c = a[i as usize].conj().inv();
                fourier[i as usize] = if dot(y, u) { -c } else { c };
            }
            // Σ_i c_i |î⟩ is the Walsh–Hadamard image of c.
            wht(&mut fourier);
            let sc = ((1usize << n) as f64).sqrt().recip();
            CVec::from_iterator(1 << n, fourier.into_iter().map(|z| z * sc))
        })
        .collect();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct PovmElement {
    /// Index into the set's codebook.
    pub code: usize,
    pub y: u32,
    pub op: QOperator,
}

#[derive(Clone, Debug)]
pub struct PovmSet {
    n: usize,
    book: Arc<CodeBook>,
    elements: Vec<PovmElement>,
    bottom: QOperator,
}

impl PovmSet {
    /// The trivial measurement {F_⊥ = I}.
    pub fn trivial(n: usize) -> Result<Self> {
        Ok(PovmSet { n, book: CodeBook::shared(n)?, elements: Vec::new(), bottom: QOperator::identity(n) })
    }

    pub fn from_parts(n: usize, book: Arc<CodeBook>, elements: Vec<PovmElement>, bottom: QOperator) -> Self {
        PovmSet { n, book, elements, bottom }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn book(&self) -> &Arc<CodeBook> {
        &self.book
    }

    pub fn elements(&self) -> &[PovmElement] {
        &self.elements
    }

    pub fn bottom(&self) -> &QOperator {
        &self.bottom
    }

    pub fn code(&self, e: &PovmElement) -> &ParityCode {
        &self.book.get(e.code).code
    }

    pub fn element(&self, code: usize, y: u32) -> Option<&QOperator> {
        self.elements.iter().find(|e| e.code == code && e.y == y).map(|e| &e.op)
    }

    fn index(&self) -> HashMap<(usize, u32), usize> {
        self.elements.iter().enumerate().map(|(i, e)| ((e.code, e.y), i)).collect()
    }

    /// Drops F_{code,y} and moves it into F_⊥ (keeps Γ(S) membership).
    pub fn merge_into_bottom(&mut self, code: usize, y: u32) {
        if let Some(pos) = self.elements.iter().position(|e| e.code == code && e.y == y) {
            let e = self.elements.remove(pos);
            self.bottom.mat += e.op.mat;
        }
    }

    pub fn to_json(&self) -> Value {
        let mat_json = |m: &CMat| -> Value {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect::<Vec<_>>())
                .collect()
        };
        let elements: Vec<Value> = self
            .elements
            .iter()
            .map(|e| {
                let code = self.code(e);
                json!({ "H": code.h(), "k": code.k(), "y": bit_string(e.y, code.k()), "matrix": mat_json(&e.op.mat) })
            })
            .collect();
        json!({ "n": self.n, "elements": elements, "bottom": mat_json(&self.bottom.mat) })
    }
}

/// Builds {F_{H,y}} ∪ {F_⊥} from a primal-feasible solution on a full-support profile.
pub fn build_from_primal<S: Scalar>(sol: &PrimalSolution<S>, p: &AmplitudeProfile) -> Result<PovmSet> {
    let n = p.n();
    amplitudes(p)?;
    p.require_full_support()?;
    let rep = check_primal_feasible(sol, p, &S::from_f64(1e-9))?;
    if !rep.feasible() {
        return Err(Error::Infeasible(format!("{} primal constraints violated", rep.violations.len())));
    }
    let book = sol.book().clone();
    let mut elements = Vec::new();
    let mut total = CMat::zeros(1 << n, 1 << n);
    for ci in sol.support() {
        let code = &book.get(ci).code;
        let k = code.k();
        if k == 0 {
            continue;
        }
        for y in 0..1u32 << k {
            let basis = coset_basis(p, code, y)?;
            let mut m = CMat::zeros(1 << n, 1 << n);
            for (s, a) in basis.iter().enumerate() {
                let c = sol.mu(ci, s as u32).to_f64() / (1u64 << k) as f64;
                if c != 0.0 {
                    m += a * a.adjoint() * Complex64::new(c, 0.0);
                }
            }
            total += &m;
            elements.push(PovmElement { code: ci, y, op: QOperator { n, mat: m } });
        }
    }
    let bottom = QOperator { n, mat: CMat::identity(1 << n, 1 << n) - total };
    Ok(PovmSet { n, book, elements, bottom })
}

#[derive(Clone, Debug, Serialize)]
pub struct PovmReport {
    pub tolerances: PovmTolerances,
    pub min_eigenvalue: f64,
    pub max_hermitian_deviation: f64,
    pub completeness_frobenius: f64,
    pub max_unambiguity_trace: f64,
    pub max_symmetry_deviation: f64,
    pub positive: bool,
    pub complete: bool,
    pub unambiguous: bool,
    pub symmetric: bool,
}

impl PovmReport {
    /// Membership in Γ(S): positivity, completeness, unambiguity.
    pub fn in_gamma(&self) -> bool {
        self.positive && self.complete && self.unambiguous && self.max_hermitian_deviation <= self.tolerances.hermitian
    }

    /// Membership in Γ_s(S): additionally shift-symmetric.
    pub fn in_gamma_s(&self) -> bool {
        self.in_gamma() && self.symmetric
    }
}

pub fn verify(f: &PovmSet, p: &AmplitudeProfile, tol: &PovmTolerances) -> Result<PovmReport> {
    let n = f.n;
    if p.n() != n {
        return Err(Error::Dimension("POVM and profile dimensions differ".into()));
    }
    let psis = (0..1u32 << n).map(|x| state_psi(p, x)).collect::<Result<Vec<_>>>()?;
    let all_ops = f.elements.iter().map(|e| &e.op).chain(std::iter::once(&f.bottom));

    let mut min_eig = f64::INFINITY;
    let mut herm = 0.0f64;
    let mut sum = CMat::zeros(1 << n, 1 << n);
    for op in all_ops {
        min_eig = min_eig.min(op.min_eigenvalue());
        herm = herm.max(op.hermitian_deviation());
        sum += &op.mat;
    }
    let completeness = (sum - CMat::identity(1 << n, 1 << n)).norm();

    let mut unamb = 0.0f64;
    for e in &f.elements {
        let code = f.code(e);
        for (x, psi) in psis.iter().enumerate() {
            if code.parity(x as u32) != e.y {
                unamb = unamb.max(e.op.expectation(psi).abs());
            }
        }
    }

    let idx = f.index();
    let zero = CMat::zeros(1 << n, 1 << n);
    let mut sym = 0.0f64;
    for a in 0..1u32 << n {
        for e in &f.elements {
            let code = f.code(e);
            let target = idx.get(&(e.code, e.y ^ code.parity(a))).map(|&j| &f.elements[j].op.mat).unwrap_or(&zero);
            sym = sym.max(max_abs(&(e.op.conjugate_shift(a).mat - target)));
        }
        // Codes whose y-branches are only partly present.
        for ((code, y), _) in idx.iter() {
            let c = &f.book.get(*code).code;
            let src = y ^ c.parity(a);
            if !idx.contains_key(&(*code, src)) {
                let target = &f.elements[idx[&(*code, *y)]].op.mat;
                sym = sym.max(max_abs(target));
            }
        }
        sym = sym.max(max_abs(&(f.bottom.conjugate_shift(a).mat - &f.bottom.mat)));
    }

    Ok(PovmReport {
        tolerances: *tol,
        min_eigenvalue: min_eig,
        max_hermitian_deviation: herm,
        completeness_frobenius: completeness,
        max_unambiguity_trace: unamb,
        max_symmetry_deviation: sym,
        positive: min_eig >= -tol.positivity,
        complete: completeness <= tol.completeness,
        unambiguous: unamb <= tol.unambiguity,
        symmetric: sym <= tol.symmetry,
    })
}

/// (1/2^n)·Σ_x Σ_{(H,y)} C(k)·⟨ψ_x|F_{H,y}|ψ_x⟩, including C(0) for ⊥.
pub fn rho_eval(f: &PovmSet, p: &AmplitudeProfile, c: &CostFunction) -> Result<f64> {
    let n = f.n;
    c.check_n(n)?;
    let mut total = 0.0;
    for x in 0..1u32 << n {
        let psi = state_psi(p, x)?;
        for e in &f.elements {
            total += c.value::<f64>(f.code(e).k()) * e.op.expectation(&psi);
        }
        total += c.value::<f64>(0) * f.bottom.expectation(&psi);
    }
    Ok(total / (1u64 << n) as f64)
}

/// F̄_{H,y} = 2^{-n}·Σ_a X_a F_{H,y+Ha} X_a.
pub fn symmetrize(f: &PovmSet, p: &AmplitudeProfile, tol: &PovmTolerances) -> Result<PovmSet> {
    let rep = verify(f, p, tol)?;
    if !rep.in_gamma() {
        return Err(Error::InvalidArgument("input is not a fine-grained unambiguous measurement".into()));
    }
    let n = f.n;
    let d = (1u64 << n) as f64;
    let idx = f.index();
    let mut codes: Vec<usize> = f.elements.iter().map(|e| e.code).collect();
    codes.sort_unstable();
    codes.dedup();
    let mut elements = Vec::new();
    for ci in codes {
        let code = &f.book.get(ci).code;
        for y in 0..1u32 << code.k() {
            let mut m = CMat::zeros(1 << n, 1 << n);
            for a in 0..1u32 << n {
                if let Some(&j) = idx.get(&(ci, y ^ code.parity(a))) {
                    m += f.elements[j].op.conjugate_shift(a).mat;
                }
            }
            elements.push(PovmElement { code: ci, y, op: QOperator { n, mat: m / Complex64::new(d, 0.0) } });
        }
    }
    let mut bottom = CMat::zeros(1 << n, 1 << n);
    for a in 0..1u32 << n {
        bottom += f.bottom.conjugate_shift(a).mat;
    }
    let bottom = QOperator { n, mat: bottom / Complex64::new(d, 0.0) };
    Ok(PovmSet { n, book: f.book.clone(), elements, bottom })
}

#[derive(Clone, Debug, Serialize)]
pub struct FourierReport {
    /// Largest off-diagonal entry of F_H = Σ_y F_{H,y} in the Fourier basis.
    pub max_offdiag: f64,
    /// Largest |⟨î|F_H|î⟩ − 2^k⟨î|F_{H,y}|î⟩| over i, y.
    pub max_diag_mismatch: f64,
    /// Largest spread of w_i·⟨î|F_{H,y}|î⟩ within a dual coset.
    pub max_coset_spread: f64,
}

pub fn fourier_diag_check(f: &PovmSet, p: &AmplitudeProfile) -> FourierReport {
    let n = f.n;
    let d = 1usize << n;
    let mut rep = FourierReport { max_offdiag: 0.0, max_diag_mismatch: 0.0, max_coset_spread: 0.0 };
    let mut by_code: HashMap<usize, Vec<&PovmElement>> = HashMap::new();
    for e in &f.elements {
        by_code.entry(e.code).or_default().push(e);
    }
    let offdiag = |m: &CMat| (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| m[(i, j)].norm()).fold(0.0, f64::max);
    for (ci, elems) in by_code {
        let entry = f.book.get(ci);
        let k = entry.code.k();
        let hats: Vec<CMat> = elems.iter().map(|e| e.op.in_fourier_basis()).collect();
        let fh: CMat = hats.iter().fold(CMat::zeros(d, d), |acc, m| acc + m);
        rep.max_offdiag = rep.max_offdiag.max(offdiag(&fh));
        for h in &hats {
            for i in 0..d {
                let dev = (fh[(i, i)] - h[(i, i)] * Complex64::new((1u64 << k) as f64, 0.0)).norm();
                rep.max_diag_mismatch = rep.max_diag_mismatch.max(dev);
            }
            for members in &entry.cosets.members {
                let vals: Vec<f64> = members.iter().map(|&i| p.weight_f64(i) * h[(i as usize, i as usize)].re).collect();
                let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min);
                rep.max_coset_spread = rep.max_coset_spread.max(spread);
            }
        }
    }
    rep.max_offdiag = rep.max_offdiag.max(offdiag(&f.bottom.in_fourier_basis()));
    rep
}

/// Numerical rank of the Gram matrix of {|ψ_x⟩}.
pub fn state_span_rank(p: &AmplitudeProfile, tol: f64) -> Result<usize> {
    let d = p.dim();
    let psis = (0..d as u32).map(|x| state_psi(p, x)).collect::<Result<Vec<_>>>()?;
    let gram = CMat::from_fn(d, d, |i, j| psis[i].dotc(&psis[j]));
    Ok(SymmetricEigen::new(gram).eigenvalues.iter().filter(|&&l| l > tol).count())
}
