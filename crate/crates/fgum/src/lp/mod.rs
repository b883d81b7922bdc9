//! The coset-reduced primal LP, its dual, and their certificates.
//!
//! Primal: one variable μ_s^H per canonical code H and dual coset D_H(s),
//! with μ_s^H = λ_i^H·w_i for any i in the coset. Maximize
//! Σ C(k)·2^k·μ_s^H subject to Σ_H μ_{s_H(i)}^H = w_i for every i with w_i > 0.
//! Dual: b_i ≥ 0, minimize Σ b_i·w_i subject to Σ_{i∈D_H(s)} b_i ≥ C(k)·2^k.

pub mod simplex;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

use crate::f2lin::{bit_string, dual_cosets, enumerate_all_codes, CosetPartition, F2Matrix, ParityCode};
use crate::profiles::{AmplitudeProfile, CostFunction};
use crate::scalar::{pow2, Scalar};
use crate::{Error, Result};

/// Largest n for which the LPs are built.
pub const LP_BUDGET: usize = 5;

#[derive(Clone, Debug)]
pub struct CodeEntry {
    pub code: ParityCode,
    pub cosets: CosetPartition,
}

/// The codes indexing the LPs with their coset partitions.
#[derive(Debug)]
pub struct CodeBook {
    n: usize,
    entries: Vec<CodeEntry>,
    index: HashMap<Vec<u32>, usize>,
}

impl CodeBook {
    /// All canonical codes of F_2^n, rank-major, ⊥ first.
    pub fn new(n: usize) -> Result<Self> {
        CodeBook::from_codes(n, enumerate_all_codes(n)?)
    }

    /// Shared cached codebook for n.
    pub fn shared(n: usize) -> Result<Arc<CodeBook>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CodeBook>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(b) = cache.lock().unwrap().get(&n) {
            return Ok(b.clone());
        }
        let b = Arc::new(CodeBook::new(n)?);
        cache.lock().unwrap().insert(n, b.clone());
        Ok(b)
    }

    /// Arbitrary list of codes; repeats are kept as separate entries.
    pub fn from_codes(n: usize, codes: Vec<ParityCode>) -> Result<Self> {
        let mut index = HashMap::new();
        let mut entries = Vec::with_capacity(codes.len());
        for (i, code) in codes.into_iter().enumerate() {
            if code.n() != n {
                return Err(Error::Dimension(format!("code over F_2^{} in a book for n = {n}", code.n())));
            }
            index.entry(code.h().rows().to_vec()).or_insert(i);
            let cosets = dual_cosets(&code);
            entries.push(CodeEntry { code, cosets });
        }
        Ok(CodeBook { n, entries, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CodeEntry] {
        &self.entries
    }

    pub fn get(&self, idx: usize) -> &CodeEntry {
        &self.entries[idx]
    }

    /// Position of the code with the same row space as `h`.
    pub fn lookup(&self, h: &F2Matrix) -> Option<usize> {
        self.index.get(h.rref().rows()).copied()
    }

    pub fn bottom(&self) -> usize {
        self.lookup(&F2Matrix::empty(self.n)).expect("book contains the rank-0 code")
    }

    /// Total number of (code, syndrome) pairs.
    pub fn num_cosets(&self) -> usize {
        self.entries.iter().map(|e| e.cosets.num_cosets()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarLabel {
    Coset { code: usize, syndrome: u32 },
    Index(u32),
    Named(String),
}

#[derive(Clone, Debug)]
pub struct Constraint<S> {
    pub coeffs: Vec<(usize, S)>,
    pub relation: Relation,
    pub rhs: S,
    pub label: String,
}

/// A linear program over nonnegative variables.
#[derive(Clone, Debug)]
pub struct LpModel<S> {
    pub sense: Sense,
    pub labels: Vec<VarLabel>,
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
    /// Variables pinned to zero; the solver drops their columns.
    pub fixed_zero: Vec<bool>,
    pub book: Option<Arc<CodeBook>>,
}

impl<S: Scalar> LpModel<S> {
    pub fn new(sense: Sense) -> Self {
        LpModel { sense, labels: Vec::new(), objective: Vec::new(), constraints: Vec::new(), fixed_zero: Vec::new(), book: None }
    }

    pub fn add_var(&mut self, label: VarLabel, objective: S) -> usize {
        self.labels.push(label);
        self.objective.push(objective);
        self.fixed_zero.push(false);
        self.labels.len() - 1
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, S)>, relation: Relation, rhs: S, label: impl Into<String>) {
        self.constraints.push(Constraint { coeffs, relation, rhs, label: label.into() });
    }

    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.objective.len() != n || self.fixed_zero.len() != n {
            return Err(Error::Dimension("objective length differs from variable count".into()));
        }
        for c in &self.constraints {
            if let Some((v, _)) = c.coeffs.iter().find(|(v, _)| *v >= n) {
                return Err(Error::Dimension(format!("constraint {} references undeclared variable {v}", c.label)));
            }
            if !S::EXACT && c.coeffs.iter().any(|(_, a)| !a.to_f64().is_finite()) {
                return Err(Error::InvalidArgument(format!("non-finite coefficient in {}", c.label)));
            }
        }
        Ok(())
    }

    pub fn var_name(&self, v: usize) -> String {
        match (&self.labels[v], &self.book) {
            (VarLabel::Coset { code, syndrome }, Some(book)) => {
                let e = book.get(*code);
                format!("mu[{} s={}]", e.code, bit_string(*syndrome, e.code.n() - e.code.k()))
            }
            (VarLabel::Coset { code, syndrome }, None) => format!("mu[{code},{syndrome}]"),
            (VarLabel::Index(i), Some(book)) => format!("b[{}]", bit_string(*i, book.n())),
            (VarLabel::Index(i), None) => format!("b[{i}]"),
            (VarLabel::Named(s), _) => s.clone(),
        }
    }

    /// Plain-text dump, one constraint per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let term = |c: &S, v: usize| format!("{} {}", c.render(), self.var_name(v));
        let obj: Vec<String> =
            (0..self.num_vars()).filter(|&v| !self.objective[v].is_zero()).map(|v| term(&self.objective[v], v)).collect();
        let sense = match self.sense {
            Sense::Max => "max",
            Sense::Min => "min",
        };
        let _ = writeln!(out, "{sense}: {}", if obj.is_empty() { "0".into() } else { obj.join(" + ") });
        for c in &self.constraints {
            let lhs: Vec<String> = c.coeffs.iter().map(|(v, a)| term(a, *v)).collect();
            let rel = match c.relation {
                Relation::Eq => "=",
                Relation::Ge => ">=",
                Relation::Le => "<=",
            };
            let _ = writeln!(out, "{}: {} {rel} {}", c.label, lhs.join(" + "), c.rhs.render());
        }
        let fixed: Vec<String> = (0..self.num_vars()).filter(|&v| self.fixed_zero[v]).map(|v| self.var_name(v)).collect();
        if !fixed.is_empty() {
            let _ = writeln!(out, "fixed 0: {}", fixed.join(", "));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct SolveReport<S> {
    pub status: Status,
    pub objective: Option<S>,
    /// Variable values in model order (empty unless optimal).
    pub x: Vec<S>,
    pub pivots: usize,
    pub wall_time: Duration,
    pub exact: bool,
}

impl<S: Scalar> SolveReport<S> {
    pub fn optimum(&self) -> Result<&S> {
        match (&self.status, &self.objective) {
            (Status::Optimal, Some(v)) => Ok(v),
            (s, _) => Err(Error::Infeasible(format!("solver status {s:?}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status,
            "optimum": self.objective.as_ref().map(Scalar::render),
            "mode": if self.exact { "exact" } else { "float" },
            "pivots": self.pivots,
            "wall_time_ms": self.wall_time.as_secs_f64() * 1e3,
        })
    }
}

pub fn solve<S: Scalar>(m: &LpModel<S>) -> Result<SolveReport<S>> {
    m.validate()?;
    Ok(simplex::solve(m))
}

fn check_budget(n: usize) -> Result<()> {
    if n > LP_BUDGET {
        return Err(Error::Budget { what: "LP construction", n, limit: LP_BUDGET });
    }
    Ok(())
}

pub fn build_primal<S: Scalar>(p: &AmplitudeProfile, c: &CostFunction) -> Result<LpModel<S>> {
    check_budget(p.n())?;
    build_primal_with(p, c, CodeBook::shared(p.n())?)
}

/// Primal over an explicit codebook (e.g. one with repeated row spaces).
pub fn build_primal_with<S: Scalar>(p: &AmplitudeProfile, c: &CostFunction, book: Arc<CodeBook>) -> Result<LpModel<S>> {
    let n = p.n();
    c.check_n(n)?;
    if book.n() != n {
        return Err(Error::Dimension("codebook and profile dimensions differ".into()));
    }
    let w: Vec<S> = p.weights_as();
    let mut m = LpModel::new(Sense::Max);
    // var_of[code][s]
    let mut var_of: Vec<Vec<usize>> = Vec::with_capacity(book.len());
    for (ci, e) in book.entries().iter().enumerate() {
        let k = e.code.k();
        let coef = c.value::<S>(k) * pow2::<S>(k);
        let mut vs = Vec::with_capacity(e.cosets.num_cosets());
        for (s, members) in e.cosets.members.iter().enumerate() {
            let v = m.add_var(VarLabel::Coset { code: ci, syndrome: s as u32 }, coef.clone());
            m.fixed_zero[v] = members.iter().any(|&i| p.is_zero_weight(i));
            vs.push(v);
        }
        var_of.push(vs);
    }
    for i in 0..1u32 << n {
        if p.is_zero_weight(i) {
            continue;
        }
        let coeffs = book
            .entries()
            .iter()
            .enumerate()
            .map(|(ci, e)| (var_of[ci][e.cosets.syndrome_of[i as usize] as usize], S::one()))
            .collect();
        m.add_constraint(coeffs, Relation::Eq, w[i as usize].clone(), format!("i={}", bit_string(i, n)));
    }
    m.book = Some(book);
    Ok(m)
}

pub fn build_dual<S: Scalar>(p: &AmplitudeProfile, c: &CostFunction) -> Result<LpModel<S>> {
    check_budget(p.n())?;
    let n = p.n();
    c.check_n(n)?;
    let book = CodeBook::shared(n)?;
    let mut m = LpModel::new(Sense::Min);
    for i in 0..1u32 << n {
        m.add_var(VarLabel::Index(i), p.weight_as(i));
    }
    for e in book.entries() {
        let k = e.code.k();
        let rhs = c.value::<S>(k) * pow2::<S>(k);
        for (s, members) in e.cosets.members.iter().enumerate() {
            let coeffs = members.iter().map(|&i| (i as usize, S::one())).collect();
            let label = format!("H={} s={}", e.code, bit_string(s as u32, n - k));
            m.add_constraint(coeffs, Relation::Ge, rhs.clone(), label);
        }
    }
    m.book = Some(book);
    Ok(m)
}

/// Coset-reduced primal point: μ[code][syndrome].
#[derive(Clone, Debug)]
pub struct PrimalSolution<S> {
    book: Arc<CodeBook>,
    mu: Vec<Vec<S>>,
}

impl<S: Scalar> PrimalSolution<S> {
    pub fn zeros(book: Arc<CodeBook>) -> Self {
        let mu = book.entries().iter().map(|e| vec![S::zero(); e.cosets.num_cosets()]).collect();
        PrimalSolution { book, mu }
    }

    /// Everything on the ⊥ outcome: λ_i^⊥ = 1.
    pub fn all_bottom(p: &AmplitudeProfile) -> Result<Self> {
        let mut sol = PrimalSolution::zeros(CodeBook::shared(p.n())?);
        let b = sol.book.bottom();
        for i in 0..p.dim() as u32 {
            sol.mu[b][i as usize] = p.weight_as(i);
        }
        Ok(sol)
    }

    /// Reads μ from a solved primal model.
    pub fn from_model(model: &LpModel<S>, report: &SolveReport<S>) -> Result<Self> {
        report.optimum()?;
        let book = model.book.clone().ok_or_else(|| Error::InvalidArgument("model has no codebook".into()))?;
        let mut sol = PrimalSolution::zeros(book);
        for (v, label) in model.labels.iter().enumerate() {
            if let VarLabel::Coset { code, syndrome } = label {
                sol.mu[*code][*syndrome as usize] = report.x[v].clone();
            }
        }
        Ok(sol)
    }

    pub fn book(&self) -> &Arc<CodeBook> {
        &self.book
    }

    pub fn n(&self) -> usize {
        self.book.n()
    }

    pub fn mu(&self, code: usize, s: u32) -> &S {
        &self.mu[code][s as usize]
    }

    pub fn set_mu(&mut self, code: usize, s: u32, v: S) {
        self.mu[code][s as usize] = v;
    }

    pub fn mu_table(&self) -> &[Vec<S>] {
        &self.mu
    }

    /// λ_i^H = μ/w_i; for w_i = 0 the index is assigned entirely to ⊥.
    pub fn lambda(&self, code: usize, i: u32, p: &AmplitudeProfile) -> S {
        let e = self.book.get(code);
        if p.is_zero_weight(i) {
            return if e.code.k() == 0 { S::one() } else { S::zero() };
        }
        self.mu[code][e.cosets.syndrome_of[i as usize] as usize].div_ref(&p.weight_as(i))
    }

    /// Σ_H λ_i^H.
    pub fn lambda_sum(&self, i: u32, p: &AmplitudeProfile) -> S {
        (0..self.book.len()).fold(S::zero(), |acc, c| acc + self.lambda(c, i, p))
    }

    /// Total mass 2^k·Σ_s μ_s^H carried by a code; equals Σ_i λ_i^H·w_i.
    pub fn code_mass(&self, code: usize) -> S {
        let k = self.book.get(code).code.k();
        pow2::<S>(k) * self.mu[code].iter().fold(S::zero(), |a, b| a + b.clone())
    }

    /// ρ^L = Σ_H C(k)·2^k·Σ_s μ_s^H.
    pub fn objective(&self, c: &CostFunction) -> S {
        (0..self.book.len()).fold(S::zero(), |acc, ci| acc + c.value::<S>(self.book.get(ci).code.k()) * self.code_mass(ci))
    }

    /// Codes with nonzero mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.book.len()).filter(|&c| self.mu[c].iter().any(|m| !m.is_zero())).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PrimalSolution<T> {
        PrimalSolution { book: self.book.clone(), mu: self.mu.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }

    pub fn to_f64(&self) -> PrimalSolution<f64> {
        self.map(Scalar::to_f64)
    }

    /// Nonzero μ entries with their code and coset members.
    pub fn to_json(&self, c: &CostFunction) -> Value {
        let n = self.n();
        let entries: Vec<Value> = self
            .support()
            .into_iter()
            .flat_map(|ci| {
                let e = self.book.get(ci);
                let k = e.code.k();
                self.mu[ci]
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| !m.is_zero())
                    .map(move |(s, m)| {
                        json!({
                            "H": e.code.h(),
                            "k": k,
                            "s": bit_string(s as u32, n - k),
                            "coset": e.cosets.members[s].iter().map(|&i| bit_string(i, n)).collect::<Vec<_>>(),
                            "mu": m.render(),
                        })
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        json!({ "objective": self.objective(c).render(), "mu": entries })
    }
}

/// Dual point b_i, i ∈ F_2^n.
#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution<S> {
    n: usize,
    b: Vec<S>,
}

impl<S: Scalar> DualSolution<S> {
    pub fn new(n: usize, b: Vec<S>) -> Result<Self> {
        if b.len() != 1 << n {
            return Err(Error::Dimension(format!("dual vector has {} entries, expected {}", b.len(), 1usize << n)));
        }
        Ok(DualSolution { n, b })
    }

    pub fn from_model(model: &LpModel<S>, report: &SolveReport<S>) -> Result<Self> {
        report.optimum()?;
        let n = model.book.as_ref().map(|b| b.n()).ok_or_else(|| Error::InvalidArgument("model has no codebook".into()))?;
        let mut b = vec![S::zero(); 1 << n];
        for (v, label) in model.labels.iter().enumerate() {
            if let VarLabel::Index(i) = label {
                b[*i as usize] = report.x[v].clone();
            }
        }
        DualSolution::new(n, b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> &[S] {
        &self.b
    }

    /// σ^L = Σ b_i·w_i.
    pub fn objective(&self, p: &AmplitudeProfile) -> S {
        self.b.iter().enumerate().fold(S::zero(), |acc, (i, b)| acc + b.mul_ref(&p.weight_as(i as u32)))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DualSolution<T> {
        DualSolution { n: self.n, b: self.b.iter().map(f).collect() }
    }

    pub fn to_json(&self) -> Value {
        let b: serde_json::Map<String, Value> =
            self.b.iter().enumerate().map(|(i, v)| (bit_string(i as u32, self.n), Value::String(v.render()))).collect();
        Value::Object(b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub constraint: String,
    /// Amount by which the constraint is violated.
    pub amount: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub max_violation: f64,
}

impl FeasibilityReport {
    fn new() -> Self {
        FeasibilityReport { checked: 0, violations: Vec::new(), max_violation: 0.0 }
    }

    /// Records `amount` as a violation when it exceeds `tol`.
    fn record<S: Scalar>(&mut self, label: impl FnOnce() -> String, amount: S, tol: &S) {
        self.checked += 1;
        if (amount.clone() - tol.clone()).is_pos() {
            self.max_violation = self.max_violation.max(amount.to_f64());
            self.violations.push(Violation { constraint: label(), amount: amount.render() });
        }
    }

    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_primal_feasible<S: Scalar>(sol: &PrimalSolution<S>, p: &AmplitudeProfile, tol: &S) -> Result<FeasibilityReport> {
    let n = p.n();
    if sol.n() != n {
        return Err(Error::Dimension(format!("solution over F_2^{}, profile over F_2^{n}", sol.n())));
    }
    let mut rep = FeasibilityReport::new();
    for (ci, e) in sol.book.entries().iter().enumerate() {
        for (s, members) in e.cosets.members.iter().enumerate() {
            let mu = &sol.mu[ci][s];
            let label = || format!("mu[H={} s={}]", e.code, bit_string(s as u32, n - e.code.k()));
            rep.record(|| format!("{} >= 0", label()), -mu.clone(), tol);
            if members.iter().any(|&i| p.is_zero_weight(i)) {
                rep.record(|| format!("{} = 0 (zero-weight coset)", label()), mu.abs_val(), tol);
            }
        }
    }
    for i in 0..p.dim() as u32 {
        if p.is_zero_weight(i) {
            continue;
        }
        let dev = (sol.lambda_sum(i, p) - S::one()).abs_val();
        rep.record(|| format!("sum_H lambda_{} = 1", bit_string(i, n)), dev, tol);
    }
    Ok(rep)
}

/// Slack Σ_{i∈D_H(s)} b_i − C(k)·2^k of one dual constraint.
#[derive(Clone, Debug)]
pub struct DualSlack<S> {
    pub code: usize,
    pub k: usize,
    pub syndrome: u32,
    pub slack: S,
}

/// Slacks of every dual constraint over all canonical codes.
pub fn dual_slacks<S: Scalar>(sol: &DualSolution<S>, c: &CostFunction) -> Result<Vec<DualSlack<S>>> {
    c.check_n(sol.n)?;
    let book = CodeBook::shared(sol.n)?;
    let mut out = Vec::with_capacity(book.num_cosets());
    for (ci, e) in book.entries().iter().enumerate() {
        let k = e.code.k();
        let rhs = c.value::<S>(k) * pow2::<S>(k);
        for (s, members) in e.cosets.members.iter().enumerate() {
            let lhs = members.iter().fold(S::zero(), |a, &i| a + sol.b[i as usize].clone());
            out.push(DualSlack { code: ci, k, syndrome: s as u32, slack: lhs - rhs.clone() });
        }
    }
    Ok(out)
}

pub fn check_dual_feasible<S: Scalar>(sol: &DualSolution<S>, c: &CostFunction, tol: &S) -> Result<FeasibilityReport> {
    let n = sol.n;
    let book = CodeBook::shared(n)?;
    let mut rep = FeasibilityReport::new();
    for (i, b) in sol.b.iter().enumerate() {
        rep.record(|| format!("b[{}] >= 0", bit_string(i as u32, n)), -b.clone(), tol);
    }
    for sl in dual_slacks(sol, c)? {
        let e = book.get(sl.code);
        rep.record(
            || format!("H={} s={}", e.code, bit_string(sl.syndrome, n - sl.k)),
            -sl.slack.clone(),
            tol,
        );
    }
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct SlacknessReport {
    pub primal_feasible: bool,
    pub dual_feasible: bool,
    pub max_product: f64,
    pub violations: Vec<Violation>,
    pub primal_objective: String,
    pub dual_objective: String,
    /// Both feasible and every complementary product vanishes.
    pub certified: bool,
}

/// Checks (Σ_H λ_i^H − 1)·b_i = 0 and μ_s^H·(Σ_{D_H(s)} b − C(k)2^k) = 0.
pub fn complementary_slackness<S: Scalar>(
    primal: &PrimalSolution<S>,
    dual: &DualSolution<S>,
    p: &AmplitudeProfile,
    c: &CostFunction,
    tol: &S,
) -> Result<SlacknessReport> {
    let n = p.n();
    if primal.n() != n || dual.n != n {
        return Err(Error::Dimension("primal, dual and profile dimensions differ".into()));
    }
    let pf = check_primal_feasible(primal, p, tol)?.feasible();
    let df = check_dual_feasible(dual, c, tol)?.feasible();
    let mut rep = FeasibilityReport::new();
    for i in 0..p.dim() as u32 {
        if p.is_zero_weight(i) {
            continue;
        }
        let prod = ((primal.lambda_sum(i, p) - S::one()) * dual.b[i as usize].clone()).abs_val();
        rep.record(|| format!("(sum lambda_{} - 1) b", bit_string(i, n)), prod, tol);
    }
    let book = primal.book.clone();
    for (ci, e) in book.entries().iter().enumerate() {
        let k = e.code.k();
        let rhs = c.value::<S>(k) * pow2::<S>(k);
        for (s, members) in e.cosets.members.iter().enumerate() {
            let mu = &primal.mu[ci][s];
            if mu.is_zero() {
                continue;
            }
            let lhs = members.iter().fold(S::zero(), |a, &i| a + dual.b[i as usize].clone());
            let prod = (mu.clone() * (lhs - rhs.clone())).abs_val();
            rep.record(|| format!("mu[H={} s={}] * slack", e.code, bit_string(s as u32, n - k)), prod, tol);
        }
    }
    let certified = pf && df && rep.feasible();
    Ok(SlacknessReport {
        primal_feasible: pf,
        dual_feasible: df,
        max_product: rep.max_violation,
        violations: rep.violations,
        primal_objective: primal.objective(c).render(),
        dual_objective: dual.objective(p).render(),
        certified,
    })
}

/// Solved primal and dual with their gap.
#[derive(Clone, Debug)]
pub struct DualityRun<S> {
    pub primal_report: SolveReport<S>,
    pub dual_report: SolveReport<S>,
    pub primal: PrimalSolution<S>,
    pub dual: DualSolution<S>,
    pub rho: S,
    pub sigma: S,
}

impl<S: Scalar> DualityRun<S> {
    pub fn gap(&self) -> S {
        self.sigma.clone() - self.rho.clone()
    }
}

pub fn solve_primal<S: Scalar>(p: &AmplitudeProfile, c: &CostFunction) -> Result<(SolveReport<S>, PrimalSolution<S>)> {
    let m = build_primal::<S>(p, c)?;
    let r = solve(&m)?;
    let sol = PrimalSolution::from_model(&m, &r)?;
    Ok((r, sol))
}

pub fn solve_dual<S: Scalar>(p: &AmplitudeProfile, c: &CostFunction) -> Result<(SolveReport<S>, DualSolution<S>)> {
    let m = build_dual::<S>(p, c)?;
    let r = solve(&m)?;
    let sol = DualSolution::from_model(&m, &r)?;
    Ok((r, sol))
}

/// Solves both programs independently.
pub fn solve_both<S: Scalar>(p: &AmplitudeProfile, c: &CostFunction) -> Result<DualityRun<S>> {
    let (primal_report, primal) = solve_primal::<S>(p, c)?;
    let (dual_report, dual) = solve_dual::<S>(p, c)?;
    let rho = primal_report.optimum()?.clone();
    let sigma = dual_report.optimum()?.clone();
    Ok(DualityRun { primal_report, dual_report, primal, dual, rho, sigma })
}
