//! Closed-form dual certificates, the matching primal candidates, threshold
//! machinery and the complete n = 2 classification.

use serde::Serialize;
use serde_json::{json, Value};

use crate::f2lin::{
    binomial, bit_string, enumerate_identity_rows, is_universal, avoiding_subspace, ones, weight, F2Matrix, F2Vec,
    UNIVERSAL_BUDGET,
};
use crate::lp::{
    check_dual_feasible, solve_primal, CodeBook, DualSolution, FeasibilityReport, PrimalSolution, LP_BUDGET,
};
use crate::profiles::{AmplitudeProfile, CostFunction, CostKind};
use crate::scalar::{pow2, Rational, Scalar};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum DualFamily {
    Hamming,
    Cohamming,
    Spike,
    ThresholdIndicator { tau: usize, set: Vec<String> },
    ThresholdBall { d: usize, gamma: f64, tau: usize, constant: String },
    AffineImage { base: Box<DualFamily>, p: Vec<String>, v: String },
}

/// A dual point together with the family and cost it is claimed feasible for.
#[derive(Clone, Debug)]
pub struct DualCertificate<S> {
    pub family: DualFamily,
    pub cost: CostFunction,
    pub solution: DualSolution<S>,
}

impl<S: Scalar> DualCertificate<S> {
    pub fn n(&self) -> usize {
        self.solution.n()
    }

    /// Exhaustive audit over every code and coset.
    pub fn audit(&self, tol: &S) -> Result<FeasibilityReport> {
        check_dual_feasible(&self.solution, &self.cost, tol)
    }

    pub fn objective(&self, p: &AmplitudeProfile) -> S {
        self.solution.objective(p)
    }

    pub fn to_json(&self, p: Option<&AmplitudeProfile>, tol: &S) -> Result<Value> {
        let audit = self.audit(tol)?;
        Ok(json!({
            "family": self.family,
            "cost": self.cost.to_json(),
            "b": self.solution.to_json(),
            "feasibility": audit,
            "objective": p.map(|p| self.objective(p).render()),
        }))
    }
}

fn from_fn<S: Scalar>(n: usize, f: impl Fn(u32) -> S) -> DualSolution<S> {
    DualSolution::new(n, (0..1u32 << n).map(f).collect()).expect("length 2^n")
}

/// b_i = 2|i|.
pub fn dual_hamming<S: Scalar>(n: usize) -> DualCertificate<S> {
    DualCertificate {
        family: DualFamily::Hamming,
        cost: CostFunction::average(n),
        solution: from_fn(n, |i| S::from_i64(2 * weight(i) as i64)),
    }
}

/// b_i = 2|i + 1…1|.
pub fn dual_cohamming<S: Scalar>(n: usize) -> DualCertificate<S> {
    DualCertificate {
        family: DualFamily::Cohamming,
        cost: CostFunction::average(n),
        solution: from_fn(n, |i| S::from_i64(2 * weight(i ^ ones(n)) as i64)),
    }
}

/// b_0 = 2^n + n − 1, b_i = n − 1 otherwise.
pub fn dual_spike<S: Scalar>(n: usize) -> DualCertificate<S> {
    let (n1, top) = (n as i64 - 1, (1i64 << n) + n as i64 - 1);
    DualCertificate {
        family: DualFamily::Spike,
        cost: CostFunction::average(n),
        solution: from_fn(n, |i| S::from_i64(if i == 0 { top } else { n1 })),
    }
}

/// (b_f)_i = b_{P·i + v}.
pub fn dual_affine_image<S: Scalar>(b: &DualCertificate<S>, p: &F2Matrix, v: F2Vec) -> Result<DualCertificate<S>> {
    let n = b.n();
    if p.n_cols() != n || v.n() != n {
        return Err(Error::Dimension("affine map and dual vector dimensions differ".into()));
    }
    if !p.is_invertible() {
        return Err(Error::Singular);
    }
    let src = b.solution.b();
    let solution = from_fn(n, |i| src[(p.mul_vec(i) ^ v.bits()) as usize].clone());
    let family = DualFamily::AffineImage {
        base: Box::new(b.family.clone()),
        p: p.rows().iter().map(|&r| bit_string(r, n)).collect(),
        v: v.to_string(),
    };
    Ok(DualCertificate { family, cost: b.cost.clone(), solution })
}

/// b = 2^τ·1_V for a τ-universal V.
pub fn dual_threshold_indicator<S: Scalar>(set: &[u32], tau: usize, n: usize) -> Result<DualCertificate<S>> {
    let cost = CostFunction::threshold(n, tau)?;
    if !is_universal(set, tau, n)? {
        return Err(Error::NotUniversal { tau });
    }
    let mut inside = vec![false; 1 << n];
    for &x in set {
        inside[x as usize] = true;
    }
    let mut sorted: Vec<u32> = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(DualCertificate {
        family: DualFamily::ThresholdIndicator { tau, set: sorted.iter().map(|&x| bit_string(x, n)).collect() },
        cost,
        solution: from_fn(n, |i| if inside[i as usize] { pow2(tau) } else { S::zero() }),
    })
}

/// τ = max(1, ⌈γ·d⌉); the threshold cost needs τ ≥ 1.
pub fn ball_tau(d: usize, gamma: f64) -> usize {
    ((gamma * d as f64).ceil() as usize).max(1)
}

/// 2^τ / (2^τ − Σ_{a≤d} C(τ,a)).
pub fn ball_constant(tau: usize, d: usize) -> Result<Rational> {
    let vol: u64 = (0..=d.min(tau)).map(|a| binomial(tau, a)).sum();
    let den = (1u64 << tau) as i64 - vol as i64;
    if den <= 0 {
        return Err(Error::InvalidArgument(format!("ball of radius {d} covers F_2^{tau}")));
    }
    Ok(Rational::new((1i64 << tau).into(), den.into()))
}

/// b_i = 2^τ/(2^τ − |B_d ∩ F_2^τ|) outside the Hamming ball B_d, 0 inside.
pub fn dual_threshold_ball<S: Scalar>(n: usize, d: usize, gamma: f64) -> Result<DualCertificate<S>> {
    if !(gamma > 2.0) || !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} must exceed 2")));
    }
    let tau = ball_tau(d, gamma);
    if tau > n {
        return Err(Error::InvalidArgument(format!("tau = ceil(gamma*d) = {tau} exceeds n = {n}")));
    }
    let constant = ball_constant(tau, d)?;
    let k = S::from_rational(&constant);
    let cert = DualCertificate {
        family: DualFamily::ThresholdBall { d, gamma, tau, constant: constant.render() },
        cost: CostFunction::threshold(n, tau)?,
        solution: from_fn(n, |i| if weight(i) > d { k.clone() } else { S::zero() }),
    };
    if n <= LP_BUDGET {
        let rep = cert.audit(&S::zero())?;
        if !rep.feasible() {
            return Err(Error::Infeasible(format!("ball dual fails {} constraints", rep.violations.len())));
        }
    }
    Ok(cert)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimalFamily {
    Hamming,
    Cohamming,
    Spike,
}

impl std::str::FromStr for PrimalFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming" => Ok(PrimalFamily::Hamming),
            "cohamming" | "co-hamming" => Ok(PrimalFamily::Cohamming),
            "spike" => Ok(PrimalFamily::Spike),
            other => Err(Error::InvalidArgument(format!("unknown primal family {other:?}"))),
        }
    }
}

impl PrimalFamily {
    /// The dual family it is paired with by complementary slackness.
    pub fn paired_dual<S: Scalar>(self, n: usize) -> DualCertificate<S> {
        match self {
            PrimalFamily::Hamming => dual_hamming(n),
            PrimalFamily::Cohamming => dual_cohamming(n),
            PrimalFamily::Spike => dual_spike(n),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PrimalCandidate<S> {
    pub family: PrimalFamily,
    pub solution: PrimalSolution<S>,
    /// Every μ is ≥ 0 (checked, never assumed).
    pub nonnegative: bool,
    pub objective: S,
}

/// Closed-form primal candidates for the average cost on a full-support profile.
///
/// Hamming: for H ∈ E_k^n, μ on D_H(0) is Σ_s (−1)^{|s|} w_{r_max(s)}.
/// Co-Hamming: for H ∈ E_k^n, μ on D_H(1…1) is (−1)^{n−k} Σ_s (−1)^{|s|} w_{r_min(s)}.
/// Spike: μ = w_0 on the rank-n code and, for each rank-(n−1) code,
/// (Σ_{D_H(1)} w − Σ_{D_H(0)} w)/2^{n−1} on D_H(1).
pub fn primal_candidate<S: Scalar>(family: PrimalFamily, p: &AmplitudeProfile) -> Result<PrimalCandidate<S>> {
    let n = p.n();
    if n > LP_BUDGET {
        return Err(Error::Budget { what: "primal candidate", n, limit: LP_BUDGET });
    }
    p.require_full_support()?;
    let book = CodeBook::shared(n)?;
    let w: Vec<S> = p.weights_as();
    let mut sol = PrimalSolution::zeros(book.clone());
    match family {
        PrimalFamily::Hamming | PrimalFamily::Cohamming => {
            for k in 0..=n {
                for h in enumerate_identity_rows(n, k) {
                    let ci = book.lookup(&h).expect("identity rows are canonical codes");
                    let cos = &book.get(ci).cosets;
                    let mut acc = S::zero();
                    for s in 0..cos.num_cosets() {
                        let leader = match family {
                            PrimalFamily::Hamming => cos.r_max[s],
                            _ => cos.r_min[s],
                        };
                        let term = w[leader as usize].clone();
                        acc = if weight(s as u32) % 2 == 0 { acc + term } else { acc - term };
                    }
                    let target = match family {
                        PrimalFamily::Hamming => 0,
                        _ => {
                            if (n - k) % 2 == 1 {
                                acc = -acc;
                            }
                            ones(n - k)
                        }
                    };
                    sol.set_mu(ci, target, acc);
                }
            }
        }
        PrimalFamily::Spike => {
            let full = book.lookup(&F2Matrix::identity(n)).expect("rank-n code");
            sol.set_mu(full, 0, w[0].clone());
            let scale = pow2::<S>(n - 1);
            for (ci, e) in book.entries().iter().enumerate() {
                if e.code.k() + 1 != n {
                    continue;
                }
                let side = |s: usize| e.cosets.members[s].iter().fold(S::zero(), |a, &i| a + w[i as usize].clone());
                sol.set_mu(ci, 1, (side(1) - side(0)).div_ref(&scale));
            }
        }
    }
    let nonnegative = sol.mu_table().iter().flatten().all(|m| !m.is_neg());
    let objective = sol.objective(&CostFunction::average(n));
    Ok(PrimalCandidate { family, solution: sol, nonnegative, objective })
}

/// Number of H ∈ E_k^n with i ∈ D_H(1…1) for which x is the minimal leader of some coset.
pub fn count_n(k: usize, i: u32, x: u32, n: usize) -> u64 {
    let (wi, wx) = (weight(i), weight(x));
    if x & !i != 0 || k + wi < n || k + wx > n {
        return 0;
    }
    binomial(wi - wx, k - (n - wi))
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCertificate {
    pub tau: usize,
    pub zero_set: Vec<String>,
    /// A minimal τ-universal subset of the zero set, when one exists.
    pub witness: Option<Vec<String>>,
    /// Otherwise an affine τ-subspace missing the zero set: (H, s, members).
    pub avoiding: Option<AvoidingSubspace>,
    pub lp_value: String,
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AvoidingSubspace {
    pub h: Vec<String>,
    pub syndrome: String,
    pub members: Vec<String>,
}

impl ThresholdCertificate {
    pub fn rho_is_zero(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decides ρ(S,τ) = 0 through the zero-weight set and cross-checks with the exact LP.
///
/// Any universal witness lies inside the zero set and supersets of universal
/// sets are universal, so it suffices to test the zero set itself; the
/// witness is then shrunk greedily to a minimal one.
pub fn threshold_zero_certificate(p: &AmplitudeProfile, tau: usize) -> Result<ThresholdCertificate> {
    let n = p.n();
    if n > LP_BUDGET.min(UNIVERSAL_BUDGET) {
        return Err(Error::Budget { what: "threshold certificate", n, limit: LP_BUDGET.min(UNIVERSAL_BUDGET) });
    }
    let cost = CostFunction::threshold(n, tau)?;
    let zeros = p.zero_set();
    let (witness, avoiding) = match avoiding_subspace(&zeros, tau, n)? {
        None => {
            let mut v = zeros.clone();
            let mut idx = 0;
            while idx < v.len() {
                let mut trial = v.clone();
                trial.remove(idx);
                if is_universal(&trial, tau, n)? {
                    v = trial;
                } else {
                    idx += 1;
                }
            }
            (Some(v.iter().map(|&x| bit_string(x, n)).collect()), None)
        }
        Some((code, s)) => {
            let cos = code.cosets();
            let av = AvoidingSubspace {
                h: code.h().rows().iter().map(|&r| bit_string(r, n)).collect(),
                syndrome: bit_string(s, n - tau),
                members: cos.members[s as usize].iter().map(|&x| bit_string(x, n)).collect(),
            };
            (None, Some(av))
        }
    };
    let (report, _) = solve_primal::<Rational>(p, &cost)?;
    let value = report.optimum()?.clone();
    let consistent = witness.is_some() == num_traits::Zero::is_zero(&value);
    Ok(ThresholdCertificate {
        tau,
        zero_set: zeros.iter().map(|&x| bit_string(x, n)).collect(),
        witness,
        avoiding,
        lp_value: value.render(),
        consistent,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum N2Regime {
    CoHamming,
    Spike,
    /// w₀₀ + w₁₁ = w₀₁ + w₁₀ after sorting: both families are optimal.
    Boundary,
}

#[derive(Clone, Debug)]
pub struct N2Result<S> {
    pub regime: N2Regime,
    pub value: S,
    /// The affine relabeling f(j) = P·j + v with w_{f(0)} ≤ w_{f(1)} ≤ w_{f(2)} ≤ w_{f(3)}.
    pub p: F2Matrix,
    pub v: F2Vec,
    pub sorted_weights: [S; 4],
    /// Optimal dual certificates in the caller's index convention (two at the boundary).
    pub certificates: Vec<DualCertificate<S>>,
}

/// Optimal average-cost value for n = 2 by the sorted-weight regime rule.
pub fn n2_optimal<S: Scalar>(p: &AmplitudeProfile) -> Result<N2Result<S>> {
    if p.n() != 2 {
        return Err(Error::InvalidArgument(format!("n2_optimal needs n = 2, got {}", p.n())));
    }
    let w: Vec<S> = p.weights_as();
    let mut order: Vec<u32> = (0..4).collect();
    order.sort_by(|&a, &b| w[a as usize].partial_cmp(&w[b as usize]).unwrap().then(a.cmp(&b)));
    // Every permutation of F_2^2 is affine: v = f(0), P e_j = f(e_j) + v.
    let v = order[0];
    let (c1, c2) = (order[1] ^ v, order[2] ^ v);
    let rows = vec![(c1 & 1) | (c2 & 1) << 1, (c1 >> 1 & 1) | (c2 >> 1 & 1) << 1];
    let pm = F2Matrix::new(2, rows)?;
    debug_assert!((0..4).all(|j| pm.mul_vec(j) ^ v == order[j as usize]));
    let sw: [S; 4] = std::array::from_fn(|j| w[order[j] as usize].clone());
    let lhs = sw[0].clone() + sw[3].clone();
    let rhs = sw[1].clone() + sw[2].clone();
    let diff = lhs - rhs;
    let cohamming = S::from_i64(4) * sw[0].clone() + S::from_i64(2) * (sw[1].clone() + sw[2].clone());
    let spike = S::from_i64(5) * sw[0].clone() + sw[1].clone() + sw[2].clone() + sw[3].clone();
    let (regime, value) = if diff.is_zero_tol() {
        (N2Regime::Boundary, cohamming)
    } else if diff.is_pos() {
        (N2Regime::CoHamming, cohamming)
    } else {
        (N2Regime::Spike, spike)
    };
    // Pull the sorted-frame certificate back through f^{-1}(i) = P^{-1} i + P^{-1} v.
    let pinv = pm.inverse()?;
    let vinv = F2Vec::new(2, pinv.mul_vec(v))?;
    let bases: Vec<DualCertificate<S>> = match regime {
        N2Regime::CoHamming => vec![dual_cohamming(2)],
        N2Regime::Spike => vec![dual_spike(2)],
        N2Regime::Boundary => vec![dual_cohamming(2), dual_spike(2)],
    };
    let certificates = bases.iter().map(|b| dual_affine_image(b, &pinv, vinv)).collect::<Result<Vec<_>>>()?;
    Ok(N2Result { regime, value, p: pm, v: F2Vec::new(2, v)?, sorted_weights: sw, certificates })
}

/// Whether the cost is the average cost (closed-form families assume it).
pub fn is_average(c: &CostFunction) -> bool {
    matches!(c.kind(), CostKind::Average)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{check_primal_feasible, complementary_slackness, dual_slacks, solve_both};
    use crate::scalar::rat;

    fn wp(v: &[(i64, i64)]) -> AmplitudeProfile {
        AmplitudeProfile::from_exact(2, v.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    fn p11() -> AmplitudeProfile {
        wp(&[(1, 20), (3, 20), (3, 10), (1, 2)])
    }

    fn p12() -> AmplitudeProfile {
        wp(&[(1, 20), (3, 10), (3, 10), (7, 20)])
    }

    #[test]
    fn closed_form_duals_are_feasible() {
        for n in 1..=4 {
            for cert in [dual_hamming::<Rational>(n), dual_cohamming(n), dual_spike(n)] {
                assert!(cert.audit(&rat(0, 1)).unwrap().feasible(), "{:?} n={n}", cert.family);
            }
        }
    }

    #[test]
    fn hamming_examples() {
        let h = dual_hamming::<Rational>(2);
        let full: Vec<_> = dual_slacks(&h.solution, &h.cost).unwrap().into_iter().filter(|s| s.k == 2).collect();
        assert_eq!(full[0].slack, rat(0, 1));
        let pm = AmplitudeProfile::point_mass(3, 0).unwrap();
        assert_eq!(dual_hamming::<Rational>(3).objective(&pm), rat(0, 1));
        let b = crate::profiles::bernoulli_profile(2, 0.1).unwrap();
        assert!((dual_hamming::<f64>(2).objective(&b) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn spike_examples() {
        let s = dual_spike::<Rational>(2);
        assert_eq!(s.solution.b(), &[rat(5, 1), rat(1, 1), rat(1, 1), rat(1, 1)]);
        assert_eq!(s.objective(&p12()), rat(6, 5));
        assert_eq!(s.objective(&p11()), rat(6, 5));
    }

    #[test]
    fn affine_image_examples() {
        let h = dual_hamming::<Rational>(3);
        let co = dual_affine_image(&h, &F2Matrix::identity(3), F2Vec::all_ones(3)).unwrap();
        assert_eq!(co.solution, dual_cohamming::<Rational>(3).solution);
        let id = dual_affine_image(&h, &F2Matrix::identity(3), F2Vec::zero(3)).unwrap();
        assert_eq!(id.solution, h.solution);
        let swap = F2Matrix::parse("10;01", 2).unwrap();
        let sp = dual_affine_image(&dual_spike::<Rational>(2), &swap, F2Vec::zero(2)).unwrap();
        assert_eq!(sp.solution, dual_spike::<Rational>(2).solution);
        assert!(dual_affine_image(&h, &F2Matrix::parse("110;110;001", 3).unwrap(), F2Vec::zero(3)).is_err());
    }

    #[test]
    fn threshold_indicator_examples() {
        let v = [0b01, 0b10, 0b11];
        let c = dual_threshold_indicator::<Rational>(&v, 1, 2).unwrap();
        assert!(c.audit(&rat(0, 1)).unwrap().feasible());
        assert_eq!(c.objective(&AmplitudeProfile::point_mass(2, 0).unwrap()), rat(0, 1));
        let c = dual_threshold_indicator::<Rational>(&[0, 1, 2], 1, 2).unwrap();
        assert_eq!(c.objective(&AmplitudeProfile::uniform(2).unwrap()), rat(3, 2));
        let all: Vec<u32> = (0..8).collect();
        let c = dual_threshold_indicator::<Rational>(&all, 2, 3).unwrap();
        assert_eq!(c.objective(&AmplitudeProfile::uniform(3).unwrap()), rat(4, 1));
        assert!(dual_threshold_indicator::<Rational>(&[0, 1], 1, 2).is_err());
    }

    #[test]
    fn threshold_ball_examples() {
        let c = dual_threshold_ball::<Rational>(4, 1, 3.0).unwrap();
        assert_eq!(c.solution.b()[0b0111], rat(2, 1));
        assert_eq!(c.solution.b()[0b0100], rat(0, 1));
        assert_eq!(ball_constant(3, 0).unwrap(), rat(8, 7));
        let d0 = dual_threshold_ball::<Rational>(3, 0, 2.5).unwrap();
        assert_eq!(d0.solution.b().iter().filter(|b| **b == rat(0, 1)).count(), 1);
        assert!(dual_threshold_ball::<Rational>(2, 1, 3.0).is_err());
        assert!(dual_threshold_ball::<Rational>(4, 1, 2.0).is_err());
    }

    #[test]
    fn candidate_examples() {
        let c = primal_candidate::<Rational>(PrimalFamily::Cohamming, &p11()).unwrap();
        assert!(c.nonnegative);
        assert_eq!(c.objective, rat(11, 10));
        assert!(check_primal_feasible(&c.solution, &p11(), &rat(0, 1)).unwrap().feasible());

        let s = primal_candidate::<Rational>(PrimalFamily::Spike, &p12()).unwrap();
        assert!(s.nonnegative);
        assert_eq!(s.objective, rat(6, 5));

        let s = primal_candidate::<Rational>(PrimalFamily::Spike, &p11()).unwrap();
        assert!(!s.nonnegative);

        let pm = AmplitudeProfile::point_mass(2, 0).unwrap();
        assert!(matches!(primal_candidate::<Rational>(PrimalFamily::Hamming, &pm), Err(Error::ZeroWeight { .. })));
    }

    #[test]
    fn candidates_satisfy_constraint_one_even_when_negative() {
        let p = AmplitudeProfile::from_exact(3, (1..=8).map(|x| rat(x, 36)).collect()).unwrap();
        for fam in [PrimalFamily::Hamming, PrimalFamily::Cohamming, PrimalFamily::Spike] {
            let c = primal_candidate::<Rational>(fam, &p).unwrap();
            for i in 0..8 {
                assert_eq!(c.solution.lambda_sum(i, &p), rat(1, 1), "{fam:?} i={i}");
            }
            assert_eq!(c.objective, fam.paired_dual::<Rational>(3).objective(&p), "{fam:?}");
        }
    }

    #[test]
    fn nonnegative_candidates_are_certified() {
        let p = AmplitudeProfile::product(3, &rat(1, 5)).unwrap();
        let c = primal_candidate::<Rational>(PrimalFamily::Hamming, &p).unwrap();
        assert!(c.nonnegative);
        let rep =
            complementary_slackness(&c.solution, &dual_hamming::<Rational>(3).solution, &p, &CostFunction::average(3), &rat(0, 1))
                .unwrap();
        assert!(rep.certified);
    }

    #[test]
    fn count_n_examples() {
        assert_eq!(count_n(1, 0b111, 0b100, 3), 2);
        assert_eq!(count_n(1, 0b011, 0b100, 3), 0);
        assert_eq!(count_n(1, 0b011, 0b011, 3), 1);
    }

    #[test]
    fn zero_certificate_examples() {
        let pm = AmplitudeProfile::point_mass(2, 0).unwrap();
        let c = threshold_zero_certificate(&pm, 1).unwrap();
        assert!(c.rho_is_zero() && c.consistent && c.lp_value == "0");
        let u = AmplitudeProfile::uniform(3).unwrap();
        for tau in 1..=3 {
            let c = threshold_zero_certificate(&u, tau).unwrap();
            assert!(!c.rho_is_zero() && c.consistent && c.avoiding.is_some());
        }
    }

    #[test]
    fn n2_examples() {
        let r = n2_optimal::<Rational>(&p11()).unwrap();
        assert_eq!((r.regime, r.value.clone()), (N2Regime::CoHamming, rat(11, 10)));
        let r = n2_optimal::<Rational>(&p12()).unwrap();
        assert_eq!((r.regime, r.value.clone()), (N2Regime::Spike, rat(6, 5)));
        let r = n2_optimal::<Rational>(&AmplitudeProfile::uniform(2).unwrap()).unwrap();
        assert_eq!((r.regime, r.value.clone()), (N2Regime::Boundary, rat(2, 1)));
        assert_eq!(r.certificates.len(), 2);
        assert!(n2_optimal::<Rational>(&AmplitudeProfile::uniform(3).unwrap()).is_err());
    }

    #[test]
    fn n2_certificates_match_value_on_unsorted_profile() {
        let p = wp(&[(1, 2), (3, 10), (3, 20), (1, 20)]);
        let r = n2_optimal::<Rational>(&p).unwrap();
        let run = solve_both::<Rational>(&p, &CostFunction::average(2)).unwrap();
        assert_eq!(r.value, run.rho);
        for c in &r.certificates {
            assert!(c.audit(&rat(0, 1)).unwrap().feasible());
            assert_eq!(c.objective(&p), r.value);
        }
    }
}
