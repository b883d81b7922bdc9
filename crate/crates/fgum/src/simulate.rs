//! Simulation of the measurement on |ψ_x⟩: exact outcome law, seeded
//! ancestral sampling, and a state-vector oracle.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::f2lin::{bit_string, dot};
use crate::lp::{check_primal_feasible, PrimalSolution};
use crate::povm::wht;
use crate::profiles::AmplitudeProfile;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Shots per independently seeded chunk.
pub const CHUNK: usize = 4096;
/// Largest n for the state-vector oracle.
pub const STATEVECTOR_BUDGET: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeRecord {
    pub h: Vec<String>,
    pub k: usize,
    pub y: String,
    pub count: Option<u64>,
    pub probability: f64,
}

#[derive(Clone, Debug)]
pub struct ExactOutcome<S> {
    pub code: usize,
    pub y: u32,
    pub probability: S,
}

fn check_x(p: &AmplitudeProfile, x: u32) -> Result<()> {
    if x as usize >= p.dim() {
        return Err(Error::Dimension(format!("x = {x} outside F_2^{}", p.n())));
    }
    Ok(())
}

fn check_feasible<S: Scalar>(sol: &PrimalSolution<S>, p: &AmplitudeProfile) -> Result<()> {
    let rep = check_primal_feasible(sol, p, &S::from_f64(1e-9))?;
    if !rep.feasible() {
        return Err(Error::Infeasible(format!("{} primal constraints violated", rep.violations.len())));
    }
    Ok(())
}

/// Pr(H, Hx) = Σ_i λ_i^H·w_i; every other y has probability 0 and is omitted.
pub fn exact_distribution<S: Scalar>(sol: &PrimalSolution<S>, p: &AmplitudeProfile, x: u32) -> Result<Vec<ExactOutcome<S>>> {
    check_x(p, x)?;
    check_feasible(sol, p)?;
    let book = sol.book();
    Ok(sol
        .support()
        .into_iter()
        .map(|ci| ExactOutcome { code: ci, y: book.get(ci).code.parity(x), probability: sol.code_mass(ci) })
        .collect())
}

/// Outcomes of a sampling run, in shot order.
#[derive(Clone, Debug)]
pub struct SampleRun {
    pub seed: u64,
    pub x: u32,
    pub outcomes: Vec<(usize, u32)>,
}

impl SampleRun {
    pub fn shots(&self) -> usize {
        self.outcomes.len()
    }

    /// Counts per (code, y), ordered by code then y.
    pub fn histogram(&self) -> BTreeMap<(usize, u32), u64> {
        let mut h = BTreeMap::new();
        for o in &self.outcomes {
            *h.entry(*o).or_insert(0) += 1;
        }
        h
    }
}

/// Draws i ~ w, then H ~ λ_i^H, and records (H, Hx).
///
/// Shots are cut into fixed chunks of [`CHUNK`]; chunk c uses ChaCha8 seeded
/// with `seed` on stream c, so the sequence does not depend on thread count.
pub fn sample<S: Scalar>(sol: &PrimalSolution<S>, p: &AmplitudeProfile, x: u32, shots: usize, seed: u64) -> Result<SampleRun> {
    check_x(p, x)?;
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    check_feasible(sol, p)?;
    let book = sol.book();
    let w: Vec<f64> = (0..p.dim() as u32).map(|i| p.weight_f64(i)).collect();
    let index_dist = WeightedIndex::new(&w).map_err(|e| Error::InvalidProfile(e.to_string()))?;
    let support = sol.support();
    let bottom = book.bottom();
    let code_dists: Vec<Option<(Vec<usize>, WeightedIndex<f64>)>> = (0..p.dim() as u32)
        .map(|i| {
            if w[i as usize] == 0.0 {
                return None;
            }
            let mut codes = Vec::new();
            let mut probs = Vec::new();
            for &ci in &support {
                let l = sol.lambda(ci, i, p).to_f64();
                if l > 0.0 {
                    codes.push(ci);
                    probs.push(l);
                }
            }
            if codes.is_empty() {
                codes.push(bottom);
                probs.push(1.0);
            }
            Some((codes, WeightedIndex::new(&probs).expect("positive weights")))
        })
        .collect();
    let parities: Vec<u32> = (0..book.len()).map(|ci| book.get(ci).code.parity(x)).collect();

    let chunks = shots.div_ceil(CHUNK);
    let outcomes: Vec<(usize, u32)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(shots - c * CHUNK);
            (0..len)
                .map(|_| {
                    let i = index_dist.sample(&mut rng);
                    let (codes, dist) = code_dists[i].as_ref().expect("sampled index has positive weight");
                    let ci = codes[dist.sample(&mut rng)];
                    (ci, parities[ci])
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SampleRun { seed, x, outcomes })
}

#[derive(Clone, Debug, Serialize)]
pub struct StatevectorReport {
    pub norm_deviation: f64,
    /// Closed form versus the state obtained by evolving ψ_x.
    pub closed_vs_direct: f64,
    pub max_distribution_deviation: f64,
    /// Largest amplitude on a first-register value y ≠ Hx.
    pub max_wrong_register_amplitude: f64,
    pub first_register_is_hx: bool,
}

/// Builds the post-measurement-unitary state twice and compares.
///
/// Closed form: Σ_H |Hx⟩ ⊗ Σ_s (−1)^{x·v_s}·√(2^k)·√μ_s^H |s⟩ ⊗ |H⟩.
/// Direct: Σ_H Σ_i (−1)^{i·x}·α̂_i·√λ_i^H·(|α̂_i|/α̂_i)|î⟩|H⟩, with î = Hᵀt + v_s
/// relabelled as |t̂⟩|s⟩ and the t register taken to the computational basis.
pub fn statevector_check<S: Scalar>(sol: &PrimalSolution<S>, p: &AmplitudeProfile, x: u32) -> Result<StatevectorReport> {
    let n = p.n();
    if n > STATEVECTOR_BUDGET {
        return Err(Error::Budget { what: "state vector", n, limit: STATEVECTOR_BUDGET });
    }
    check_x(p, x)?;
    p.require_full_support()?;
    let exact = exact_distribution(sol, p, x)?;
    let alpha = p.amplitudes_or_real();
    let book = sol.book();
    let mut norm = 0.0;
    let mut closed_vs_direct = 0.0f64;
    let mut wrong = 0.0f64;
    let mut dist_dev = 0.0f64;
    for e in &exact {
        let entry = book.get(e.code);
        let (code, cos) = (&entry.code, &entry.cosets);
        let k = code.k();
        let hx = code.parity(x) as usize;
        let mut prob = 0.0;
        for s in 0..cos.num_cosets() {
            let mu = sol.mu(e.code, s as u32).to_f64().max(0.0);
            let v = cos.r_min[s];
            let closed = if dot(x, v) { -1.0 } else { 1.0 } * ((1u64 << k) as f64 * mu).sqrt();

            let mut reg: Vec<Complex64> = (0..1u32 << k)
                .map(|t| {
                    let i = code.h().transpose_mul(t) ^ v;
                    let a = alpha[i as usize];
                    let lam = sol.lambda(e.code, i, p).to_f64().max(0.0);
                    let phase = a.norm() / a;
                    let sgn = if dot(i, x) { -1.0 } else { 1.0 };
                    a * phase * lam.sqrt() * sgn
                })
                .collect();
            wht(&mut reg);
            let sc = ((1u64 << k) as f64).sqrt().recip();
            for (y, amp) in reg.iter().enumerate() {
                let amp = amp * sc;
                let want = if y == hx { Complex64::new(closed, 0.0) } else { Complex64::new(0.0, 0.0) };
                closed_vs_direct = closed_vs_direct.max((amp - want).norm());
                if y != hx {
                    wrong = wrong.max(amp.norm());
                }
            }
            norm += closed * closed;
            prob += closed * closed;
        }
        dist_dev = dist_dev.max((prob - e.probability.to_f64()).abs());
    }
    Ok(StatevectorReport {
        norm_deviation: (norm - 1.0).abs(),
        closed_vs_direct,
        max_distribution_deviation: dist_dev,
        max_wrong_register_amplitude: wrong,
        first_register_is_hx: wrong <= 1e-12,
    })
}

/// Outcome table combining counts (if sampled) and exact probabilities.
pub fn outcome_records<S: Scalar>(
    sol: &PrimalSolution<S>,
    exact: &[ExactOutcome<S>],
    run: Option<&SampleRun>,
) -> Vec<OutcomeRecord> {
    let book = sol.book();
    let n = book.n();
    let hist = run.map(SampleRun::histogram).unwrap_or_default();
    let mut keys: Vec<(usize, u32)> = exact.iter().map(|e| (e.code, e.y)).collect();
    keys.extend(hist.keys().copied());
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(ci, y)| {
            let code = &book.get(ci).code;
            let prob = exact.iter().find(|e| e.code == ci && e.y == y).map(|e| e.probability.to_f64()).unwrap_or(0.0);
            OutcomeRecord {
                h: code.h().rows().iter().map(|&r| bit_string(r, n)).collect(),
                k: code.k(),
                y: bit_string(y, code.k()),
                count: run.map(|_| hist.get(&(ci, y)).copied().unwrap_or(0)),
                probability: prob,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::solve_primal;
    use crate::profiles::{bernoulli_profile, CostFunction};
    use crate::scalar::{rat, Rational};
    use crate::F2Matrix;

    #[test]
    fn full_recovery_n1() {
        let p = AmplitudeProfile::uniform(1).unwrap();
        let (_, sol) = solve_primal::<Rational>(&p, &CostFunction::average(1)).unwrap();
        let full = sol.book().lookup(&F2Matrix::identity(1)).unwrap();
        let d = exact_distribution(&sol, &p, 1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].code, d[0].y, d[0].probability.clone()), (full, 1, rat(1, 1)));
        let run = sample(&sol, &p, 1, 100_000, 7).unwrap();
        assert!(run.outcomes.iter().all(|&o| o == (full, 1)));
        let sv = statevector_check(&sol, &p, 0).unwrap();
        assert!(sv.norm_deviation < 1e-12 && sv.closed_vs_direct < 1e-12 && sv.first_register_is_hx);
    }

    #[test]
    fn all_bottom() {
        let p = AmplitudeProfile::uniform(2).unwrap();
        let sol = PrimalSolution::<Rational>::all_bottom(&p).unwrap();
        let d = exact_distribution(&sol, &p, 2).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].probability, rat(1, 1));
        let run = sample(&sol, &p, 2, 1000, 1).unwrap();
        assert!(run.outcomes.iter().all(|o| o.0 == sol.book().bottom()));
    }

    #[test]
    fn bernoulli_expected_parities() {
        let p = bernoulli_profile(2, 0.1).unwrap();
        let (_, sol) = solve_primal::<f64>(&p, &CostFunction::average(2)).unwrap();
        for x in 0..4 {
            let d = exact_distribution(&sol, &p, x).unwrap();
            let ek: f64 = d.iter().map(|e| sol.book().get(e.code).code.k() as f64 * e.probability).sum();
            assert!((ek - 0.8).abs() < 1e-9);
        }
    }

    #[test]
    fn seeded_reproducible() {
        let p = AmplitudeProfile::from_exact(2, vec![rat(1, 20), rat(3, 20), rat(3, 10), rat(1, 2)]).unwrap();
        let (_, sol) = solve_primal::<Rational>(&p, &CostFunction::average(2)).unwrap();
        let a = sample(&sol, &p, 3, 10_000, 42).unwrap();
        let b = sample(&sol, &p, 3, 10_000, 42).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        let c = sample(&sol, &p, 3, 10_000, 43).unwrap();
        assert_ne!(a.outcomes, c.outcomes);
        assert!(sample(&sol, &p, 3, 0, 1).is_err());
        assert!(sample(&sol, &p, 4, 1, 1).is_err());
    }
}
