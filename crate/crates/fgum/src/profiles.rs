//! Fourier amplitude profiles of symmetric state families and cost functions.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::f2lin::{bit_string, weight, MAX_N};
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::{Error, Result};

/// Float-mode normalization tolerance.
pub const FLOAT_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// Squared Fourier amplitudes w_i = |α̂_i|² of |ψ_0⟩, optionally with the complex α̂_i.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeProfile {
    n: usize,
    weights: Weights,
    amplitudes: Option<Vec<Complex64>>,
}

impl AmplitudeProfile {
    pub fn from_exact(n: usize, weights: Vec<Rational>) -> Result<Self> {
        check_len(n, weights.len())?;
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidProfile(format!("negative weight at {}", bit_string(i as u32, n))));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidProfile(format!("weights sum to {} instead of 1", total.render())));
        }
        Ok(AmplitudeProfile { n, weights: Weights::Exact(weights), amplitudes: None })
    }

    pub fn from_float(n: usize, weights: Vec<f64>) -> Result<Self> {
        check_len(n, weights.len())?;
        check_float_weights(n, &weights)?;
        Ok(AmplitudeProfile { n, weights: Weights::Float(weights), amplitudes: None })
    }

    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_len(n, amplitudes.len())?;
        let weights: Vec<f64> = amplitudes.iter().map(|a| a.norm_sqr()).collect();
        check_float_weights(n, &weights)?;
        Ok(AmplitudeProfile { n, weights: Weights::Float(weights), amplitudes: Some(amplitudes) })
    }

    /// Attaches amplitudes to an existing weight vector (|α̂_i|² must match within 1e-12).
    pub fn with_amplitudes(mut self, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_len(self.n, amplitudes.len())?;
        for (i, a) in amplitudes.iter().enumerate() {
            if (a.norm_sqr() - self.weight_f64(i as u32)).abs() > FLOAT_SUM_TOL {
                return Err(Error::InvalidProfile(format!(
                    "|amplitude|² differs from weight at {}",
                    bit_string(i as u32, self.n)
                )));
            }
        }
        self.amplitudes = Some(amplitudes);
        Ok(self)
    }

    /// Attaches the real nonnegative amplitudes √w_i.
    pub fn with_real_amplitudes(self) -> Self {
        let amps = self.real_amplitudes();
        AmplitudeProfile { amplitudes: Some(amps), ..self }
    }

    pub fn uniform(n: usize) -> Result<Self> {
        let d = 1i64 << n;
        AmplitudeProfile::from_exact(n, vec![Rational::new(1.into(), d.into()); d as usize])
    }

    pub fn point_mass(n: usize, at: u32) -> Result<Self> {
        let mut w = vec![Rational::zero(); 1 << n];
        *w.get_mut(at as usize).ok_or_else(|| Error::Dimension(format!("index {at} outside F_2^{n}")))? =
            Rational::one();
        AmplitudeProfile::from_exact(n, w)
    }

    /// Exact product profile with per-coordinate dual rate `p`: w_i = p^{|i|}(1−p)^{n−|i|}.
    pub fn product(n: usize, p: &Rational) -> Result<Self> {
        if p.is_negative() || *p > Rational::one() {
            return Err(Error::InvalidArgument(format!("rate {} outside [0,1]", p.render())));
        }
        let q = Rational::one() - p;
        let w = (0..1u32 << n)
            .map(|i| {
                let k = weight(i);
                num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), n - k)
            })
            .collect();
        AmplitudeProfile::from_exact(n, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.weights, Weights::Exact(_))
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        self.amplitudes.as_deref()
    }

    /// The stored amplitudes, or √w_i when only weights were given.
    pub fn amplitudes_or_real(&self) -> Vec<Complex64> {
        self.amplitudes.clone().unwrap_or_else(|| self.real_amplitudes())
    }

    fn real_amplitudes(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| Complex64::new(self.weight_f64(i as u32).sqrt(), 0.0)).collect()
    }

    pub fn weight_f64(&self, i: u32) -> f64 {
        match &self.weights {
            Weights::Exact(w) => w[i as usize].to_f64(),
            Weights::Float(w) => w[i as usize],
        }
    }

    pub fn weight_as<S: Scalar>(&self, i: u32) -> S {
        match &self.weights {
            Weights::Exact(w) => S::from_rational(&w[i as usize]),
            Weights::Float(w) => S::from_f64(w[i as usize]),
        }
    }

    pub fn weights_as<S: Scalar>(&self) -> Vec<S> {
        (0..self.dim() as u32).map(|i| self.weight_as(i)).collect()
    }

    /// Whether w_i is exactly zero.
    pub fn is_zero_weight(&self, i: u32) -> bool {
        match &self.weights {
            Weights::Exact(w) => w[i as usize].is_zero(),
            Weights::Float(w) => w[i as usize] == 0.0,
        }
    }

    pub fn zero_set(&self) -> Vec<u32> {
        (0..self.dim() as u32).filter(|&i| self.is_zero_weight(i)).collect()
    }

    pub fn full_support(&self) -> bool {
        self.zero_set().is_empty()
    }

    /// Error naming the first zero-weight index, if any.
    pub fn require_full_support(&self) -> Result<()> {
        match self.zero_set().first() {
            Some(&i) => Err(Error::ZeroWeight { index: bit_string(i, self.n) }),
            None => Ok(()),
        }
    }

    /// Σ |i|·w_i.
    pub fn average_dual_weight<S: Scalar>(&self) -> S {
        (0..self.dim() as u32).fold(S::zero(), |acc, i| acc + S::from_i64(weight(i) as i64) * self.weight_as(i))
    }

    /// Σ_{|i|>d} w_i.
    pub fn tail_mass<S: Scalar>(&self, d: usize) -> S {
        (0..self.dim() as u32).filter(|&i| weight(i) > d).fold(S::zero(), |acc, i| acc + self.weight_as(i))
    }

    /// Moves mass δ uniformly onto the zero-weight indices; unchanged when there are none.
    pub fn perturb_full_support(&self, delta: &Rational) -> Result<Self> {
        if !delta.is_positive() || *delta > Rational::one() {
            return Err(Error::InvalidArgument(format!("delta {} outside (0,1]", delta.render())));
        }
        let zeros = self.zero_set();
        if zeros.is_empty() {
            return Ok(self.clone());
        }
        let t = zeros.len();
        let keep = Rational::one() - delta;
        let share = delta / Rational::from_integer(t.into());
        let weights = match &self.weights {
            Weights::Exact(w) => Weights::Exact(
                w.iter().map(|x| if x.is_zero() { share.clone() } else { x * &keep }).collect(),
            ),
            Weights::Float(w) => {
                let (k, s) = (keep.to_f64(), share.to_f64());
                Weights::Float(w.iter().map(|&x| if x == 0.0 { s } else { x * k }).collect())
            }
        };
        let amplitudes = self.amplitudes.as_ref().map(|a| {
            let (k, s) = (keep.to_f64().sqrt(), share.to_f64().sqrt());
            a.iter()
                .enumerate()
                .map(|(i, &z)| if self.is_zero_weight(i as u32) { Complex64::new(s, 0.0) } else { z * k })
                .collect()
        });
        Ok(AmplitudeProfile { n: self.n, weights, amplitudes })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: ProfileJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_profile()
    }

    pub fn to_json(&self) -> Value {
        let weights: Vec<Value> = match &self.weights {
            Weights::Exact(w) => w.iter().map(|x| Value::String(x.render())).collect(),
            Weights::Float(w) => w.iter().map(|&x| serde_json::json!(x)).collect(),
        };
        let mut obj = serde_json::json!({ "n": self.n, "weights": weights });
        if let Some(a) = &self.amplitudes {
            obj["amplitudes"] = a.iter().map(|z| serde_json::json!({"re": z.re, "im": z.im})).collect();
        }
        obj
    }
}

fn check_len(n: usize, len: usize) -> Result<()> {
    if n > MAX_N {
        return Err(Error::Budget { what: "profile dimension", n, limit: MAX_N });
    }
    if len != 1 << n {
        return Err(Error::InvalidProfile(format!("expected {} entries for n = {n}, got {len}", 1usize << n)));
    }
    Ok(())
}

fn check_float_weights(n: usize, w: &[f64]) -> Result<()> {
    if let Some(i) = w.iter().position(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidProfile(format!("invalid weight at {}", bit_string(i as u32, n))));
    }
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() > FLOAT_SUM_TOL {
        return Err(Error::InvalidProfile(format!("weights sum to {total} instead of 1")));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileJson {
    n: usize,
    #[serde(default)]
    weights: Option<Vec<Value>>,
    #[serde(default)]
    amplitudes: Option<Vec<ComplexJson>>,
}

#[derive(Deserialize, Serialize, Clone, Copy)]
struct ComplexJson {
    re: f64,
    #[serde(default)]
    im: f64,
}

impl ProfileJson {
    fn into_profile(self) -> Result<AmplitudeProfile> {
        let n = self.n;
        let amps = self.amplitudes.map(|a| a.into_iter().map(|z| Complex64::new(z.re, z.im)).collect::<Vec<_>>());
        match (self.weights, amps) {
            (None, None) => Err(Error::Parse("profile needs \"weights\" or \"amplitudes\"".into())),
            (None, Some(a)) => AmplitudeProfile::from_amplitudes(n, a),
            (Some(w), amps) => {
                let p = if w.iter().all(Value::is_string) {
                    let exact = w
                        .iter()
                        .map(|v| parse_rational(v.as_str().unwrap()))
                        .collect::<Result<Vec<_>>>()?;
                    AmplitudeProfile::from_exact(n, exact)?
                } else {
                    let fl = w
                        .iter()
                        .map(|v| match v {
                            Value::Number(x) => x.as_f64().ok_or_else(|| Error::Parse(format!("bad number {x}"))),
                            Value::String(s) => parse_rational(s).map(|r| r.to_f64()),
                            other => Err(Error::Parse(format!("weight must be a number or string, got {other}"))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    AmplitudeProfile::from_float(n, fl)?
                };
                match amps {
                    Some(a) => p.with_amplitudes(a),
                    None => Ok(p),
                }
            }
        }
    }
}

/// t and the dual rate t_perp = 1/2 − √(t(1−t)).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BernoulliParams {
    pub t: f64,
    pub t_perp: f64,
}

impl BernoulliParams {
    pub fn new(t: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&t) {
            return Err(Error::InvalidArgument(format!("error rate {t} outside [0, 1/2]")));
        }
        Ok(BernoulliParams { t, t_perp: 0.5 - (t * (1.0 - t)).sqrt() })
    }
}

/// Fourier profile of the n-fold product of √(1−t)|0⟩ + √t|1⟩.
pub fn bernoulli_profile(n: usize, t: f64) -> Result<AmplitudeProfile> {
    let bp = BernoulliParams::new(t)?;
    if n > MAX_N {
        return Err(Error::Budget { what: "profile dimension", n, limit: MAX_N });
    }
    let a0 = ((1.0 - t).sqrt() + t.sqrt()) / std::f64::consts::SQRT_2;
    let a1 = ((1.0 - t).sqrt() - t.sqrt()) / std::f64::consts::SQRT_2;
    let weights: Vec<f64> = (0..1u32 << n)
        .map(|i| bp.t_perp.powi(weight(i) as i32) * (1.0 - bp.t_perp).powi((n - weight(i)) as i32))
        .collect();
    let amps: Vec<Complex64> = (0..1u32 << n)
        .map(|i| Complex64::new(a1.powi(weight(i) as i32) * a0.powi((n - weight(i)) as i32), 0.0))
        .collect();
    // Renormalize the rounding drift so the float sum check holds at larger n.
    let total: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.into_iter().map(|w| w / total).collect();
    let amps = amps.into_iter().map(|a| a / total.sqrt()).collect();
    Ok(AmplitudeProfile { n, weights: Weights::Float(weights), amplitudes: Some(amps) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CostKind {
    Average,
    Threshold { tau: usize },
    Custom,
}

/// Score C(k) for learning k independent parities, k = 0..=n.
#[derive(Clone, Debug, PartialEq)]
pub struct CostFunction {
    kind: CostKind,
    values: Vec<Rational>,
}

impl CostFunction {
    pub fn average(n: usize) -> Self {
        CostFunction { kind: CostKind::Average, values: (0..=n).map(|k| Rational::from_integer(k.into())).collect() }
    }

    pub fn threshold(n: usize, tau: usize) -> Result<Self> {
        if tau == 0 || tau > n {
            return Err(Error::InvalidCost(format!("threshold tau = {tau} outside [1, {n}]")));
        }
        let values = (0..=n).map(|k| if k >= tau { Rational::one() } else { Rational::zero() }).collect();
        Ok(CostFunction { kind: CostKind::Threshold { tau }, values })
    }

    pub fn custom(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidCost("no values".into()));
        }
        if values.iter().any(|v| v.is_negative()) {
            return Err(Error::InvalidCost("values must be nonnegative".into()));
        }
        Ok(CostFunction { kind: CostKind::Custom, values })
    }

    pub fn kind(&self) -> &CostKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value<S: Scalar>(&self, k: usize) -> S {
        S::from_rational(&self.values[k])
    }

    pub fn max_value(&self) -> Rational {
        self.values.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn check_n(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::Dimension(format!("cost covers k = 0..={}, profile has n = {n}", self.n())));
        }
        Ok(())
    }

    /// Parses the cost JSON (`{"kind":"average"}`, `{"kind":"threshold","tau":2}`,
    /// `{"kind":"custom","values":[...]}`) for dimension n.
    pub fn from_json_str(s: &str, n: usize) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        CostFunction::from_json(&v, n)
    }

    pub fn from_json(v: &Value, n: usize) -> Result<Self> {
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Parse("cost needs \"kind\"".into()))?;
        match kind {
            "average" => Ok(CostFunction::average(n)),
            "threshold" => {
                let tau = v.get("tau").and_then(Value::as_u64).ok_or_else(|| Error::Parse("threshold needs \"tau\"".into()))?;
                CostFunction::threshold(n, tau as usize)
            }
            "custom" => {
                let vals = v
                    .get("values")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("custom cost needs \"values\"".into()))?;
                let vals = vals
                    .iter()
                    .map(|x| match x {
                        Value::String(s) => parse_rational(s),
                        // Decimal text of the number, so 0.1 becomes 1/10.
                        Value::Number(num) => parse_rational(&num.to_string()),
                        other => Err(Error::Parse(format!("cost value must be a number or string, got {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let c = CostFunction::custom(vals)?;
                c.check_n(n)?;
                Ok(c)
            }
            other => Err(Error::Parse(format!("unknown cost kind {other:?}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(&self.kind).unwrap();
        v["values"] = self.values.iter().map(|x| Value::String(x.render())).collect();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn bernoulli_examples() {
        let p = bernoulli_profile(1, 0.1).unwrap();
        assert!((p.weight_f64(0) - 0.8).abs() < 1e-12 && (p.weight_f64(1) - 0.2).abs() < 1e-12);
        // Noiseless: |0…0⟩ has a flat Fourier profile.
        let p = bernoulli_profile(2, 0.0).unwrap();
        assert!((0..4).all(|i| (p.weight_f64(i) - 0.25).abs() < 1e-15));
        // t = 1/2: |+…+⟩ is the zero frequency.
        let p = bernoulli_profile(1, 0.5).unwrap();
        assert!((p.weight_f64(0) - 1.0).abs() < 1e-12);
        assert_eq!(p.weight_f64(1), 0.0);
        assert!(bernoulli_profile(2, 0.6).is_err());
        assert!(bernoulli_profile(2, -0.1).is_err());
    }

    #[test]
    fn bernoulli_average_is_n_tperp() {
        for (n, t) in [(1, 0.1), (3, 0.25), (5, 0.05)] {
            let p = bernoulli_profile(n, t).unwrap();
            let tp = BernoulliParams::new(t).unwrap().t_perp;
            assert!((p.average_dual_weight::<f64>() - n as f64 * tp).abs() < 1e-12);
        }
    }

    #[test]
    fn perturb_examples() {
        let p = AmplitudeProfile::from_exact(1, vec![rat(1, 1), rat(0, 1)]).unwrap();
        let q = p.perturb_full_support(&rat(1, 2)).unwrap();
        assert_eq!(q.weights(), &Weights::Exact(vec![rat(1, 2), rat(1, 2)]));

        let u = AmplitudeProfile::uniform(2).unwrap();
        assert_eq!(u.perturb_full_support(&rat(1, 10)).unwrap(), u);

        let p = AmplitudeProfile::from_exact(2, vec![rat(1, 2), rat(1, 2), rat(0, 1), rat(0, 1)]).unwrap();
        let q = p.perturb_full_support(&rat(1, 10)).unwrap();
        assert_eq!(q.weights(), &Weights::Exact(vec![rat(9, 20), rat(9, 20), rat(1, 20), rat(1, 20)]));
        assert!(q.full_support());
        assert!(p.perturb_full_support(&rat(0, 1)).is_err());
    }

    #[test]
    fn averages_and_tails() {
        let u = AmplitudeProfile::uniform(2).unwrap();
        assert_eq!(u.average_dual_weight::<Rational>(), rat(1, 1));
        let pm = AmplitudeProfile::point_mass(3, 0).unwrap();
        for d in 0..=3 {
            assert_eq!(pm.tail_mass::<Rational>(d), rat(0, 1));
        }
        assert_eq!(u.tail_mass::<Rational>(0), rat(3, 4));
    }

    #[test]
    fn json_parsing() {
        let p = AmplitudeProfile::from_json_str(r#"{"n":2,"weights":["1/4","1/4","1/4","1/4"]}"#).unwrap();
        assert!(p.is_exact());
        let p = AmplitudeProfile::from_json_str(r#"{"n":1,"weights":[0.8,0.2]}"#).unwrap();
        assert!(!p.is_exact());
        let p = AmplitudeProfile::from_json_str(r#"{"n":1,"amplitudes":[{"re":0.6,"im":0.0},{"re":0.0,"im":0.8}]}"#)
            .unwrap();
        assert!((p.weight_f64(1) - 0.64).abs() < 1e-12);
        assert!(AmplitudeProfile::from_json_str(r#"{"n":1,"weights":["1/2","1/3"]}"#).is_err());
        assert!(AmplitudeProfile::from_json_str(r#"{"n":2,"weights":["1/2","1/2"]}"#).is_err());
        assert!(AmplitudeProfile::from_json_str("{").is_err());
        let back = AmplitudeProfile::from_json_str(&p.to_json().to_string()).unwrap();
        assert!((back.weight_f64(1) - 0.64).abs() < 1e-12);
    }

    #[test]
    fn cost_functions() {
        let c = CostFunction::average(3);
        assert_eq!(c.value::<Rational>(2), rat(2, 1));
        let t = CostFunction::threshold(3, 2).unwrap();
        assert_eq!(t.values(), &[rat(0, 1), rat(0, 1), rat(1, 1), rat(1, 1)]);
        assert!(CostFunction::threshold(3, 4).is_err());
        assert!(CostFunction::custom(vec![rat(-1, 1)]).is_err());
        let j = CostFunction::from_json_str(r#"{"kind":"custom","values":[0, 0.1, "1/3"]}"#, 2).unwrap();
        assert_eq!(j.values(), &[rat(0, 1), rat(1, 10), rat(1, 3)]);
        assert!(CostFunction::from_json_str(r#"{"kind":"custom","values":[0, 1]}"#, 2).is_err());
        assert_eq!(
            CostFunction::from_json_str(r#"{"kind":"threshold","tau":2}"#, 2).unwrap(),
            CostFunction::threshold(2, 2).unwrap()
        );
    }
}
