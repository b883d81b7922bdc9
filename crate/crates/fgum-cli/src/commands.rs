use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use fgum::bounds::{
    ball_tau, dual_cohamming, dual_hamming, dual_spike, dual_threshold_ball, dual_threshold_indicator, is_average,
    n2_optimal, primal_candidate, threshold_zero_certificate, DualCertificate, PrimalFamily,
};
use fgum::f2lin::{bit_string, enumerate_all_codes, enumerate_codes, gaussian_binomial, parse_bits, CODE_BUDGET};
use fgum::lp::{check_dual_feasible, check_primal_feasible, complementary_slackness, solve_both, solve_primal, LP_BUDGET};
use fgum::povm::{build_from_primal, fourier_diag_check, rho_eval, verify, PovmTolerances};
use fgum::profiles::{bernoulli_profile, BernoulliParams};
use fgum::simulate::{exact_distribution, outcome_records, sample, statevector_check, STATEVECTOR_BUDGET};
use fgum::{AmplitudeProfile, CostFunction, Error, Rational, Scalar};

use crate::render::to_table;
use crate::{CandidateFamily, Cli, Command, CostArgs, Format, Mode, OutputArgs, TolArgs, VerifyFamily};

/// Statevector oracle thresholds.
const SV_NORM_TOL: f64 = 1e-12;
const SV_DIST_TOL: f64 = 1e-10;

/// Runs the command; Ok(false) means a requested audit failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let config = serde_json::to_value(&cli.command)?;
    match &cli.command {
        Command::Solve { input, cost, tol, output } => {
            tol.check()?;
            let p = load_profile(&input.profile)?;
            let c = load_cost(cost, p.n())?;
            let (report, pass) = match input.mode {
                Mode::Exact => solve::<Rational>(&p, &c, tol)?,
                Mode::Float => solve::<f64>(&p, &c, tol)?,
            };
            emit(report, config, pass, output, None)
        }
        Command::Verify { input, family, d, gamma, tau, set, tol, output } => {
            tol.check()?;
            let p = load_profile(&input.profile)?;
            let args = VerifyArgs { family: *family, d: *d, gamma: *gamma, tau: *tau, set: set.as_deref() };
            let (report, pass) = match input.mode {
                Mode::Exact => verify_family::<Rational>(&p, &args, tol)?,
                Mode::Float => verify_family::<f64>(&p, &args, tol)?,
            };
            emit(report, config, pass, output, None)
        }
        Command::PrimalCandidate { input, family, tol, output } => {
            tol.check()?;
            let p = load_profile(&input.profile)?;
            let fam = candidate_family(*family);
            let (report, pass) = match input.mode {
                Mode::Exact => candidate::<Rational>(&p, fam, tol)?,
                Mode::Float => candidate::<f64>(&p, fam, tol)?,
            };
            emit(report, config, pass, output, None)
        }
        Command::Povm { input, cost, tol, output } => {
            tol.check()?;
            let p = load_profile(&input.profile)?;
            let c = load_cost(cost, p.n())?;
            let (report, pass, artifact) = match input.mode {
                Mode::Exact => povm::<Rational>(&p, &c, tol)?,
                Mode::Float => povm::<f64>(&p, &c, tol)?,
            };
            emit(report, config, pass, output, Some(artifact))
        }
        Command::Simulate { input, cost, x, shots, seed, tol, output } => {
            tol.check()?;
            let p = load_profile(&input.profile)?;
            let c = load_cost(cost, p.n())?;
            let x = parse_bits(x, p.n()).with_context(|| format!("--x must be a {}-bit string", p.n()))?;
            let seed = match (shots, seed) {
                (0, s) => s.unwrap_or(0),
                (_, Some(s)) => *s,
                (_, None) => bail!("--seed is required when --shots > 0"),
            };
            let (report, pass, artifact) = match input.mode {
                Mode::Exact => simulate::<Rational>(&p, &c, x, *shots, seed)?,
                Mode::Float => simulate::<f64>(&p, &c, x, *shots, seed)?,
            };
            emit(report, config, pass, output, Some(artifact))
        }
        Command::Slpn { n, t, gamma, d, tol, output } => {
            tol.check()?;
            let (report, pass) = slpn(*n, *t, *gamma, *d, tol)?;
            emit(report, config, pass, output, None)
        }
        Command::Threshold { input, tau, output } => {
            let p = load_profile(&input.profile)?;
            let cert = threshold_zero_certificate(&p, *tau)?;
            let pass = cert.consistent;
            let report = json!({ "rho_is_zero": cert.rho_is_zero(), "certificate": cert });
            emit(report, config, pass, output, None)
        }
        Command::Enumerate { n, k, cosets, output } => {
            let (report, pass) = enumerate(*n, *k, *cosets)?;
            emit(report, config, pass, output, None)
        }
    }
}

impl TolArgs {
    fn check(&self) -> Result<()> {
        let all = [
            ("tol-lp", self.tol_lp),
            ("tol-positivity", self.tol_positivity),
            ("tol-completeness", self.tol_completeness),
            ("tol-unambiguity", self.tol_unambiguity),
            ("tol-symmetry", self.tol_symmetry),
            ("tol-coset", self.tol_coset),
            ("tol-rho", self.tol_rho),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                bail!("--{name} must be positive, got {v}");
            }
        }
        Ok(())
    }

    fn povm(&self) -> PovmTolerances {
        PovmTolerances {
            positivity: self.tol_positivity,
            completeness: self.tol_completeness,
            unambiguity: self.tol_unambiguity,
            symmetry: self.tol_symmetry,
            coset_constancy: self.tol_coset,
            ..PovmTolerances::default()
        }
    }
}

fn emit(mut report: Value, config: Value, pass: bool, output: &OutputArgs, artifact: Option<Value>) -> Result<bool> {
    report["config"] = config;
    report["pass"] = json!(pass);
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&report)?,
        Format::Table => to_table(&report),
    };
    // A closed pipe (e.g. `| head`) is not an error for a report.
    let _ = writeln!(std::io::stdout().lock(), "{}", text.trim_end());
    if let Some(path) = &output.out {
        let body = match artifact {
            Some(mut a) => {
                a["config"] = report["config"].clone();
                a
            }
            None => report,
        };
        fs::write(path, serde_json::to_string_pretty(&body)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(pass)
}

fn load_profile(path: &Path) -> Result<AmplitudeProfile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading profile {}", path.display()))?;
    AmplitudeProfile::from_json_str(&text).map_err(|e| anyhow!("profile {}: {e}", path.display()))
}

fn load_cost(args: &CostArgs, n: usize) -> Result<CostFunction> {
    if args.tau.is_some() && args.cost != "threshold" {
        bail!("--tau only applies to --cost threshold");
    }
    Ok(match args.cost.as_str() {
        "average" => CostFunction::average(n),
        "threshold" => {
            let tau = args.tau.ok_or_else(|| anyhow!("--cost threshold needs --tau"))?;
            CostFunction::threshold(n, tau)?
        }
        s if s.trim_start().starts_with('{') => CostFunction::from_json_str(s, n)?,
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("reading cost {path}"))?;
            CostFunction::from_json_str(&text, n).map_err(|e| anyhow!("cost {path}: {e}"))?
        }
    })
}

fn gap_ok<S: Scalar>(gap: &S, tol: f64) -> bool {
    if S::EXACT {
        gap.is_zero()
    } else {
        gap.abs_val().to_f64() <= tol
    }
}

fn solve<S: Scalar>(p: &AmplitudeProfile, c: &CostFunction, tol: &TolArgs) -> Result<(Value, bool)> {
    let run = solve_both::<S>(p, c)?;
    let t = S::from_f64(tol.tol_lp);
    let gap = run.gap();
    let pf = check_primal_feasible(&run.primal, p, &t)?;
    let df = check_dual_feasible(&run.dual, c, &t)?;
    let cs = complementary_slackness(&run.primal, &run.dual, p, c, &t)?;
    let closed = gap_ok(&gap, tol.tol_lp);
    let mut report = json!({
        "profile": p.to_json(),
        "cost": c.to_json(),
        "rho": run.rho.render(),
        "sigma": run.sigma.render(),
        "gap": gap.render(),
        "rho_f64": run.rho.to_f64(),
        "primal_solve": run.primal_report.to_json(),
        "dual_solve": run.dual_report.to_json(),
        "primal": run.primal.to_json(c),
        "dual": run.dual.to_json(),
        "audits": {
            "primal_feasibility": pf,
            "dual_feasibility": df,
            "complementary_slackness": cs,
            "gap_closed": closed,
        },
    });
    let mut pass = closed && pf.feasible() && df.feasible() && cs.certified;
    if p.n() == 2 && is_average(c) {
        let r = n2_optimal::<S>(p)?;
        let agrees = gap_ok(&(r.value.clone() - run.rho.clone()), tol.tol_lp);
        report["n2_rule"] = json!({ "regime": r.regime, "value": r.value.render(), "agrees_with_lp": agrees });
        pass &= agrees;
    }
    Ok((report, pass))
}

struct VerifyArgs<'a> {
    family: VerifyFamily,
    d: Option<usize>,
    gamma: Option<f64>,
    tau: Option<usize>,
    set: Option<&'a str>,
}

fn candidate_family(f: CandidateFamily) -> PrimalFamily {
    match f {
        CandidateFamily::Hamming => PrimalFamily::Hamming,
        CandidateFamily::Cohamming => PrimalFamily::Cohamming,
        CandidateFamily::Spike => PrimalFamily::Spike,
    }
}

fn verify_family<S: Scalar>(p: &AmplitudeProfile, a: &VerifyArgs, tol: &TolArgs) -> Result<(Value, bool)> {
    let n = p.n();
    let (cert, paired): (DualCertificate<S>, Option<PrimalFamily>) = match a.family {
        VerifyFamily::Hamming => (dual_hamming(n), Some(PrimalFamily::Hamming)),
        VerifyFamily::Cohamming => (dual_cohamming(n), Some(PrimalFamily::Cohamming)),
        VerifyFamily::Spike => (dual_spike(n), Some(PrimalFamily::Spike)),
        VerifyFamily::ThresholdBall => {
            let d = a.d.ok_or_else(|| anyhow!("threshold-ball needs --d"))?;
            let gamma = a.gamma.ok_or_else(|| anyhow!("threshold-ball needs --gamma"))?;
            (dual_threshold_ball(n, d, gamma)?, None)
        }
        VerifyFamily::ThresholdSet => {
            let tau = a.tau.ok_or_else(|| anyhow!("threshold-set needs --tau"))?;
            let set = match a.set {
                Some(s) => s
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| parse_bits(t.trim(), n))
                    .collect::<fgum::Result<Vec<_>>>()?,
                None => p.zero_set(),
            };
            (dual_threshold_indicator(&set, tau, n)?, None)
        }
    };
    let t = S::from_f64(tol.tol_lp);
    let audit = cert.audit(&t)?;
    let objective = cert.objective(p);
    let mut report = json!({
        "profile": p.to_json(),
        "certificate": cert.to_json(Some(p), &t)?,
        "objective": objective.render(),
        "objective_f64": objective.to_f64(),
    });
    if n <= LP_BUDGET {
        let (r, _) = solve_primal::<S>(p, &cert.cost)?;
        let rho = r.optimum()?.clone();
        let gap = objective.clone() - rho.clone();
        report["lp_optimum"] = json!(rho.render());
        report["gap"] = json!(gap.render());
        report["gap_f64"] = json!(gap.to_f64());
        report["tight"] = json!(gap_ok(&gap, tol.tol_lp));
    }
    if let Some(fam) = paired {
        report["primal_candidate"] = if p.full_support() {
            let cand = primal_candidate::<S>(fam, p)?;
            let cs = complementary_slackness(&cand.solution, &cert.solution, p, &cert.cost, &t)?;
            json!({ "nonnegative": cand.nonnegative, "objective": cand.objective.render(), "slackness": cs })
        } else {
            json!("skipped: profile lacks full support")
        };
    }
    Ok((report, audit.feasible()))
}

fn candidate<S: Scalar>(p: &AmplitudeProfile, fam: PrimalFamily, tol: &TolArgs) -> Result<(Value, bool)> {
    let c = CostFunction::average(p.n());
    let t = S::from_f64(tol.tol_lp);
    let cand = primal_candidate::<S>(fam, p)?;
    let dual = fam.paired_dual::<S>(p.n());
    let cs = complementary_slackness(&cand.solution, &dual.solution, p, &c, &t)?;
    let pass = cand.nonnegative && cs.certified;
    let report = json!({
        "family": fam,
        "profile": p.to_json(),
        "nonnegative": cand.nonnegative,
        "objective": cand.objective.render(),
        "objective_f64": cand.objective.to_f64(),
        "paired_dual_objective": dual.objective(p).render(),
        "slackness": cs,
        "solution": cand.solution.to_json(&c),
    });
    Ok((report, pass))
}

fn povm<S: Scalar>(p: &AmplitudeProfile, c: &CostFunction, tol: &TolArgs) -> Result<(Value, bool, Value)> {
    let (r, sol) = solve_primal::<S>(p, c)?;
    let rho = r.optimum()?.to_f64();
    let f = build_from_primal(&sol, p).map_err(|e| match e {
        Error::MissingAmplitudes => {
            anyhow!("{e}; add an \"amplitudes\" array of {{\"re\",\"im\"}} entries to the profile JSON")
        }
        other => other.into(),
    })?;
    let rep = verify(&f, p, &tol.povm())?;
    let value = rho_eval(&f, p, c)?;
    let fourier = fourier_diag_check(&f, p);
    let fourier_ok = fourier.max_offdiag <= tol.tol_coset && fourier.max_coset_spread <= tol.tol_coset;
    let rho_ok = (value - rho).abs() <= tol.tol_rho;
    let pass = rep.in_gamma_s() && fourier_ok && rho_ok;
    let report = json!({
        "rho_lp": rho,
        "rho_eval": value,
        "rho_matches": rho_ok,
        "elements": f.elements().len(),
        "verification": rep,
        "in_gamma": rep.in_gamma(),
        "in_gamma_s": rep.in_gamma_s(),
        "fourier": fourier,
        "fourier_diagonal": fourier_ok,
    });
    let artifact = json!({ "povm": f.to_json(), "report": report.clone() });
    Ok((report, pass, artifact))
}

fn simulate<S: Scalar>(p: &AmplitudeProfile, c: &CostFunction, x: u32, shots: usize, seed: u64) -> Result<(Value, bool, Value)> {
    let n = p.n();
    let (_, sol) = solve_primal::<S>(p, c)?;
    let exact = exact_distribution(&sol, p, x)?;
    let run = if shots > 0 { Some(sample(&sol, p, x, shots, seed)?) } else { None };
    let book = sol.book();
    let y_ok = run.as_ref().map_or(true, |r| r.outcomes.iter().all(|&(ci, y)| book.get(ci).code.h().mul_vec(x) == y));
    let mut records = serde_json::to_value(outcome_records(&sol, &exact, run.as_ref()))?;
    let mut bands_ok = true;
    if let Some(r) = &run {
        let total = r.shots() as f64;
        for rec in records.as_array_mut().unwrap() {
            let prob = rec["probability"].as_f64().unwrap();
            let count = rec["count"].as_u64().unwrap() as f64;
            let sigma = (total * prob * (1.0 - prob)).sqrt();
            let ok = (count - total * prob).abs() <= 3.0 * sigma + 1e-9;
            bands_ok &= ok;
            rec["within_3_sigma"] = json!(ok);
        }
    }
    let sv = if p.full_support() && n <= STATEVECTOR_BUDGET {
        let r = statevector_check(&sol, p, x)?;
        let ok = r.norm_deviation <= SV_NORM_TOL
            && r.max_distribution_deviation <= SV_DIST_TOL
            && r.closed_vs_direct <= SV_DIST_TOL
            && r.first_register_is_hx;
        Some((r, ok))
    } else {
        None
    };
    let pass = y_ok && sv.as_ref().map_or(true, |s| s.1);
    let expected_k: f64 = exact.iter().map(|e| book.get(e.code).code.k() as f64 * e.probability.to_f64()).sum();
    let report = json!({
        "x": bit_string(x, n),
        "seed": seed,
        "shots": shots,
        "expected_parities": expected_k,
        "outcomes": records,
        "y_equals_hx": y_ok,
        "within_3_sigma": run.as_ref().map(|_| bands_ok),
        "statevector": match &sv {
            Some((r, ok)) => json!({ "report": r, "pass": ok }),
            None => json!("skipped: needs full support and n <= 8"),
        },
    });
    let artifact = json!({ "x": report["x"], "seed": seed, "shots": shots, "outcomes": report["outcomes"] });
    Ok((report, pass, artifact))
}

fn slpn(n: usize, t: f64, gamma: Option<f64>, d: Option<usize>, tol: &TolArgs) -> Result<(Value, bool)> {
    let params = BernoulliParams::new(t)?;
    let p = bernoulli_profile(n, t)?;
    let avg = CostFunction::average(n);
    let (r, _) = solve_primal::<f64>(&p, &avg)?;
    let rho = *r.optimum()?;
    let hamming = dual_hamming::<f64>(n).objective(&p);
    let closed = 2.0 * n as f64 * params.t_perp;
    let tight = (rho - hamming).abs() <= tol.tol_lp && (hamming - closed).abs() <= tol.tol_lp;
    // k = ρ_Av parities recovered; the dual codeword weight reached is t_perp·n.
    let dual_weight = params.t_perp * n as f64;
    let mut report = json!({
        "n": n,
        "t": t,
        "t_perp": params.t_perp,
        "rho_av": rho,
        "hamming_bound": hamming,
        "two_n_t_perp": closed,
        "hamming_tight": tight,
        "prange": {
            "k": rho,
            "k_over_2": rho / 2.0,
            "dual_weight": dual_weight,
            "beats_barrier": dual_weight < rho / 2.0 - tol.tol_lp,
            "note": "k = rho_av parities lead to dual codewords of weight t_perp*n = k/2, matching the Prange weight without going below it",
        },
    });
    let mut pass = tight;
    match (gamma, d) {
        (Some(gamma), Some(d)) => {
            let tau = ball_tau(d, gamma);
            let mut th = json!({ "d": d, "gamma": gamma, "tau": tau });
            if tau > n {
                th["status"] = json!(format!("tau = {tau} exceeds n = {n}"));
            } else {
                let cert = dual_threshold_ball::<f64>(n, d, gamma)?;
                let audit = cert.audit(&tol.tol_lp)?;
                let bound = cert.objective(&p);
                th["ball_bound"] = json!(bound);
                th["tail_mass"] = json!(p.tail_mass::<f64>(d));
                th["certificate_feasible"] = json!(audit.feasible());
                pass &= audit.feasible();
                let (rt, _) = solve_primal::<f64>(&p, &CostFunction::threshold(n, tau)?)?;
                let val = *rt.optimum()?;
                th["lp_value"] = json!(val);
                th["bound_holds"] = json!(val <= bound + tol.tol_lp);
                pass &= val <= bound + tol.tol_lp;
            }
            report["threshold"] = th;
        }
        (None, None) => {}
        _ => bail!("--gamma and --d must be given together"),
    }
    Ok((report, pass))
}

fn enumerate(n: usize, k: Option<usize>, cosets: bool) -> Result<(Value, bool)> {
    if n > CODE_BUDGET {
        return Err(Error::Budget { what: "code enumeration", n, limit: CODE_BUDGET }.into());
    }
    let (codes, expected) = match k {
        Some(k) if k > n => bail!("k = {k} exceeds n = {n}"),
        Some(k) => (enumerate_codes(n, k)?, gaussian_binomial(n, k)),
        None => (enumerate_all_codes(n)?, (0..=n).map(|k| gaussian_binomial(n, k)).sum()),
    };
    let list: Vec<Value> = codes
        .iter()
        .map(|code| {
            let mut v = json!({ "k": code.k(), "H": code.h(), "G": code.g() });
            if cosets {
                let part = code.cosets();
                v["cosets"] = (0..part.num_cosets())
                    .map(|s| {
                        json!({
                            "s": bit_string(s as u32, n - code.k()),
                            "r_min": bit_string(part.r_min[s], n),
                            "r_max": bit_string(part.r_max[s], n),
                        })
                    })
                    .collect();
            }
            v
        })
        .collect();
    let pass = codes.len() as u64 == expected;
    Ok((json!({ "n": n, "count": codes.len(), "gaussian_binomial": expected, "codes": list }), pass))
}
