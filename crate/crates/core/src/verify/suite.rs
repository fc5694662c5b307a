//! Predicate suites over built chains.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hopf::{
    check_antipode, check_counit, check_cybe, check_inverse, check_primitivity, check_qybe, check_triangular,
    check_twist_equation, primitive_coproduct, r_matrix, twist_equation_residual,
};
use super::report::VerificationReport;
use super::VerifyError;
use crate::chain::{
    build_chain, build_improper_sp, build_sp_counterexample, InvariantHalves, effective_levels, wedge_poly, Chain, ChainSpec, ExtensionForm, ImproperVariant,
    LevelSpec,
};
use crate::exact::{ExactMatrix, Scalar};
use crate::expr::{Evaluator, Expr, TwistElement};
use crate::lie::{build_adjoint, AlgebraDescriptor, Representation, RootVector, Series};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepChoice {
    #[default]
    Defining,
    /// Adjoint representation of the chain carrier.
    Adjoint,
}

impl RepChoice {
    pub fn name(self) -> &'static str {
        match self {
            RepChoice::Defining => "defining",
            RepChoice::Adjoint => "adjoint",
        }
    }
}

/// The representation used for `chain` under `choice`, with a note on the
/// center when the adjoint is not faithful.
pub fn chain_rep(chain: &Chain, choice: RepChoice) -> Result<(Representation, Option<String>), VerifyError> {
    match choice {
        RepChoice::Defining => Ok((chain.algebra.rep().clone(), None)),
        RepChoice::Adjoint => {
            let ad = build_adjoint(chain.algebra.rep(), &chain.carrier())?;
            let note = (!ad.center.is_empty()).then(|| format!("center acts as zero: {}", ad.center.join(", ")));
            Ok((ad.rep, note))
        }
    }
}

/// `spec` with every level parameter replaced by `eta_k * eps` (missing
/// multipliers default to 1).
pub fn infinitesimal_spec(spec: &ChainSpec, etas: &[Scalar]) -> Result<ChainSpec, VerifyError> {
    let levels: Vec<LevelSpec> = effective_levels(spec)?
        .into_iter()
        .enumerate()
        .map(|(k, l)| {
            let eta = etas.get(k).cloned().unwrap_or(Scalar::ONE);
            LevelSpec { xi: eta.mul(&Scalar::eps(crate::exact::Gaussian::ONE)), ..l }
        })
        .collect();
    Ok(ChainSpec { levels: Some(levels), ..spec.clone() })
}

/// With `xi_k = eta_k eps`: the eps-free part of `R` is `1` and the eps
/// coefficient of `R = F21 F^-1` is `-r`, i.e. that of `R21` is `r`.
pub fn semiclassical_match(spec: &ChainSpec, etas: &[Scalar], rep: &Representation) -> Result<VerificationReport, VerifyError> {
    let chain = build_chain(&infinitesimal_spec(spec, etas)?)?;
    let mut ev = Evaluator::new(rep);
    let r = r_matrix(&chain.twist, &mut ev)?;
    let body = r.epsilon_free().sub(&ExactMatrix::identity(r.dim()))?;
    let classical = chain.classical_r().eval(&mut ev)?;
    let first = r.epsilon_coefficient().add(&classical)?;
    Ok(VerificationReport::from_residuals(
        "semiclassical",
        &[("eps-free part of R".into(), body), ("eps(R) + r".into(), first)],
    ))
}

/// Primitivity of the next level's carrier after each complete level
/// twist and after its Jordanian factor alone.
pub fn matreshka_complete(chain: &Chain, ev: &mut Evaluator) -> Result<Vec<VerificationReport>, VerifyError> {
    let mut out = Vec::new();
    for k in 0..chain.levels.len().saturating_sub(1) {
        let next = chain.levels[k + 1].generators();
        let lt = chain.level_twist(k);
        let r = check_primitivity(&lt, &next, ev)?;
        out.push(VerificationReport { check: format!("matreshka/level{k}/complete"), ..r });
        let j = TwistElement::single(format!("Phi_J{k}"), chain.levels[k].jordanian_factor().arg);
        let r = check_primitivity(&j, &next, ev)?;
        out.push(VerificationReport { check: format!("matreshka/level{k}/jordanian"), ..r });
    }
    Ok(out)
}

/// For each level with at least two pairs, drops one extension factor at a
/// time; each such incomplete product must break the primitivity of some
/// next-level generator.
pub fn matreshka_incomplete(chain: &Chain, ev: &mut Evaluator) -> Result<Vec<VerificationReport>, VerifyError> {
    let mut out = Vec::new();
    for k in 0..chain.levels.len().saturating_sub(1) {
        let level = &chain.levels[k];
        if level.pairs.len() < 2 {
            continue;
        }
        let gens = chain.levels[k + 1].generators();
        let full = level.twist(ExtensionForm::Factored);
        for (skip, p) in level.pairs.iter().enumerate() {
            let r = check_primitivity(&full.select(|i, _| i != skip), &gens, ev)?;
            let detail = match &r.detail {
                Some(d) if !r.pass => format!("nonprimitive as expected ({d})"),
                _ => "expected a nonprimitive generator, all stayed primitive".into(),
            };
            out.push(VerificationReport {
                check: format!("matreshka/level{k}/without[{}]", p.first.label()),
                pass: !r.pass,
                detail: Some(detail),
                ..r
            });
        }
    }
    Ok(out)
}

/// The summed and factored forms of every extension agree.
pub fn check_extension_forms(chain: &Chain, ev: &mut Evaluator) -> Result<VerificationReport, VerifyError> {
    let mut parts = Vec::new();
    for level in &chain.levels {
        let a = level.twist(ExtensionForm::Factored).eval(ev)?;
        let b = level.twist(ExtensionForm::Summed).eval(ev)?;
        parts.push((format!("level {}", level.index), a.sub(&b)?));
    }
    Ok(VerificationReport::from_residuals("extension_forms", &parts))
}

fn run(
    out: &mut Vec<VerificationReport>,
    timing: bool,
    f: impl FnOnce() -> Result<VerificationReport, VerifyError>,
) -> Result<(), VerifyError> {
    let start = Instant::now();
    let r = f()?;
    out.push(if timing { r.timed(start) } else { r });
    Ok(())
}

/// Options of [`chain_suite`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    pub rep: RepChoice,
    pub timing: bool,
    /// Include the dropped-factor matreshka checks.
    pub incomplete: bool,
}

/// Counit, inverse, twist equation, triangularity, QYBE, CYBE,
/// semiclassical limit, matreshka, extension forms and antipode.
pub fn chain_suite(chain: &Chain, subject: &str, opts: SuiteOptions) -> Result<Vec<VerificationReport>, VerifyError> {
    let (rep, note) = chain_rep(chain, opts.rep)?;
    let d = rep.dim();
    let mut ev = Evaluator::new(&rep);
    let mut out = Vec::new();
    let f = &chain.twist;
    run(&mut out, opts.timing, || check_counit(f, &mut ev))?;
    run(&mut out, opts.timing, || check_inverse(f, &mut ev))?;
    run(&mut out, opts.timing, || check_twist_equation(f, &mut ev))?;
    let start = Instant::now();
    let r = r_matrix(f, &mut ev)?;
    let r_ms = start.elapsed();
    run(&mut out, opts.timing, || check_triangular(&r, d))?;
    if let (true, Some(last)) = (opts.timing, out.last_mut()) {
        last.ms = last.ms.map(|m| m + r_ms.as_millis() as u64);
    }
    run(&mut out, opts.timing, || check_qybe(&r, d))?;
    run(&mut out, opts.timing, || check_cybe(&chain.classical_r(), &mut ev))?;
    run(&mut out, opts.timing, || semiclassical_match(&chain.spec, &[], &rep))?;
    let start = Instant::now();
    for r in matreshka_complete(chain, &mut ev)? {
        out.push(if opts.timing { r.timed(start) } else { r });
    }
    if opts.incomplete {
        let start = Instant::now();
        for r in matreshka_incomplete(chain, &mut ev)? {
            out.push(if opts.timing { r.timed(start) } else { r });
        }
    }
    run(&mut out, opts.timing, || check_extension_forms(chain, &mut ev))?;
    let carrier = chain.carrier();
    run(&mut out, opts.timing, || check_antipode(f, &carrier, &rep))?;
    Ok(out
        .into_iter()
        .map(|r| {
            let r = r.with_subject(subject).with_rep(opts.rep.name());
            match (&note, &r.detail) {
                (Some(n), None) => r.with_detail(n.clone()),
                _ => r,
            }
        })
        .collect())
}

/// Chain specifications of the sweep up to `max_rank`: sl(N) for N <= 6,
/// so(2M+1) for 2 <= M <= 4, so(2M) for 2 <= M <= 5 and improper sp(2n)
/// for n <= 3 (all three variants at n = 3).
pub fn sweep_specs(max_rank: usize) -> Vec<(String, ChainSpec)> {
    let mut out = Vec::new();
    let mut add = |series: Series, ranks: std::ops::RangeInclusive<usize>| {
        for rank in ranks.filter(|r| *r <= max_rank) {
            out.push((series.algebra_name(rank), ChainSpec::default_chain(AlgebraDescriptor::new(series, rank))));
        }
    };
    add(Series::A, 1..=5);
    add(Series::B, 2..=4);
    add(Series::D, 2..=5);
    for rank in (2..=3).filter(|r| *r <= max_rank) {
        let name = Series::C.algebra_name(rank);
        let variants: &[ImproperVariant] = if rank == 3 {
            &[ImproperVariant::ShortSl, ImproperVariant::ShortPlus, ImproperVariant::LongRoot]
        } else {
            &[ImproperVariant::ShortSl, ImproperVariant::LongRoot]
        };
        for v in variants {
            let spec = build_improper_sp(rank, *v).expect("rank >= 2");
            let tag = serde_json::to_value(v).expect("enum").as_str().unwrap_or_default().to_string();
            out.push((format!("{name}/{tag}"), spec));
        }
    }
    out
}

/// Runs [`chain_suite`] over `specs` in parallel; results keep input order.
pub fn run_sweep(
    specs: &[(String, ChainSpec)],
    opts: SuiteOptions,
) -> Vec<(String, Result<Vec<VerificationReport>, VerifyError>)> {
    specs
        .par_iter()
        .map(|(name, spec)| {
            let res = build_chain(spec).map_err(VerifyError::from).and_then(|c| chain_suite(&c, name, opts));
            (name.clone(), res)
        })
        .collect()
}

/// Two Heisenberg carriers in sl(N) meeting in `E_{1N}`, after the
/// Jordanian twist on `e1-eN`: `F_B = Phi_E[e1-e2]` commutes with the
/// `Phi_J`-twisted coproducts of `C = {E_{1-3}, E_{3-N}, E_{1-N}}`, and
/// `F_C F_B Phi_J` solves the twist equation.
pub fn carrier_composition(n: usize) -> Result<Vec<VerificationReport>, VerifyError> {
    if n < 4 {
        return Err(VerifyError::Unsupported(format!("sl({n}) has no two Heisenberg carriers")));
    }
    let root = RootVector::pair(n, 1, 1, n, -1);
    let spec = ChainSpec::with_levels(AlgebraDescriptor::new(Series::A, n - 1), vec![LevelSpec::new(root)]);
    let chain = build_chain(&spec)?;
    let level = &chain.levels[0];
    let ext = level.extension_factors(ExtensionForm::Factored);
    let j = TwistElement::single("Phi_J", level.jordanian_factor().arg);
    let fb = TwistElement::from_factors(2, vec![ext[0].clone()])?;
    let fc = TwistElement::from_factors(2, vec![ext[1].clone()])?;
    let rep = chain.algebra.rep();
    let mut ev = Evaluator::new(rep);
    let jm = j.eval(&mut ev)?;
    let jinv = j.inverse().eval(&mut ev)?;
    let fbm = fb.eval(&mut ev)?;
    let (a, b) = level.pairs[1].names();
    let names = [a, b, level.e.clone()];
    let mut parts = Vec::new();
    for g in &names {
        let dj = jm.mul(&primitive_coproduct(&Expr::gen(g), &mut ev)?)?.mul(&jinv)?;
        parts.push((g.clone(), fbm.commutator(&dj)?));
    }
    let subject = format!("sl({n})");
    let commute = VerificationReport::from_residuals("carriers/commutes", &parts).with_subject(subject.clone());
    let composed = fc.then(&fb)?.then(&j)?;
    let twist = VerificationReport::from_residual("carriers/twist_equation", &twist_equation_residual(&composed, &mut ev)?)
        .with_subject(subject);
    Ok(vec![commute, twist])
}

/// Twist equation of the sp(2n) element built from the improper
/// invariant halves; with both halves present it is not a twist.
pub fn check_sp_counterexample(rank: usize, halves: InvariantHalves) -> Result<VerificationReport, VerifyError> {
    let f = build_sp_counterexample(rank, halves)?;
    let mut alg = crate::lie::build_defining(&AlgebraDescriptor::raw(Series::C, rank))?;
    alg.ensure_cartan(&RootVector::pair(rank, 1, 1, 2, -1));
    let mut ev = Evaluator::new(alg.rep());
    let subject = format!("{}/{}", Series::C.algebra_name(rank), halves.name());
    Ok(check_twist_equation(&f, &mut ev)?.with_subject(subject))
}

/// Residual-free check that `wedge_poly` is skew.
pub fn check_skew(terms: &[crate::chain::RTerm], ev: &mut Evaluator) -> Result<VerificationReport, VerifyError> {
    let r = wedge_poly(terms);
    let a = r.eval(ev)?;
    let b = r.permute_legs(&[2, 1])?.eval(ev)?;
    Ok(VerificationReport::from_residual("skew", &a.add(&b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::preset;

    fn suite_of(name: &str, rep: RepChoice) -> Vec<VerificationReport> {
        let p = preset(name).unwrap();
        let crate::chain::PresetKind::Chain(spec) = p.kind else { panic!("not a chain") };
        let chain = build_chain(&spec).unwrap();
        chain_suite(&chain, name, SuiteOptions { rep, timing: true, incomplete: true }).unwrap()
    }

    fn assert_all_pass(reports: &[VerificationReport]) {
        for r in reports {
            eprintln!("{} {} {} {:?} {:?}", r.subject, r.check, r.pass, r.ms, r.detail);
        }
        let bad: Vec<_> = reports.iter().filter(|r| !r.pass).map(|r| r.check.clone()).collect();
        assert!(bad.is_empty(), "failed: {bad:?}");
    }

    #[test]
    fn sl4_suite() {
        assert_all_pass(&suite_of("sl4", RepChoice::Defining));
    }

    #[test]
    fn so5_and_sp4_suites() {
        assert_all_pass(&suite_of("so5", RepChoice::Defining));
        assert_all_pass(&suite_of("sp4", RepChoice::Defining));
    }

    #[test]
    fn sl3_adjoint() {
        assert_all_pass(&suite_of("sl3", RepChoice::Adjoint));
    }

    #[test]
    fn prop_instance_sl4() {
        assert_all_pass(&carrier_composition(4).unwrap());
    }

    #[test]
    fn sp6_counterexample() {
        assert!(!check_sp_counterexample(3, InvariantHalves::Both).unwrap().pass);
        assert!(check_sp_counterexample(3, InvariantHalves::PlusOnly).unwrap().pass);
    }

    #[test]
    fn so9_suite_timed() {
        let t = std::time::Instant::now();
        assert_all_pass(&suite_of("so9", RepChoice::Defining));
        eprintln!("so9 defining {:?}", t.elapsed());
        let t = std::time::Instant::now();
        assert_all_pass(&suite_of("so9", RepChoice::Adjoint));
        eprintln!("so9 adjoint {:?}", t.elapsed());
    }
}
