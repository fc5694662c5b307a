//! Line-oriented regression data: closed-form twisted coproducts and
//! classical r-matrices of chain stages.
//!
//! Each line of a golden file is a JSON object:
//!
//! ```text
//! {"kind": "chain", "preset": "so9"}
//! {"kind": "coproduct", "stage": "J0", "generator": "E_{1}", "formula": "..."}
//! {"kind": "coproduct", "stage": "B1<0", "generator": "E_{3+4}", "formula": "0", "extends": "J1E0J0"}
//! {"kind": "r_matrix", "stage": "B1<0", "formula": "..."}
//! ```
//!
//! `extends` adds the formula recorded for the same generator at another
//! stage. `near_miss` carries a variant that must *not* match.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::hopf::{primitive_coproduct, r_matrix};
use super::report::VerificationReport;
use super::suite::infinitesimal_spec;
use super::VerifyError;
use crate::chain::{build_chain, Chain, ExtensionForm};
use crate::exact::ExactMatrix;
use crate::expr::{Evaluator, Expr, TensorPoly, TwistElement};

pub const SO9_GOLDEN: &str = include_str!("../../data/so9_golden.jsonl");
pub const SO9_GOLDEN_NAME: &str = "so9_golden.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GoldenEntry {
    Chain {
        preset: String,
    },
    Coproduct {
        stage: String,
        generator: String,
        formula: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        extends: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        near_miss: Option<String>,
    },
    RMatrix {
        stage: String,
        formula: String,
    },
}

#[derive(Debug, Clone)]
pub struct GoldenFile {
    pub name: String,
    /// `(1-based line number, entry)`.
    pub entries: Vec<(usize, GoldenEntry)>,
}

impl GoldenFile {
    pub fn parse(name: &str, text: &str) -> Result<Self, VerifyError> {
        let mut entries = Vec::new();
        for (k, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let e: GoldenEntry = serde_json::from_str(line).map_err(|err| VerifyError::Golden {
                file: name.into(),
                line: k + 1,
                msg: err.to_string(),
            })?;
            entries.push((k + 1, e));
        }
        Ok(GoldenFile { name: name.into(), entries })
    }

    pub fn so9() -> Self {
        Self::parse(SO9_GOLDEN_NAME, SO9_GOLDEN).expect("bundled golden data parses")
    }

    pub fn preset(&self) -> Option<&str> {
        self.entries.iter().find_map(|(_, e)| match e {
            GoldenEntry::Chain { preset } => Some(preset.as_str()),
            _ => None,
        })
    }

    fn error(&self, line: usize, msg: impl Into<String>) -> VerifyError {
        VerifyError::Golden { file: self.name.clone(), line, msg: msg.into() }
    }
}

/// Canonical spelling of a stage name (`B10` is accepted for `B1<0`).
pub fn canonical_stage(stage: &str) -> String {
    match stage.strip_prefix('B').and_then(|r| r.strip_suffix('0')) {
        Some(k) if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) => format!("B{k}<0"),
        _ => stage.to_string(),
    }
}

/// The partial twist named by `stage`: a word in `Jk` (Jordanian factor of
/// level k), `Ek` (extension of level k) and `Bk<0` (complete levels k down
/// to 0), read left to right as a product.
pub fn stage_twist(chain: &Chain, stage: &str) -> Option<TwistElement> {
    let bytes = stage.as_bytes();
    let mut pos = 0;
    let mut out = TwistElement::identity(2);
    while pos < bytes.len() {
        let kind = bytes[pos];
        pos += 1;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let k: usize = stage[start..pos].parse().ok()?;
        let level = chain.levels.get(k)?;
        let part = match kind {
            b'J' => TwistElement::single(format!("Phi_J{k}"), level.jordanian_factor().arg),
            b'E' => TwistElement::from_factors(2, level.extension_factors(ExtensionForm::Factored)).ok()?,
            b'B' => {
                pos = stage.len() - stage[pos..].strip_prefix("<0")?.len();
                chain.partial(0, k)
            }
            _ => return None,
        };
        out = out.then(&part).ok()?;
    }
    Some(out)
}

/// Result of one golden line.
#[derive(Debug, Clone, Serialize)]
pub struct GoldenOutcome {
    pub line: usize,
    pub stage: String,
    pub generator: Option<String>,
    pub report: VerificationReport,
    /// For lines with a near-miss variant: whether the near-miss variant was rejected.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub near_miss_rejected: Option<bool>,
}

impl GoldenOutcome {
    /// The formula matched and any near-miss variant did not.
    pub fn ok(&self) -> bool {
        self.report.pass && self.near_miss_rejected != Some(false)
    }
}

fn parse_formula(file: &GoldenFile, line: usize, s: &str) -> Result<TensorPoly, VerifyError> {
    let e: Expr = s.parse().map_err(|err| file.error(line, format!("formula: {err}")))?;
    let legs = e.legs().iter().copied().max().map_or(1, |m| m as usize + 1).max(2);
    if legs != 2 {
        return Err(file.error(line, format!("formula uses {legs} legs")));
    }
    Ok(TensorPoly::from_expr(2, &e))
}

/// Checks every line of `file` against `chain` (optionally only the lines
/// of one stage).
pub fn run_golden(chain: &Chain, file: &GoldenFile, stage: Option<&str>) -> Result<Vec<GoldenOutcome>, VerifyError> {
    let rep = chain.algebra.rep().clone();
    let mut ev = Evaluator::new(&rep);
    let want = stage.map(canonical_stage);
    let mut formulas: HashMap<(String, String), TensorPoly> = HashMap::new();
    let mut twists: HashMap<String, (ExactMatrix, ExactMatrix)> = HashMap::new();
    let mut out = Vec::new();
    for (line, entry) in &file.entries {
        let line = *line;
        match entry {
            GoldenEntry::Chain { .. } => {}
            GoldenEntry::Coproduct { stage: st, generator, formula, extends, near_miss } => {
                let st = canonical_stage(st);
                let base = match extends {
                    Some(prev) => formulas
                        .get(&(canonical_stage(prev), generator.clone()))
                        .cloned()
                        .ok_or_else(|| file.error(line, format!("no earlier line for {generator} at stage {prev}")))?,
                    None => TensorPoly::zero(2),
                };
                let expected = base.add(&parse_formula(file, line, formula)?)?;
                formulas.insert((st.clone(), generator.clone()), expected.clone());
                if want.as_ref().is_some_and(|w| *w != st) {
                    continue;
                }
                if rep.get(generator).is_none() {
                    return Err(file.error(line, format!("unknown generator {generator}")));
                }
                if !twists.contains_key(&st) {
                    let f = stage_twist(chain, &st).ok_or_else(|| file.error(line, format!("unknown stage {st}")))?;
                    twists.insert(st.clone(), (f.eval(&mut ev)?, f.inverse().eval(&mut ev)?));
                }
                let (fm, finv) = &twists[&st];
                let actual = fm.mul(&primitive_coproduct(&Expr::gen(generator), &mut ev)?)?.mul(finv)?;
                let report = VerificationReport::from_residual("golden/coproduct", &actual.sub(&expected.eval(&mut ev)?)?)
                    .with_subject(format!("{}:{line} {st} {generator}", file.name));
                let near_miss_rejected = match near_miss {
                    Some(alt) => {
                        let alt = base.add(&parse_formula(file, line, alt)?)?;
                        Some(!actual.sub(&alt.eval(&mut ev)?)?.is_zero())
                    }
                    None => None,
                };
                out.push(GoldenOutcome { line, stage: st, generator: Some(generator.clone()), report, near_miss_rejected });
            }
            GoldenEntry::RMatrix { stage: st, formula } => {
                let st = canonical_stage(st);
                if want.as_ref().is_some_and(|w| *w != st) {
                    continue;
                }
                let expected = parse_formula(file, line, formula)?.eval(&mut ev)?;
                let report = check_r_line(chain, &st, &expected, &mut ev)
                    .map_err(|e| file.error(line, e.to_string()))?
                    .with_subject(format!("{}:{line} {st} r", file.name));
                out.push(GoldenOutcome { line, stage: st, generator: None, report, near_miss_rejected: None });
            }
        }
    }
    Ok(out)
}

/// The classical r-matrix of the first `k+1` levels equals `expected`, and
/// so does the eps part of `R21` for the infinitesimal chain.
fn check_r_line(chain: &Chain, stage: &str, expected: &ExactMatrix, ev: &mut Evaluator) -> Result<VerificationReport, VerifyError> {
    let k = stage
        .strip_prefix('B')
        .and_then(|r| r.strip_suffix("<0"))
        .and_then(|k| k.parse::<usize>().ok())
        .ok_or_else(|| VerifyError::Unsupported(format!("r-matrix lines need a complete stage Bk<0, got {stage}")))?;
    let terms: Vec<_> = chain.levels.iter().take(k + 1).flat_map(|l| l.classical_r()).collect();
    let classical = crate::chain::wedge_poly(&terms).eval(ev)?;
    let inf = build_chain(&infinitesimal_spec(&chain.spec, &[])?)?;
    let f = inf.partial(0, k);
    let r = r_matrix(&f, ev)?;
    let d = ev.leg_dim();
    let first = r.permute_legs(d, &[1, 0]).epsilon_coefficient();
    Ok(VerificationReport::from_residuals(
        "golden/r_matrix",
        &[("classical r".into(), classical.sub(expected)?), ("eps(R21)".into(), first.sub(expected)?)],
    ))
}
