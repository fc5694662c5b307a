//! Assembly of chains of extended Jordanian twists from a [`ChainSpec`].

use serde::Serialize;

use super::levels::{check_initial, constituent_pairs, default_levels, LevelRoots, RootError};
use super::spec::{ChainSpec, ExtensionForm, LevelSpec, Theta};
use crate::exact::{Rational, Scalar};
use crate::expr::{ExpFactor, Expr, LegError, TensorPoly, TwistElement};
use crate::lie::{build_defining, cartan_name, root_name, ClassicalAlgebra, LieError, RootVector, Series};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Leg(#[from] LegError),
    #[error("series C needs an improper chain (set \"improper\": true)")]
    ImproperRequired,
    #[error("improper chains are only defined for series C")]
    NotSymplectic,
    #[error("rank {0} too small for this construction")]
    RankTooSmall(usize),
}

/// A constituent pair with its weight `c` in the extension factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolvedPair {
    pub first: RootVector,
    pub second: RootVector,
    pub coeff: Scalar,
}

impl ResolvedPair {
    pub fn names(&self) -> (String, String) {
        (root_name(&self.first), root_name(&self.second))
    }
}

/// One level of a built chain: carrier generator names and parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolvedLevel {
    pub index: usize,
    pub initial: RootVector,
    pub h: String,
    pub e: String,
    pub xi: Scalar,
    pub pairs: Vec<ResolvedPair>,
}

impl ResolvedLevel {
    /// Multiplier of this level in the classical r-matrix: the
    /// infinitesimal part of `xi`, or `xi` itself when it has none.
    pub fn eta(&self) -> Scalar {
        if self.xi.has_eps() {
            self.xi.eps_scalar()
        } else {
            self.xi.clone()
        }
    }

    pub fn roots(&self) -> LevelRoots {
        LevelRoots {
            initial: self.initial.clone(),
            pairs: self.pairs.iter().map(|p| (p.first.clone(), p.second.clone())).collect(),
        }
    }

    /// `H, E, L', L'', ...` in pair order.
    pub fn generators(&self) -> Vec<String> {
        let mut out = vec![self.h.clone(), self.e.clone()];
        for p in &self.pairs {
            let (a, b) = p.names();
            out.push(a);
            out.push(b);
        }
        out
    }

    fn sigma_arg(&self) -> Expr {
        Expr::scale(self.xi.clone(), Expr::gen(&self.e))
    }

    /// `exp(H (x) log(1 + xi E))`.
    pub fn jordanian_factor(&self) -> ExpFactor {
        let arg = TensorPoly::from_tuples(2, [(Scalar::ONE, vec![Expr::gen(&self.h), Expr::log1p(self.sigma_arg())])])
            .expect("two legs");
        ExpFactor { label: format!("Phi_J{}", self.index), arg }
    }

    fn pair_term(&self, p: &ResolvedPair) -> (Scalar, Vec<Expr>) {
        let (a, b) = p.names();
        let damp = Expr::pow1p(self.sigma_arg(), Rational::new(-1, 2));
        (p.coeff.mul(&self.xi), vec![Expr::gen(&a), Expr::prod([Expr::gen(&b), damp])])
    }

    /// Extension factors: one per pair, or a single summed one.
    pub fn extension_factors(&self, form: ExtensionForm) -> Vec<ExpFactor> {
        match form {
            ExtensionForm::Factored => self
                .pairs
                .iter()
                .map(|p| ExpFactor {
                    label: format!("Phi_E{}[{}]", self.index, p.first.label()),
                    arg: TensorPoly::from_tuples(2, [self.pair_term(p)]).expect("two legs"),
                })
                .collect(),
            ExtensionForm::Summed if self.pairs.is_empty() => Vec::new(),
            ExtensionForm::Summed => vec![ExpFactor {
                label: format!("Phi_E{}", self.index),
                arg: TensorPoly::from_tuples(2, self.pairs.iter().map(|p| self.pair_term(p))).expect("two legs"),
            }],
        }
    }

    /// `Phi_E Phi_J` of this level.
    pub fn twist(&self, form: ExtensionForm) -> TwistElement {
        let mut factors = self.extension_factors(form);
        factors.push(self.jordanian_factor());
        TwistElement::from_factors(2, factors).expect("two legs")
    }

    /// `H /\ E + sum c L' /\ L''`, scaled by `eta`.
    pub fn classical_r(&self) -> Vec<RTerm> {
        let eta = self.eta();
        let mut out = vec![RTerm { coeff: eta.clone(), left: self.h.clone(), right: self.e.clone() }];
        for p in &self.pairs {
            let (a, b) = p.names();
            out.push(RTerm { coeff: eta.mul(&p.coeff), left: a, right: b });
        }
        out
    }
}

/// Wedge term `coeff * (left /\ right)` of a classical r-matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RTerm {
    pub coeff: Scalar,
    pub left: String,
    pub right: String,
}

/// `sum c (a (x) b - b (x) a)`.
pub fn wedge_poly(terms: &[RTerm]) -> TensorPoly {
    let tuples = terms.iter().flat_map(|t| {
        [
            (t.coeff.clone(), vec![Expr::gen(&t.left), Expr::gen(&t.right)]),
            (t.coeff.neg(), vec![Expr::gen(&t.right), Expr::gen(&t.left)]),
        ]
    });
    TensorPoly::from_tuples(2, tuples).expect("two legs")
}

/// A built chain together with the algebra it lives in.
#[derive(Debug, Clone)]
pub struct Chain {
    pub spec: ChainSpec,
    pub algebra: ClassicalAlgebra,
    pub levels: Vec<ResolvedLevel>,
    pub twist: TwistElement,
}

impl Chain {
    pub fn level_twist(&self, k: usize) -> TwistElement {
        self.levels[k].twist(self.spec.extension)
    }

    /// Product of the level twists `k_max, ..., k_min` (inclusive).
    pub fn partial(&self, lo: usize, hi: usize) -> TwistElement {
        let mut t = TwistElement::identity(2);
        for k in (lo..=hi).rev() {
            t = t.then(&self.level_twist(k)).expect("two legs");
        }
        t
    }

    pub fn classical_r_terms(&self) -> Vec<RTerm> {
        self.levels.iter().flat_map(|l| l.classical_r()).collect()
    }

    pub fn classical_r(&self) -> TensorPoly {
        wedge_poly(&self.classical_r_terms())
    }

    pub fn level_roots(&self) -> Vec<LevelRoots> {
        self.levels.iter().map(|l| l.roots()).collect()
    }

    /// Every carrier generator, without repetitions, in level order.
    pub fn carrier(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for g in self.levels.iter().flat_map(|l| l.generators()) {
            if !out.contains(&g) {
                out.push(g);
            }
        }
        out
    }
}

/// Explicit levels of `spec`, expanding the default ladder.
pub fn effective_levels(spec: &ChainSpec) -> Result<Vec<LevelSpec>, ChainError> {
    let (series, rank) = (spec.algebra.series, spec.algebra.rank);
    if spec.improper && series != Series::C {
        return Err(ChainError::NotSymplectic);
    }
    if series == Series::C && !spec.improper {
        return Err(ChainError::ImproperRequired);
    }
    match &spec.levels {
        Some(l) => Ok(l.clone()),
        None if series == Series::C => {
            Ok(build_improper_sp(rank, ImproperVariant::ShortSl)?.levels.expect("explicit levels"))
        }
        None => Ok(default_levels(series, rank, spec.sl2_tail)?
            .into_iter()
            .map(|l| LevelSpec::new(l.initial))
            .collect()),
    }
}

/// Resolves the levels of `spec` in `alg`, registering the Cartan duals.
pub fn resolve_levels(spec: &ChainSpec, alg: &mut ClassicalAlgebra) -> Result<Vec<ResolvedLevel>, ChainError> {
    let (series, rank) = (spec.algebra.series, spec.algebra.rank);
    let mut used: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for (index, level) in effective_levels(spec)?.into_iter().enumerate() {
        check_initial(series, rank, &level.initial_root, &used)?;
        let all = constituent_pairs(series, rank, &level.initial_root, &used)?;
        let chosen: Vec<(RootVector, RootVector)> = match &level.theta {
            Theta::All => all,
            Theta::Subset(firsts) => {
                let mut v = Vec::with_capacity(firsts.len());
                for f in firsts {
                    let p = all.iter().find(|p| p.0 == *f).ok_or_else(|| RootError::NotConstituent(f.clone()))?;
                    if !v.contains(p) {
                        v.push(p.clone());
                    }
                }
                v.sort();
                v
            }
        };
        alg.ensure_cartan(&level.initial_root);
        let pairs = chosen
            .into_iter()
            .map(|(first, second)| {
                let coeff = alg.pair_coefficient(&first, &second)?;
                Ok(ResolvedPair { first, second, coeff })
            })
            .collect::<Result<Vec<_>, LieError>>()?;
        used.extend(level.initial_root.support());
        out.push(ResolvedLevel {
            index,
            h: cartan_name(&level.initial_root),
            e: root_name(&level.initial_root),
            initial: level.initial_root,
            xi: level.xi,
            pairs,
        });
    }
    Ok(out)
}

/// `F = F_p ... F_1 F_0`, each `F_k = Phi_E(k) Phi_J(k)`.
pub fn build_chain(spec: &ChainSpec) -> Result<Chain, ChainError> {
    let mut algebra = build_defining(&spec.algebra)?;
    let levels = resolve_levels(spec, &mut algebra)?;
    let mut twist = TwistElement::identity(2);
    for level in levels.iter().rev() {
        twist = twist.then(&level.twist(spec.extension))?;
    }
    Ok(Chain { spec: spec.clone(), algebra, levels, twist })
}

/// Improper chains of `sp(2n)` built in its `sl(n)` subalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImproperVariant {
    /// Initial root `e1-e2` with the pairs `(e1-e_l, e_l-e2)`.
    ShortSl,
    /// Initial root `e1-e2` with the pairs `(e1+e_l, -e2-e_l)`.
    ShortPlus,
    /// Long initial root `2e1`, then an sl ladder from index 2.
    LongRoot,
}

fn sl_type(v: &RootVector) -> bool {
    v.0.iter().sum::<i64>() == 0
}

/// Ladder `e_a - e_{a+1}` over `indices`, with only sl-type pairs.
fn sl_ladder(rank: usize, indices: &[usize], used: &mut Vec<usize>) -> Result<Vec<LevelSpec>, ChainError> {
    let mut out = Vec::new();
    for w in indices.chunks_exact(2) {
        let root = RootVector::pair(rank, w[0], 1, w[1], -1);
        let firsts = constituent_pairs(Series::C, rank, &root, used)?
            .into_iter()
            .filter(|(a, _)| sl_type(a))
            .map(|(a, _)| a)
            .collect();
        used.extend([w[0], w[1]]);
        out.push(LevelSpec { theta: Theta::Subset(firsts), ..LevelSpec::new(root) });
    }
    Ok(out)
}

pub fn build_improper_sp(rank: usize, variant: ImproperVariant) -> Result<ChainSpec, ChainError> {
    if rank < 2 {
        return Err(ChainError::RankTooSmall(rank));
    }
    let alg = crate::lie::AlgebraDescriptor::new(Series::C, rank);
    let mut used = Vec::new();
    let mut levels = Vec::new();
    match variant {
        ImproperVariant::ShortSl => {
            let idx: Vec<usize> = (1..=rank).collect();
            levels = sl_ladder(rank, &idx, &mut used)?;
        }
        ImproperVariant::ShortPlus => {
            let idx: Vec<usize> = (1..=rank).collect();
            levels = sl_ladder(rank, &idx, &mut used)?;
            let root = levels[0].initial_root.clone();
            let firsts = constituent_pairs(Series::C, rank, &root, &[])?
                .into_iter()
                .filter(|(a, _)| !sl_type(a))
                .map(|(a, _)| a)
                .collect();
            levels[0].theta = Theta::Subset(firsts);
        }
        ImproperVariant::LongRoot => {
            let root = RootVector::pair(rank, 1, 1, 1, 1);
            levels.push(LevelSpec::new(root));
            used.push(1);
            let idx: Vec<usize> = (2..=rank).collect();
            levels.extend(sl_ladder(rank, &idx, &mut used)?);
        }
    }
    Ok(ChainSpec { improper: true, ..ChainSpec::with_levels(alg, levels) })
}

/// Which halves of the symplectic invariant enter the counterexample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantHalves {
    /// `sum_l (L_{e1+el} (x) L_{-e2-el} - L_{e1-el} (x) L_{el-e2})`.
    Both,
    /// Only `sum_l L_{e1+el} (x) L_{-e2-el}`.
    PlusOnly,
    /// Only `-sum_l L_{e1-el} (x) L_{el-e2}`.
    MinusOnly,
}

impl InvariantHalves {
    pub fn name(self) -> &'static str {
        match self {
            InvariantHalves::Both => "both",
            InvariantHalves::PlusOnly => "plus-only",
            InvariantHalves::MinusOnly => "minus-only",
        }
    }
}

/// Jordanian twist on `e1-e2` in `sp(2n)` followed by one extension built on
/// (parts of) the symplectic invariant, damped by `(1+E)^(-1/2)`.
pub fn build_sp_counterexample(rank: usize, halves: InvariantHalves) -> Result<TwistElement, ChainError> {
    if rank < 3 {
        return Err(ChainError::RankTooSmall(rank));
    }
    let root = RootVector::pair(rank, 1, 1, 2, -1);
    let level = ResolvedLevel {
        index: 0,
        h: cartan_name(&root),
        e: root_name(&root),
        initial: root,
        xi: Scalar::ONE,
        pairs: Vec::new(),
    };
    let damp = Expr::pow1p(Expr::gen(&level.e), Rational::new(-1, 2));
    let mut tuples = Vec::new();
    for l in 3..=rank {
        let plus = (RootVector::pair(rank, 1, 1, l, 1), RootVector::pair(rank, 2, -1, l, -1));
        let minus = (RootVector::pair(rank, 1, 1, l, -1), RootVector::pair(rank, l, 1, 2, -1));
        let mut push = |c: Scalar, (a, b): (RootVector, RootVector)| {
            tuples.push((c, vec![Expr::gen(&root_name(&a)), Expr::prod([Expr::gen(&root_name(&b)), damp.clone()])]));
        };
        if halves != InvariantHalves::MinusOnly {
            push(Scalar::ONE, plus);
        }
        if halves != InvariantHalves::PlusOnly {
            push(Scalar::from_int(-1), minus);
        }
    }
    let ext = ExpFactor { label: "Phi_E0[simp]".into(), arg: TensorPoly::from_tuples(2, tuples)? };
    Ok(TwistElement::from_factors(2, vec![ext, level.jordanian_factor()])?)
}
