//! Root-level combinatorics of chains: initial roots, residual index sets
//! and constituent pairs.

use serde::{Deserialize, Serialize};

use crate::lie::roots::{is_root, RootVector, Series};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("series {0} has no proper chain; use an improper variant")]
    UnsupportedSeries(Series),
    #[error("rank {rank} below minimum {min} for series {series}")]
    RankTooSmall { series: Series, rank: usize, min: usize },
    #[error("{0:?} is not a root")]
    NotARoot(RootVector),
    #[error("{0:?} has length {1}, expected {2}")]
    WrongLength(RootVector, usize, usize),
    #[error("initial root {0:?} is not admissible: {1}")]
    Inadmissible(RootVector, String),
    #[error("root {0:?} is not in the constituent set of this level")]
    NotConstituent(RootVector),
}

/// Initial root and constituent pairs `(l', l'')` of one chain level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRoots {
    pub initial: RootVector,
    pub pairs: Vec<(RootVector, RootVector)>,
}

pub fn check_rank(series: Series, rank: usize) -> Result<(), RootError> {
    if rank < series.min_rank() {
        return Err(RootError::RankTooSmall { series, rank, min: series.min_rank() });
    }
    Ok(())
}

/// The default ladder `e1-e2, e3-e4, ...` (A) or `e1+e2, e3+e4, ...` (B, D).
/// With `sl2_tail` off, trailing A-series levels with no constituents are
/// dropped.
pub fn initial_roots(series: Series, rank: usize, sl2_tail: bool) -> Result<Vec<RootVector>, RootError> {
    check_rank(series, rank)?;
    let n = series.coords(rank);
    let sign = match series {
        Series::A => -1,
        Series::B | Series::D => 1,
        Series::C => return Err(RootError::UnsupportedSeries(series)),
    };
    let mut used = Vec::new();
    let mut out = Vec::new();
    let mut a = 1;
    while a < n {
        let root = RootVector::pair(n, a, 1, a + 1, sign);
        if series == Series::A && !sl2_tail {
            let pairs = constituent_pairs(series, rank, &root, &used)?;
            if pairs.is_empty() {
                break;
            }
        }
        used.extend([a, a + 1]);
        out.push(root);
        a += 2;
    }
    Ok(out)
}

/// 1-based coordinate indices not touched by `used_supports`.
pub fn residual_indices(series: Series, rank: usize, used: &[usize]) -> Vec<usize> {
    (1..=series.coords(rank)).filter(|k| !used.contains(k)).collect()
}

/// Whether `v` is a root of the residual algebra on the indices `free`.
fn residual_root(series: Series, rank: usize, v: &RootVector, free: &[usize]) -> bool {
    is_root(series, rank, v) && v.support().iter().all(|k| free.contains(k))
}

/// Validates `initial` as the initial root of a level whose predecessors
/// occupy the indices `used`.
pub fn check_initial(series: Series, rank: usize, initial: &RootVector, used: &[usize]) -> Result<(), RootError> {
    let n = series.coords(rank);
    if initial.len() != n {
        return Err(RootError::WrongLength(initial.clone(), initial.len(), n));
    }
    if !is_root(series, rank, initial) {
        return Err(RootError::NotARoot(initial.clone()));
    }
    if let Some(k) = initial.support().iter().find(|k| used.contains(k)) {
        return Err(RootError::Inadmissible(initial.clone(), format!("index {k} is used by an earlier level")));
    }
    let supp = initial.support();
    let coeffs: Vec<i64> = supp.iter().map(|&k| initial.0[k - 1]).collect();
    let ok = match (series, coeffs.as_slice()) {
        (Series::A, [_, _]) => true,
        (Series::B | Series::D, [1, 1]) => true,
        (Series::C, [2]) => true,
        (Series::C, [x, y]) => x + y == 0,
        _ => false,
    };
    if !ok {
        let want = match series {
            Series::A => "e_a-e_b",
            Series::B | Series::D => "e_a+e_b",
            Series::C => "e_a-e_b or 2e_a",
        };
        return Err(RootError::Inadmissible(initial.clone(), format!("expected a root of type {want}")));
    }
    Ok(())
}

/// Pairs `(l', l'')` with `l' + l'' = l0` in the residual algebra such that
/// neither `l0 + l'` nor `l0 + l''` is a root. `l'` is the member with the
/// larger coefficient at the first support index of `l0` (ties: the
/// lexicographically larger); pairs are sorted ascending by `l'`.
pub fn constituent_pairs(
    series: Series,
    rank: usize,
    initial: &RootVector,
    used: &[usize],
) -> Result<Vec<(RootVector, RootVector)>, RootError> {
    if !is_root(series, rank, initial) {
        return Err(RootError::NotARoot(initial.clone()));
    }
    let free = residual_indices(series, rank, used);
    let lead = initial.support()[0] - 1;
    let mut pairs = Vec::new();
    for mu in crate::lie::roots::all_roots(series, rank) {
        if !residual_root(series, rank, &mu, &free) || mu == *initial {
            continue;
        }
        let nu = initial.sub(&mu);
        if !residual_root(series, rank, &nu, &free) {
            continue;
        }
        if is_root(series, rank, &initial.add(&mu)) || is_root(series, rank, &initial.add(&nu)) {
            continue;
        }
        let first = mu.0[lead] > nu.0[lead] || (mu.0[lead] == nu.0[lead] && mu > nu);
        if first {
            pairs.push((mu, nu));
        }
    }
    pairs.sort();
    Ok(pairs)
}

/// Roots and pairs of the default chain.
pub fn default_levels(series: Series, rank: usize, sl2_tail: bool) -> Result<Vec<LevelRoots>, RootError> {
    let mut used = Vec::new();
    let mut out = Vec::new();
    for initial in initial_roots(series, rank, sl2_tail)? {
        let pairs = constituent_pairs(series, rank, &initial, &used)?;
        used.extend(initial.support());
        out.push(LevelRoots { initial, pairs });
    }
    Ok(out)
}
