//! Bracket relations of chain carriers and adjoint representations.

use serde::Serialize;

use super::classical::{cartan_name, root_name, ClassicalAlgebra, LieError};
use super::rep::Representation;
use crate::chain::levels::LevelRoots;
use crate::exact::{ExactMatrix, Scalar};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    fn expect(&mut self, rep: &Representation, a: &str, b: &str, expected: Option<(Scalar, &str)>) {
        self.checked += 1;
        let Some(Ok(lhs)) = rep.bracket(a, b) else {
            self.violations.push(format!("[{a}, {b}]: missing generator"));
            return;
        };
        let rhs = match &expected {
            None => ExactMatrix::zeros(rep.dim()),
            Some((c, t)) => match rep.get(t) {
                Some(m) => m.scale(c),
                None => {
                    self.violations.push(format!("[{a}, {b}]: missing generator {t}"));
                    return;
                }
            },
        };
        if lhs != rhs {
            let want = match &expected {
                None => "0".to_string(),
                Some((c, t)) if c.is_one() => t.to_string(),
                Some((c, t)) => format!("{c} {t}"),
            };
            self.violations.push(format!("[{a}, {b}] != {want}"));
        }
    }
}

/// Checks, per level, `[H, E] = E`, `[H, L'] = L'/2`, `[H, L''] = L''/2`,
/// `[L', L''] = E`, `[E, L'] = [E, L''] = 0`, and that constituents commute
/// except with their counterparts.
pub fn structure_check(alg: &ClassicalAlgebra, levels: &[LevelRoots]) -> StructureReport {
    let rep = alg.rep();
    let half = Scalar::ratio(1, 2);
    let mut report = StructureReport::default();
    for level in levels {
        let h = cartan_name(&level.initial);
        let e = root_name(&level.initial);
        report.expect(rep, &h, &e, Some((Scalar::ONE, &e)));
        for (l1, l2) in &level.pairs {
            let (a, b) = (root_name(l1), root_name(l2));
            report.expect(rep, &h, &a, Some((half.clone(), &a)));
            report.expect(rep, &h, &b, Some((half.clone(), &b)));
            report.expect(rep, &a, &b, Some((Scalar::ONE, &e)));
            report.expect(rep, &e, &a, None);
            report.expect(rep, &e, &b, None);
        }
        let members: Vec<(usize, String)> = level
            .pairs
            .iter()
            .enumerate()
            .flat_map(|(k, (l1, l2))| [(k, root_name(l1)), (k, root_name(l2))])
            .collect();
        for (i, (pi, x)) in members.iter().enumerate() {
            for (pj, y) in &members[i + 1..] {
                if pi != pj {
                    report.expect(rep, x, y, None);
                }
            }
        }
    }
    report
}

/// Adjoint representation of a generator span together with the
/// generators acting as zero (the center).
#[derive(Debug, Clone)]
pub struct Adjoint {
    pub rep: Representation,
    pub center: Vec<String>,
}

/// Coordinates of matrices in a fixed linearly independent family.
struct Decomposer {
    basis: Vec<ExactMatrix>,
    pivots: Vec<(usize, usize)>,
    inverse: ExactMatrix,
}

impl Decomposer {
    fn new(basis: Vec<ExactMatrix>) -> Option<Self> {
        let m = basis.len();
        let mut positions: Vec<(usize, usize)> =
            basis.iter().flat_map(|b| b.entries().map(|(r, c, _)| (r, c))).collect();
        positions.sort_unstable();
        positions.dedup();
        // Row-reduce the family to find m independent coordinates.
        let mut rows: Vec<Vec<Scalar>> =
            basis.iter().map(|b| positions.iter().map(|&(r, c)| b.get(r, c)).collect()).collect();
        let mut pivots = Vec::with_capacity(m);
        let mut done = 0;
        for col in 0..positions.len() {
            let Some(p) = (done..m).find(|&r| !rows[r][col].is_zero()) else { continue };
            rows.swap(done, p);
            let inv = rows[done][col].recip()?;
            let pivot_row: Vec<Scalar> = rows[done].iter().map(|v| v.mul(&inv)).collect();
            for (r, row) in rows.iter_mut().enumerate().take(m) {
                if r != done && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v = v.sub(&f.mul(pv));
                    }
                }
            }
            rows[done] = pivot_row;
            pivots.push(positions[col]);
            done += 1;
            if done == m {
                break;
            }
        }
        if done < m {
            return None;
        }
        let square = ExactMatrix::from_entries(
            m,
            pivots
                .iter()
                .enumerate()
                .flat_map(|(i, &(r, c))| basis.iter().enumerate().map(move |(j, b)| (i, j, b.get(r, c)))),
        );
        let inverse = square.inverse().ok()?;
        Some(Decomposer { basis, pivots, inverse })
    }

    fn coords(&self, t: &ExactMatrix) -> Option<Vec<Scalar>> {
        let m = self.basis.len();
        let rhs: Vec<Scalar> = self.pivots.iter().map(|&(r, c)| t.get(r, c)).collect();
        let x: Vec<Scalar> = (0..m)
            .map(|i| {
                self.inverse.rows()[i].iter().fold(Scalar::ZERO, |acc, (j, v)| acc.add(&v.mul(&rhs[*j as usize])))
            })
            .collect();
        let rebuilt = self
            .basis
            .iter()
            .zip(&x)
            .fold(ExactMatrix::zeros(t.dim()), |acc, (b, c)| acc.add(&b.scale(c)).expect("same dim"));
        (rebuilt == *t).then_some(x)
    }
}

/// `ad(x_i)_{kj}` = coefficient of `x_k` in `[x_i, x_j]`.
pub fn build_adjoint(rep: &Representation, gens: &[String]) -> Result<Adjoint, LieError> {
    let mats: Vec<ExactMatrix> = gens
        .iter()
        .map(|g| rep.get(g).cloned().ok_or_else(|| LieError::UnknownGenerator(g.clone())))
        .collect::<Result<_, _>>()?;
    let dec = Decomposer::new(mats.clone()).ok_or_else(|| LieError::NotClosed("dependent".into(), "family".into()))?;
    let m = gens.len();
    let mut out = Representation::new(format!("ad({})", rep.name), m);
    let mut center = Vec::new();
    for (i, xi) in mats.iter().enumerate() {
        let mut entries = Vec::new();
        for (j, xj) in mats.iter().enumerate() {
            let br = xi.commutator(xj)?;
            let x = dec.coords(&br).ok_or_else(|| LieError::NotClosed(gens[i].clone(), gens[j].clone()))?;
            entries.extend(x.into_iter().enumerate().map(|(k, c)| (k, j, c)));
        }
        let ad = ExactMatrix::from_entries(m, entries);
        if ad.is_zero() {
            center.push(gens[i].clone());
        }
        out.insert(gens[i].clone(), ad);
    }
    Ok(Adjoint { rep: out, center })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::levels::default_levels;
    use crate::lie::classical::{build_defining, AlgebraDescriptor};
    use crate::lie::roots::Series;

    #[test]
    fn so9_levels_pass_when_normalized() {
        let g = build_defining(&AlgebraDescriptor::new(Series::B, 4)).unwrap();
        let levels = default_levels(Series::B, 4, true).unwrap();
        let r = structure_check(&g, &levels);
        assert!(r.passes(), "{:?}", r.violations);
        assert!(r.checked > 30);
    }

    #[test]
    fn raw_basis_pinpoints_bracket() {
        let g = build_defining(&AlgebraDescriptor::raw(Series::B, 4)).unwrap();
        let levels = default_levels(Series::B, 4, true).unwrap();
        let r = structure_check(&g, &levels);
        assert!(r.violations.iter().any(|v| v == "[E_{1-3}, E_{2+3}] != E_{1+2}"), "{:?}", r.violations);
        assert!(!r.violations.iter().any(|v| v.starts_with("[E_{1}, E_{2}]")));
    }

    #[test]
    fn sl3_cartan_relation() {
        let g = build_defining(&AlgebraDescriptor::new(Series::A, 2)).unwrap();
        let levels = default_levels(Series::A, 2, true).unwrap();
        assert!(structure_check(&g, &levels).passes());
        let h = g.matrix("H_{1-3}").unwrap();
        let e = g.matrix("E_{1-3}").unwrap();
        assert_eq!(&h.commutator(e).unwrap(), e);
    }

    #[test]
    fn adjoint_of_borel() {
        let g = build_defining(&AlgebraDescriptor::new(Series::A, 1)).unwrap();
        let gens = vec!["H_{1-2}".to_string(), "E_{1-2}".to_string()];
        let ad = build_adjoint(g.rep(), &gens).unwrap();
        assert_eq!(ad.rep.dim(), 2);
        assert!(ad.center.is_empty());
        let h = ad.rep.get("H_{1-2}").unwrap();
        let e = ad.rep.get("E_{1-2}").unwrap();
        assert_eq!(&h.commutator(e).unwrap(), e);
    }

    #[test]
    fn adjoint_rejects_open_span() {
        let g = build_defining(&AlgebraDescriptor::new(Series::A, 1)).unwrap();
        let gens = vec!["E_{1-2}".to_string(), "E_{2-1}".to_string()];
        assert!(matches!(build_adjoint(g.rep(), &gens), Err(LieError::NotClosed(..))));
    }
}
