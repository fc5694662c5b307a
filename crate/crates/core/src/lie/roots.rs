//! Root systems of the classical series in the orthonormal e-basis.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
}

impl Series {
    pub fn min_rank(self) -> usize {
        match self {
            Series::D => 2,
            _ => 1,
        }
    }

    /// Number of e-coordinates: `rank + 1` for A, `rank` otherwise.
    pub fn coords(self, rank: usize) -> usize {
        match self {
            Series::A => rank + 1,
            _ => rank,
        }
    }

    /// Dimension of the defining representation.
    pub fn defining_dim(self, rank: usize) -> usize {
        match self {
            Series::A => rank + 1,
            Series::B => 2 * rank + 1,
            Series::C | Series::D => 2 * rank,
        }
    }

    /// Conventional name of the algebra, e.g. `so(9)`.
    pub fn algebra_name(self, rank: usize) -> String {
        let n = self.defining_dim(rank);
        match self {
            Series::A => format!("sl({n})"),
            Series::B | Series::D => format!("so({n})"),
            Series::C => format!("sp({n})"),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Integer vector in the e-basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn zero(n: usize) -> Self {
        RootVector(vec![0; n])
    }

    /// `e_a` (1-based index).
    pub fn e(n: usize, a: usize) -> Self {
        let mut v = vec![0; n];
        v[a - 1] = 1;
        RootVector(v)
    }

    /// `s e_a + t e_b` (1-based).
    pub fn pair(n: usize, a: usize, s: i64, b: usize, t: i64) -> Self {
        let mut v = vec![0; n];
        v[a - 1] += s;
        v[b - 1] += t;
        RootVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> RootVector {
        RootVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn dot(&self, o: &RootVector) -> i64 {
        self.0.iter().zip(&o.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm2(&self) -> i64 {
        self.dot(self)
    }

    /// 1-based indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, _)| k + 1).collect()
    }

    /// First nonzero coordinate is positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    }

    /// Compact label: positive coordinates first, then negative ones, each
    /// in index order, e.g. `1+2`, `1-3`, `3-2`, `-2-3`, `2*1`.
    pub fn label(&self) -> String {
        let mut out = String::new();
        let pos = self.0.iter().enumerate().filter(|(_, &x)| x > 0);
        let neg = self.0.iter().enumerate().filter(|(_, &x)| x < 0);
        for (k, &x) in pos.chain(neg) {
            let sign = if x < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = x.abs();
            if mag == 1 {
                out.push_str(&format!("{sign}{}", k + 1));
            } else {
                out.push_str(&format!("{sign}{mag}*{}", k + 1));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Debug for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.label())
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// All roots of the series at the given rank, sorted lexicographically
/// descending so positive roots come first.
pub fn all_roots(series: Series, rank: usize) -> Vec<RootVector> {
    let n = series.coords(rank);
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            if a == b {
                continue;
            }
            match series {
                Series::A => out.push(RootVector::pair(n, a, 1, b, -1)),
                _ => {
                    out.push(RootVector::pair(n, a, 1, b, -1));
                    if a < b {
                        out.push(RootVector::pair(n, a, 1, b, 1));
                        out.push(RootVector::pair(n, a, -1, b, -1));
                    }
                }
            }
        }
        match series {
            Series::B => {
                out.push(RootVector::e(n, a));
                out.push(RootVector::e(n, a).neg());
            }
            Series::C => {
                out.push(RootVector::pair(n, a, 1, a, 1));
                out.push(RootVector::pair(n, a, -1, a, -1));
            }
            _ => {}
        }
    }
    out.sort_by(|x, y| y.cmp(x));
    out
}

pub fn is_root(series: Series, rank: usize, v: &RootVector) -> bool {
    let n = series.coords(rank);
    if v.len() != n || v.is_zero() {
        return false;
    }
    let supp = v.support();
    let c: Vec<i64> = supp.iter().map(|&k| v.0[k - 1]).collect();
    match (series, c.as_slice()) {
        (Series::A, [x, y]) => x + y == 0 && x.abs() == 1,
        (Series::A, _) => false,
        (_, [x, y]) => x.abs() == 1 && y.abs() == 1,
        (Series::B, [x]) => x.abs() == 1,
        (Series::C, [x]) => x.abs() == 2,
        _ => false,
    }
}
