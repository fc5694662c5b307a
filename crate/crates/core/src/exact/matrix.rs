//! Sparse square matrices over [`Scalar`] and the terminating matrix
//! functions of nilpotent and unipotent arguments.

use std::fmt;

use rayon::prelude::*;

use super::rational::{binomial, Rational};
use super::scalar::Scalar;

/// Rows at or above this dimension are multiplied in parallel.
const PAR_THRESHOLD: usize = 96;
/// Series terms computed before switching to a squaring proof of nilpotency.
const SERIES_PROBE: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix of dim {dim} is not nilpotent")]
    NotNilpotent { dim: usize },
    #[error("matrix of dim {dim} is not unipotent")]
    NotUnipotent { dim: usize },
    #[error("matrix of dim {dim} is singular")]
    Singular { dim: usize },
}

pub type Row = Vec<(u32, Scalar)>;

/// Square sparse matrix. Each row holds its nonzero entries sorted by
/// column, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    dim: usize,
    rows: Vec<Row>,
}

/// One nonzero entry, reported by residual checks.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub value: Scalar,
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        ExactMatrix { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Scalar::ONE)
    }

    /// `c * I`.
    pub fn scalar(dim: usize, c: Scalar) -> Self {
        if c.is_zero() {
            return Self::zeros(dim);
        }
        ExactMatrix { dim, rows: (0..dim).map(|i| vec![(i as u32, c.clone())]).collect() }
    }

    /// Matrix unit `e_{ij}` (0-based).
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        Self::from_entries(dim, [(i, j, Scalar::ONE)])
    }

    /// Builds a matrix from `(row, col, value)` triples; repeated positions
    /// are summed and zeros dropped.
    pub fn from_entries<I>(dim: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut rows: Vec<Row> = vec![Vec::new(); dim];
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r},{c}) outside dim {dim}");
            rows[r].push((c as u32, v));
        }
        for row in &mut rows {
            *row = normalize_row(std::mem::take(row));
        }
        ExactMatrix { dim, rows }
    }

    pub fn from_rows(dim: usize, rows: Vec<Row>) -> Self {
        assert_eq!(rows.len(), dim);
        ExactMatrix { dim, rows: rows.into_iter().map(normalize_row).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.rows[r].binary_search_by_key(&(c as u32), |e| e.0) {
            Ok(k) => self.rows[r][k].1.clone(),
            Err(_) => Scalar::ZERO,
        }
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c as usize, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, row)| row.len() == 1 && row[0].0 as usize == i && row[0].1.is_one())
    }

    /// First nonzero entry in row-major order.
    pub fn witness(&self) -> Option<Witness> {
        self.entries().next().map(|(row, col, v)| Witness { row, col, value: v.clone() })
    }

    fn check_dim(&self, other: &ExactMatrix) -> Result<(), MatrixError> {
        if self.dim != other.dim {
            return Err(MatrixError::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.check_dim(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge_rows(a, b, false))
            .collect();
        Ok(ExactMatrix { dim: self.dim, rows })
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.check_dim(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| merge_rows(a, b, true))
            .collect();
        Ok(ExactMatrix { dim: self.dim, rows })
    }

    pub fn neg(&self) -> ExactMatrix {
        self.map(|v| v.neg())
    }

    pub fn scale(&self, c: &Scalar) -> ExactMatrix {
        if c.is_one() {
            return self.clone();
        }
        self.map(|v| v.mul(c))
    }

    pub fn scale_rational(&self, q: &Rational) -> ExactMatrix {
        if q.is_one() {
            return self.clone();
        }
        self.map(|v| v.scale(q))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> ExactMatrix {
        self.map(Scalar::conj)
    }

    /// The matrix of `eps` coefficients.
    pub fn epsilon_coefficient(&self) -> ExactMatrix {
        self.map(Scalar::eps_scalar)
    }

    /// The `eps`-free part.
    pub fn epsilon_free(&self) -> ExactMatrix {
        self.map(Scalar::body_scalar)
    }

    pub fn has_eps(&self) -> bool {
        self.entries().any(|(_, _, v)| v.has_eps())
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> ExactMatrix {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(c, v)| {
                        let w = f(v);
                        (!w.is_zero()).then_some((*c, w))
                    })
                    .collect()
            })
            .collect();
        ExactMatrix { dim: self.dim, rows }
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut rows: Vec<Row> = vec![Vec::new(); self.dim];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                rows[*c as usize].push((r as u32, v.clone()));
            }
        }
        ExactMatrix { dim: self.dim, rows }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.check_dim(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(ExactMatrix::zeros(self.dim));
        }
        let dim = self.dim;
        let rows: Vec<Row> = if dim >= PAR_THRESHOLD {
            self.rows
                .par_iter()
                .map_init(|| Accumulator::new(dim), |acc, row| acc.row_times(row, other))
                .collect()
        } else {
            let mut acc = Accumulator::new(dim);
            self.rows.iter().map(|row| acc.row_times(row, other)).collect()
        };
        Ok(ExactMatrix { dim, rows })
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Kronecker product; entry `(i*db+k, j*db+l)` is `a[i,j] b[k,l]`.
    pub fn kron(&self, other: &ExactMatrix) -> ExactMatrix {
        let db = other.dim;
        let dim = self.dim * db;
        let mut rows: Vec<Row> = Vec::with_capacity(dim);
        for arow in &self.rows {
            for brow in &other.rows {
                let mut out = Vec::with_capacity(arow.len() * brow.len());
                for (j, a) in arow {
                    for (l, b) in brow {
                        out.push((*j * db as u32 + *l, a.mul(b)));
                    }
                }
                out.retain(|e| !e.1.is_zero());
                rows.push(out);
            }
        }
        ExactMatrix { dim, rows }
    }

    /// Places `self`, acting on `legs.len()` tensor legs of size `leg_dim`,
    /// into the positions `legs` (0-based, strictly increasing) of an
    /// `n`-fold tensor power, with identity on the remaining legs.
    pub fn embed_legs(&self, leg_dim: usize, legs: &[usize], n: usize) -> ExactMatrix {
        let m = legs.len();
        assert_eq!(leg_dim.pow(m as u32), self.dim, "embed: dim mismatch");
        assert!(legs.windows(2).all(|w| w[0] < w[1]) && legs.iter().all(|&l| l < n));
        if m == n {
            return self.clone();
        }
        let contiguous = legs.windows(2).all(|w| w[1] == w[0] + 1);
        if contiguous {
            let before = leg_dim.pow(legs.first().copied().unwrap_or(0) as u32);
            let after = leg_dim.pow((n - legs.first().copied().unwrap_or(0) - m) as u32);
            let mut out = self.clone();
            if before > 1 {
                out = ExactMatrix::identity(before).kron(&out);
            }
            if after > 1 {
                out = out.kron(&ExactMatrix::identity(after));
            }
            return out;
        }
        let total = leg_dim.pow(n as u32);
        let others: Vec<usize> = (0..n).filter(|l| !legs.contains(l)).collect();
        let stride = |leg: usize| leg_dim.pow((n - 1 - leg) as u32);
        let spread = |idx: usize, positions: &[usize]| -> usize {
            let mut rem = idx;
            let mut out = 0;
            for &p in positions.iter().rev() {
                out += (rem % leg_dim) * stride(p);
                rem /= leg_dim;
            }
            out
        };
        let n_other = leg_dim.pow(others.len() as u32);
        let mut entries = Vec::with_capacity(self.nnz() * n_other);
        for (r, c, v) in self.entries() {
            let (rr, cc) = (spread(r, legs), spread(c, legs));
            for o in 0..n_other {
                let base = spread(o, &others);
                entries.push((rr + base, cc + base, v.clone()));
            }
        }
        ExactMatrix::from_entries(total, entries)
    }

    /// Conjugation by the leg permutation: output leg `k` carries input leg
    /// `perm[k]` (0-based).
    pub fn permute_legs(&self, leg_dim: usize, perm: &[usize]) -> ExactMatrix {
        let n = perm.len();
        assert_eq!(leg_dim.pow(n as u32), self.dim, "permute: dim mismatch");
        let map = |idx: usize| -> usize {
            let mut digits = vec![0usize; n];
            let mut rem = idx;
            for d in digits.iter_mut().rev() {
                *d = rem % leg_dim;
                rem /= leg_dim;
            }
            perm.iter().fold(0, |acc, &src| acc * leg_dim + digits[src])
        };
        let entries = self.entries().map(|(r, c, v)| (map(r), map(c), v.clone()));
        ExactMatrix::from_entries(self.dim, entries)
    }

    /// Inverse by Gauss-Jordan elimination on a dense copy.
    pub fn inverse(&self) -> Result<ExactMatrix, MatrixError> {
        let n = self.dim;
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row = vec![Scalar::ZERO; 2 * n];
                for (c, v) in &self.rows[r] {
                    row[*c as usize] = v.clone();
                }
                row[n + r] = Scalar::ONE;
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r][col].recip().is_some())
                .ok_or(MatrixError::Singular { dim: n })?;
            a.swap(col, pivot);
            let inv = a[col][col].recip().expect("pivot invertible");
            for v in a[col].iter_mut() {
                *v = v.mul(&inv);
            }
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v = v.sub(&f.mul(p));
                    }
                }
            }
        }
        let entries = a
            .into_iter()
            .enumerate()
            .flat_map(|(r, row)| {
                row.into_iter().skip(n).enumerate().map(move |(c, v)| (r, c, v))
            })
            .filter(|e| !e.2.is_zero());
        Ok(ExactMatrix::from_entries(n, entries))
    }

    /// `exp(n) = sum n^k / k!` for nilpotent `n`.
    pub fn exp_nilpotent(&self) -> Result<ExactMatrix, MatrixError> {
        self.nilpotent_series(|k| {
            let mut f = Rational::ONE;
            for j in 2..=k as i64 {
                f = f.mul(&Rational::from_integer(j));
            }
            f.recip().expect("factorial nonzero")
        }, true)
    }

    /// `log(1 + n) = sum (-1)^(k+1) n^k / k` for nilpotent `n`.
    pub fn log1p_nilpotent(&self) -> Result<ExactMatrix, MatrixError> {
        self.nilpotent_series(|k| {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            Rational::new(sign, k as i64)
        }, false)
    }

    /// `u^q = sum C(q,k) (u - I)^k` for unipotent `u`.
    pub fn pow_rational(&self, q: &Rational) -> Result<ExactMatrix, MatrixError> {
        let n = self.sub(&ExactMatrix::identity(self.dim))?;
        n.nilpotent_series(|k| binomial(q, k as u32), true).map_err(|e| match e {
            MatrixError::NotNilpotent { dim } => MatrixError::NotUnipotent { dim },
            other => other,
        })
    }

    /// `sum_{k>=1} coeff(k) n^k`, plus the identity when `with_identity`.
    /// Terminates because `n` is shown nilpotent: either a power vanishes
    /// within the probe window or `n^(2^j)` vanishes for `2^j >= dim`.
    fn nilpotent_series(
        &self,
        coeff: impl Fn(usize) -> Rational,
        with_identity: bool,
    ) -> Result<ExactMatrix, MatrixError> {
        let dim = self.dim;
        let mut acc = if with_identity { ExactMatrix::identity(dim) } else { ExactMatrix::zeros(dim) };
        let mut power = self.clone();
        let mut k = 1usize;
        let mut proven = false;
        while !power.is_zero() {
            // eps-dependent matrices may need up to 2*dim terms.
            if k > 2 * dim + 1 {
                return Err(MatrixError::NotNilpotent { dim });
            }
            if k == SERIES_PROBE && !proven {
                if !power.squares_to_zero_by(2 * dim)? {
                    return Err(MatrixError::NotNilpotent { dim });
                }
                proven = true;
            }
            let c = coeff(k);
            if !c.is_zero() {
                acc = acc.add(&power.scale_rational(&c))?;
            }
            power = power.mul(self)?;
            k += 1;
        }
        Ok(acc)
    }

    /// Whether repeated squaring of `self` reaches zero before the exponent
    /// exceeds `bound`.
    fn squares_to_zero_by(&self, bound: usize) -> Result<bool, MatrixError> {
        let mut m = self.clone();
        let mut exp = 1usize;
        while exp < bound {
            if m.is_zero() {
                return Ok(true);
            }
            m = m.mul(&m)?;
            exp *= 2;
        }
        Ok(m.is_zero())
    }

    pub fn is_nilpotent(&self) -> bool {
        self.squares_to_zero_by(2 * self.dim.max(1)).unwrap_or(false)
    }

    pub fn pow(&self, k: u32) -> Result<ExactMatrix, MatrixError> {
        let mut out = ExactMatrix::identity(self.dim);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix(dim={}", self.dim)?;
        for (r, c, v) in self.entries() {
            write!(f, ", ({r},{c})={v}")?;
        }
        f.write_str(")")
    }
}

/// `{"dim": n, "entries": [[row, col, "value"], ...]}` in row-major order.
impl serde::Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entries: Vec<(usize, usize, &Scalar)> = self.entries().collect();
        let mut st = s.serialize_struct("ExactMatrix", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

fn normalize_row(mut row: Row) -> Row {
    row.sort_by_key(|e| e.0);
    let mut out: Row = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = last.1.add(&v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

fn merge_rows(a: &Row, b: &Row, subtract: bool) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = if subtract { b[j].1.neg() } else { b[j].1.clone() };
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = if subtract { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dense scratch row used by the sparse product.
struct Accumulator {
    values: Vec<Scalar>,
    touched: Vec<u32>,
    seen: Vec<bool>,
}

impl Accumulator {
    fn new(dim: usize) -> Self {
        Accumulator { values: vec![Scalar::ZERO; dim], touched: Vec::new(), seen: vec![false; dim] }
    }

    fn row_times(&mut self, row: &Row, other: &ExactMatrix) -> Row {
        for (k, a) in row {
            for (j, b) in &other.rows[*k as usize] {
                let ju = *j as usize;
                let prod = a.mul(b);
                if self.seen[ju] {
                    self.values[ju] = self.values[ju].add(&prod);
                } else {
                    self.seen[ju] = true;
                    self.touched.push(*j);
                    self.values[ju] = prod;
                }
            }
        }
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &j in &self.touched {
            let ju = j as usize;
            self.seen[ju] = false;
            let v = std::mem::take(&mut self.values[ju]);
            if !v.is_zero() {
                out.push((j, v));
            }
        }
        self.touched.clear();
        out
    }
}
