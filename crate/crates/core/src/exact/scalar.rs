//! Gaussian rationals `a + b i` and their first-order extension by a
//! nilpotent parameter `eps` with `eps^2 = 0`.

use std::fmt;
use std::str::FromStr;

use super::rational::Rational;

/// `re + im * i` over exact rationals.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub const ZERO: Gaussian = Gaussian { re: Rational::ZERO, im: Rational::ZERO };
    pub const ONE: Gaussian = Gaussian { re: Rational::ONE, im: Rational::ZERO };
    pub const I: Gaussian = Gaussian { re: Rational::ZERO, im: Rational::ONE };

    pub fn new(re: Rational, im: Rational) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gaussian { re, im: Rational::ZERO }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn add(&self, o: &Gaussian) -> Gaussian {
        Gaussian { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &Gaussian) -> Gaussian {
        Gaussian { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> Gaussian {
        Gaussian { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Gaussian {
        Gaussian { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Gaussian) -> Gaussian {
        if self.im.is_zero() && o.im.is_zero() {
            return Gaussian::real(self.re.mul(&o.re));
        }
        if self.re.is_zero() && o.re.is_zero() {
            return Gaussian::real(self.im.mul(&o.im).neg());
        }
        Gaussian {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, q: &Rational) -> Gaussian {
        Gaussian { re: self.re.mul(q), im: self.im.mul(q) }
    }

    pub fn recip(&self) -> Option<Gaussian> {
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let inv = norm.recip()?;
        Some(Gaussian { re: self.re.mul(&inv), im: self.im.neg().mul(&inv) })
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_gaussian(f, self, "")
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Writes `g` as a sum of monomials with the given suffix appended to each
/// (`""` for the body, `"eps"` for the infinitesimal part). Zero prints as
/// `0` only when the suffix is empty.
fn write_gaussian(f: &mut fmt::Formatter<'_>, g: &Gaussian, suffix: &str) -> fmt::Result {
    let mut first = true;
    let mut term = |f: &mut fmt::Formatter<'_>, q: &Rational, unit: &str| -> fmt::Result {
        if q.is_zero() {
            return Ok(());
        }
        let tail = match (unit.is_empty(), suffix.is_empty()) {
            (_, true) => unit.to_string(),
            (true, false) => suffix.to_string(),
            (false, false) => format!("{unit}*{suffix}"),
        };
        let s = q.to_string();
        let (neg, mag) = match s.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, s),
        };
        if !first {
            f.write_str(if neg { "-" } else { "+" })?;
        } else if neg {
            f.write_str("-")?;
        }
        first = false;
        if mag == "1" && !tail.is_empty() {
            f.write_str(&tail)
        } else if tail.is_empty() || !unit.is_empty() {
            write!(f, "{mag}{tail}")
        } else {
            write!(f, "{mag}*{tail}")
        }
    };
    term(f, &g.re, "")?;
    term(f, &g.im, "i")?;
    if first && suffix.is_empty() {
        f.write_str("0")?;
    }
    Ok(())
}

/// Exact scalar: a Gaussian rational plus an optional coefficient of `eps`.
///
/// Products drop every `eps^2` contribution, so `(x + eps y)(u + eps v)` is
/// `xu + eps (xv + yu)`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Scalar {
    body: Gaussian,
    eps: Option<Box<Gaussian>>,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { body: Gaussian::ZERO, eps: None };
    pub const ONE: Scalar = Scalar { body: Gaussian::ONE, eps: None };
    pub const I: Scalar = Scalar { body: Gaussian::I, eps: None };

    pub fn new(body: Gaussian, eps: Gaussian) -> Self {
        Scalar { body, eps: if eps.is_zero() { None } else { Some(Box::new(eps)) } }
    }

    pub fn from_gaussian(body: Gaussian) -> Self {
        Scalar { body, eps: None }
    }

    pub fn from_rational(q: Rational) -> Self {
        Scalar { body: Gaussian::real(q), eps: None }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(n, d))
    }

    pub fn complex(re: Rational, im: Rational) -> Self {
        Scalar { body: Gaussian::new(re, im), eps: None }
    }

    /// `c * eps`.
    pub fn eps(c: Gaussian) -> Self {
        Self::new(Gaussian::ZERO, c)
    }

    pub fn body(&self) -> &Gaussian {
        &self.body
    }

    pub fn eps_part(&self) -> Gaussian {
        self.eps.as_deref().cloned().unwrap_or_default()
    }

    pub fn has_eps(&self) -> bool {
        self.eps.is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero() && self.eps.is_none()
    }

    pub fn is_one(&self) -> bool {
        self.body.is_one() && self.eps.is_none()
    }

    /// The `eps`-free part as a scalar.
    pub fn body_scalar(&self) -> Scalar {
        Scalar::from_gaussian(self.body.clone())
    }

    /// The coefficient of `eps` as a scalar.
    pub fn eps_scalar(&self) -> Scalar {
        Scalar::from_gaussian(self.eps_part())
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        let eps = match (&self.eps, &o.eps) {
            (None, None) => None,
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (Some(a), Some(b)) => {
                let s = a.add(b);
                (!s.is_zero()).then(|| Box::new(s))
            }
        };
        Scalar { body: self.body.add(&o.body), eps }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar { body: self.body.neg(), eps: self.eps.as_ref().map(|e| Box::new(e.neg())) }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        let body = self.body.mul(&o.body);
        let eps = match (&self.eps, &o.eps) {
            (None, None) => None,
            (Some(a), None) => Some(a.mul(&o.body)),
            (None, Some(b)) => Some(self.body.mul(b)),
            (Some(a), Some(b)) => Some(a.mul(&o.body).add(&self.body.mul(b))),
        };
        Scalar { body, eps: eps.filter(|e| !e.is_zero()).map(Box::new) }
    }

    pub fn scale(&self, q: &Rational) -> Scalar {
        if q.is_zero() {
            return Scalar::ZERO;
        }
        Scalar {
            body: self.body.scale(q),
            eps: self.eps.as_ref().map(|e| Box::new(e.scale(q))),
        }
    }

    pub fn conj(&self) -> Scalar {
        Scalar { body: self.body.conj(), eps: self.eps.as_ref().map(|e| Box::new(e.conj())) }
    }

    /// Inverse; exists iff the body is nonzero: `(x + eps y)^-1 = x^-1 - eps y x^-2`.
    pub fn recip(&self) -> Option<Scalar> {
        let inv = self.body.recip()?;
        let eps = self.eps.as_ref().map(|y| y.mul(&inv).mul(&inv).neg());
        Some(Scalar::new(inv, eps.unwrap_or_default()))
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        o.recip().map(|r| self.mul(&r))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::from_rational(q)
    }
}

impl From<Gaussian> for Scalar {
    fn from(g: Gaussian) -> Self {
        Scalar::from_gaussian(g)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.eps {
            None => write_gaussian(f, &self.body, ""),
            Some(e) => {
                if !self.body.is_zero() {
                    write_gaussian(f, &self.body, "")?;
                    let mut s = String::new();
                    {
                        use fmt::Write;
                        write!(s, "{}", EpsDisplay(e)).expect("string write");
                    }
                    if !s.starts_with('-') {
                        f.write_str("+")?;
                    }
                    f.write_str(&s)
                } else {
                    write!(f, "{}", EpsDisplay(e))
                }
            }
        }
    }
}

struct EpsDisplay<'a>(&'a Gaussian);

impl fmt::Display for EpsDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_gaussian(f, self.0, "eps")
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error returned when a scalar literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal `{0}`")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Parses a sum of monomials `[sign][p/q][*][i][*][eps]`, for example
    /// `1/2`, `-3i`, `1/2-1/4i`, `eps`, `2*eps`, `1+1/2i*eps`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // Split into signed monomials at top-level +/- (not after '/').
        let bytes = compact.as_bytes();
        let mut monomials = Vec::new();
        let mut start = 0;
        for (k, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && k > start {
                monomials.push(&compact[start..k]);
                start = k;
            }
        }
        monomials.push(&compact[start..]);

        let mut acc = Scalar::ZERO;
        for m in monomials {
            let (neg, mut rest) = match m.as_bytes().first() {
                Some(b'-') => (true, &m[1..]),
                Some(b'+') => (false, &m[1..]),
                _ => (false, m),
            };
            let mut is_eps = false;
            if let Some(r) = rest.strip_suffix("eps") {
                is_eps = true;
                rest = r.strip_suffix('*').unwrap_or(r);
            }
            let mut is_imag = false;
            if let Some(r) = rest.strip_suffix('i') {
                is_imag = true;
                rest = r.strip_suffix('*').unwrap_or(r);
            }
            let coeff = if rest.is_empty() {
                if !is_eps && !is_imag {
                    return Err(err());
                }
                Rational::ONE
            } else {
                rest.parse::<Rational>().map_err(|_| err())?
            };
            let coeff = if neg { coeff.neg() } else { coeff };
            let g = if is_imag {
                Gaussian::new(Rational::ZERO, coeff)
            } else {
                Gaussian::real(coeff)
            };
            let term = if is_eps { Scalar::eps(g) } else { Scalar::from_gaussian(g) };
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}
