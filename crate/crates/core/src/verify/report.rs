use std::time::Instant;

use serde::Serialize;

use crate::exact::{ExactMatrix, Witness};

/// Outcome of one exact check. `pass` holds iff the residual is zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub subject: String,
    pub rep: String,
    pub pass: bool,
    pub residual_nnz: usize,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<ExactMatrix>,
}

impl VerificationReport {
    pub fn from_residual(check: impl Into<String>, residual: &ExactMatrix) -> Self {
        VerificationReport {
            check: check.into(),
            subject: String::new(),
            rep: "defining".into(),
            pass: residual.is_zero(),
            residual_nnz: residual.nnz(),
            witness: residual.witness(),
            detail: None,
            ms: None,
            residual: None,
        }
    }

    /// A check made of several residuals; the first nonzero one is
    /// reported.
    pub fn from_residuals(check: impl Into<String>, parts: &[(String, ExactMatrix)]) -> Self {
        let bad = parts.iter().find(|(_, m)| !m.is_zero());
        let mut r = match bad {
            Some((_, m)) => Self::from_residual(check, m),
            None => Self::from_residual(check, &ExactMatrix::zeros(1)),
        };
        r.residual_nnz = parts.iter().map(|(_, m)| m.nnz()).sum();
        if let Some((label, _)) = bad {
            r.detail = Some(format!("first failure: {label}"));
        }
        r
    }

    pub fn failed(check: impl Into<String>, detail: impl Into<String>) -> Self {
        let mut r = Self::from_residual(check, &ExactMatrix::zeros(1));
        r.pass = false;
        r.detail = Some(detail.into());
        r
    }

    pub fn with_subject(mut self, subject: impl Into<String>) -> Self {
        self.subject = subject.into();
        self
    }

    pub fn with_rep(mut self, rep: impl Into<String>) -> Self {
        self.rep = rep.into();
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.ms = Some(start.elapsed().as_millis() as u64);
        self
    }

    pub fn with_residual(mut self, m: ExactMatrix) -> Self {
        self.residual = Some(m);
        self
    }

    /// Drops timing so that serialized reports are byte-stable.
    pub fn untimed(mut self) -> Self {
        self.ms = None;
        self
    }
}
