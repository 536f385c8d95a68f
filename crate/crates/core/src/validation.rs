//! Report-style validation: validators collect every violated axiom instead
//! of stopping at the first one.

use serde::Serialize;

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    /// Basis indices exhibiting the failure.
    pub witness: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            violations: Vec::new(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, axiom: &str, witness: Vec<usize>, detail: impl Into<String>) {
        self.violations.push(Violation {
            axiom: axiom.to_string(),
            witness,
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn first(&self, axiom: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    /// `Ok(())` if valid, otherwise an [`Error::Invalid`] naming the first violation.
    pub fn into_result(self) -> Result<(), Error> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::Invalid(format!(
                "{}: {} violated at {:?} ({}){}",
                self.subject,
                v.axiom,
                v.witness,
                v.detail,
                if self.violations.len() > 1 {
                    format!(" and {} more", self.violations.len() - 1)
                } else {
                    String::new()
                }
            ))),
        }
    }
}
