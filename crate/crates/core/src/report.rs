use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::coeffring::RingElement;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

/// Outcome of one identity check. A failure always carries a witness: the
/// leading part of the defect in canonical text, or an error message when
/// the check could not be evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub cap: u32,
    pub witness: Option<String>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn pass(check: impl Into<String>, cap: u32) -> Self {
        Report { check: check.into(), status: Status::Pass, cap, witness: None, elapsed_ms: 0 }
    }

    pub fn fail(check: impl Into<String>, cap: u32, witness: impl Into<String>) -> Self {
        Report { check: check.into(), status: Status::Fail, cap, witness: Some(witness.into()), elapsed_ms: 0 }
    }

    pub fn skipped(check: impl Into<String>, cap: u32) -> Self {
        Report { check: check.into(), status: Status::Skipped, cap, witness: None, elapsed_ms: 0 }
    }

    /// Pass when there is no defect; otherwise fail with the defect's
    /// leading part.
    pub fn from_defect(check: impl Into<String>, cap: u32, defect: Option<RingElement>) -> Self {
        match defect {
            None => Self::pass(check, cap),
            Some(d) => Self::fail(check, cap, d.leading_part().to_string()),
        }
    }

    /// Runs a defect computation, folding errors into a failing report and
    /// recording wall time.
    pub fn timed(check: impl Into<String>, cap: u32, f: impl FnOnce() -> Result<Option<RingElement>>) -> Self {
        let check = check.into();
        let start = Instant::now();
        let mut r = match f() {
            Ok(d) => Self::from_defect(check, cap, d),
            Err(e) => Self::fail(check, cap, format!("error: {e}")),
        };
        r.elapsed_ms = start.elapsed().as_millis() as u64;
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// `None` when `a == b`, else `Some(a - b)`.
pub fn defect(a: &RingElement, b: &RingElement) -> Result<Option<RingElement>> {
    let d = a.checked_sub(b)?;
    Ok(if d.is_zero() { None } else { Some(d) })
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} (cap {})", self.status, self.check, self.cap)?;
        if let Some(w) = &self.witness {
            write!(f, " [{w}]")?;
        }
        Ok(())
    }
}
