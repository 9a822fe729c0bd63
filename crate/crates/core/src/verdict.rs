//! Outcome of a classification check.

use std::fmt;
use std::io::Write;

use num_complex::Complex64;

use crate::report::fmt9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Inconclusive => "INCONCLUSIVE",
        }
    }

    /// Conjunction: any FAIL wins, then any INCONCLUSIVE.
    pub fn and(self, other: Self) -> Self {
        match (self, other) {
            (Self::Fail, _) | (_, Self::Fail) => Self::Fail,
            (Self::Inconclusive, _) | (_, Self::Inconclusive) => Self::Inconclusive,
            _ => Self::Pass,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A FAIL always carries a witness and a PASS always carries a nonnegative
/// margin; the constructors enforce both.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    status: Status,
    witness: Option<Complex64>,
    margin: f64,
    method: String,
    resolution: String,
}

impl Verdict {
    pub fn pass(margin: f64, method: impl Into<String>, resolution: impl Into<String>) -> Self {
        assert!(margin >= 0.0, "PASS with negative margin {margin}");
        Self {
            status: Status::Pass,
            witness: None,
            margin,
            method: method.into(),
            resolution: resolution.into(),
        }
    }

    pub fn fail(
        witness: Complex64,
        margin: f64,
        method: impl Into<String>,
        resolution: impl Into<String>,
    ) -> Self {
        Self {
            status: Status::Fail,
            witness: Some(witness),
            margin,
            method: method.into(),
            resolution: resolution.into(),
        }
    }

    pub fn inconclusive(
        witness: Option<Complex64>,
        margin: f64,
        method: impl Into<String>,
        resolution: impl Into<String>,
    ) -> Self {
        Self {
            status: Status::Inconclusive,
            witness,
            margin,
            method: method.into(),
            resolution: resolution.into(),
        }
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn witness(&self) -> Option<Complex64> {
        self.witness
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn method(&self) -> &str {
        &self.method
    }

    pub fn resolution(&self) -> &str {
        &self.resolution
    }

    /// Conjunction of two verdicts. The combined margin is the smaller one;
    /// the witness comes from the verdict that decided the status (the
    /// smaller margin when both fail).
    pub fn and(self, other: Verdict) -> Verdict {
        let status = self.status.and(other.status);
        let (lead, rest) = match (self.status, other.status) {
            (Status::Fail, Status::Fail) | (Status::Inconclusive, Status::Inconclusive) => {
                if other.margin < self.margin {
                    (other, self)
                } else {
                    (self, other)
                }
            }
            (Status::Fail, _) | (Status::Inconclusive, Status::Pass) => (self, other),
            (_, Status::Fail) | (Status::Pass, Status::Inconclusive) => (other, self),
            (Status::Pass, Status::Pass) => {
                if other.margin < self.margin {
                    (other, self)
                } else {
                    (self, other)
                }
            }
        };
        Verdict {
            status,
            witness: lead.witness,
            margin: lead.margin.min(rest.margin),
            method: format!("{}&{}", lead.method, rest.method),
            resolution: lead.resolution,
        }
    }

    /// Line-oriented report, numbers at nine significant digits.
    pub fn report(&self) -> String {
        let witness = match self.witness {
            Some(w) => format!("{} {}", fmt9(w.re), fmt9(w.im)),
            None => "none".into(),
        };
        format!(
            "status: {}\nmargin: {}\nwitness: {}\nmethod: {}\ngrid: {}\n",
            self.status,
            fmt9(self.margin),
            witness,
            self.method,
            self.resolution
        )
    }

    pub const CSV_HEADER: &'static str = "status,margin,witness_re,witness_im,method,grid";

    /// One CSV record (no header), full precision.
    pub fn csv_record(&self) -> String {
        let (re, im) = match self.witness {
            Some(w) => (w.re.to_string(), w.im.to_string()),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{}",
            self.status,
            self.margin,
            re,
            im,
            csv_field(&self.method),
            csv_field(&self.resolution)
        )
    }

    pub fn write_csv<W: Write>(verdicts: &[Verdict], mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for v in verdicts {
            writeln!(out, "{}", v.csv_record())?;
        }
        Ok(())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
