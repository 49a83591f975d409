use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::Shape;
use crate::kernel::{Branch, FracOrder, Interval, KernelScale};

/// Smallest verdict margin, whatever the quadrature error estimates say.
pub const MIN_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InequalityKind {
    #[serde(rename = "HH")]
    HermiteHadamard,
    Fejer,
    #[serde(rename = "DA")]
    DragomirAgarwal,
    Pachpatte1,
    Pachpatte2,
}

impl InequalityKind {
    pub const ALL: [InequalityKind; 5] = [
        InequalityKind::HermiteHadamard,
        InequalityKind::Fejer,
        InequalityKind::DragomirAgarwal,
        InequalityKind::Pachpatte1,
        InequalityKind::Pachpatte2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityKind::HermiteHadamard => "HH",
            InequalityKind::Fejer => "Fejer",
            InequalityKind::DragomirAgarwal => "DA",
            InequalityKind::Pachpatte1 => "Pachpatte1",
            InequalityKind::Pachpatte2 => "Pachpatte2",
        }
    }

    pub fn needs_partner(self) -> bool {
        matches!(self, InequalityKind::Pachpatte1 | InequalityKind::Pachpatte2)
    }

    pub fn needs_weight(self) -> bool {
        self == InequalityKind::Fejer
    }

    /// Number of terms in the chain.
    pub fn term_count(self) -> usize {
        match self {
            InequalityKind::HermiteHadamard | InequalityKind::Fejer => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let kind = match key.as_str() {
            "hh" | "hermite_hadamard" => InequalityKind::HermiteHadamard,
            "fejer" => InequalityKind::Fejer,
            "da" | "dragomir_agarwal" => InequalityKind::DragomirAgarwal,
            "pachpatte1" | "p1" => InequalityKind::Pachpatte1,
            "pachpatte2" | "p2" => InequalityKind::Pachpatte2,
            _ => return Err(Error::Parse(format!("unknown inequality '{s}'"))),
        };
        Ok(kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// `holds` iff every slack is at least `-margin`, `violated` iff some
    /// slack is below `-10·margin`.
    pub fn from_slacks(slacks: &[f64], margin: f64) -> Verdict {
        if slacks.iter().any(|s| !s.is_finite() || *s < -10.0 * margin) {
            Verdict::Violated
        } else if slacks.iter().all(|&s| s >= -margin) {
            Verdict::Holds
        } else {
            Verdict::Inconclusive
        }
    }
}

/// `max(1e-8, 10·Σ est_error)`.
pub fn margin_for(total_error: f64) -> f64 {
    MIN_MARGIN.max(10.0 * total_error)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantBranch {
    pub name: String,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: InequalityKind,
    pub alpha: FracOrder,
    pub interval: Interval,
    pub kernel_scale: KernelScale,
    pub terms: Vec<Term>,
    /// Differences of adjacent terms in the asserted direction.
    pub slacks: Vec<f64>,
    pub shape: Shape,
    /// Sum of the quadrature error estimates carried into the terms.
    pub est_error: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub panels_used: usize,
    pub branches: Vec<ConstantBranch>,
    pub u: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
}

impl InequalityReport {
    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }

    pub fn term_values(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.value).collect()
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_bands() {
        let m = 1e-8;
        assert_eq!(Verdict::from_slacks(&[0.0, 1.0], m), Verdict::Holds);
        assert_eq!(Verdict::from_slacks(&[-m, 1.0], m), Verdict::Holds);
        assert_eq!(Verdict::from_slacks(&[-2.0 * m], m), Verdict::Inconclusive);
        assert_eq!(Verdict::from_slacks(&[-10.0 * m], m), Verdict::Inconclusive);
        assert_eq!(Verdict::from_slacks(&[-11.0 * m, 1.0], m), Verdict::Violated);
        assert_eq!(Verdict::from_slacks(&[f64::NAN], m), Verdict::Violated);
    }

    #[test]
    fn margin_floor() {
        assert_eq!(margin_for(0.0), 1e-8);
        assert_eq!(margin_for(0.5), 5.0);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in InequalityKind::ALL {
            assert_eq!(k.as_str().parse::<InequalityKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.as_str()));
        }
    }
}
