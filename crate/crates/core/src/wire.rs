//! JSON and CSV documents exchanged with the outside world. Every scalar is
//! written as its canonical text (`"p/q"` or an integer for rationals).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::chainseq::GammaSeq;
use crate::error::{Error, Result};
use crate::jacobi::{BidiagonalFactors, Zero};
use crate::recurrence::{ClosedForm, ThreeTermSystem};
use crate::scalar::Scalar;

pub fn texts<S: Scalar>(values: &[S]) -> Vec<String> {
    values.iter().map(Scalar::to_text).collect()
}

pub fn parse_all<S: Scalar>(values: &[String]) -> Result<Vec<S>> {
    values.iter().map(|s| S::parse(s)).collect()
}

/// Comma-separated scalar list, e.g. `"1,2,3/2"`.
pub fn parse_list<S: Scalar>(text: &str) -> Result<Vec<S>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(S::parse)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDoc {
    pub b: Vec<String>,
    pub a2: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedForm>,
}

impl SystemDoc {
    /// `b_1..b_n` and `a_1^2..a_{n-1}^2`: exactly what fixes `P_0..P_n`.
    pub fn from_system<S: Scalar>(sys: &ThreeTermSystem<S>, n: usize) -> Result<Self> {
        Ok(SystemDoc {
            b: texts(&sys.b_stream().take(n)?),
            a2: texts(&sys.a2_stream().take(n.saturating_sub(1))?),
            closed_form: sys.closed_form().cloned(),
        })
    }

    pub fn to_system<S: Scalar>(&self) -> Result<ThreeTermSystem<S>> {
        let sys = ThreeTermSystem::from_vecs(parse_all(&self.b)?, parse_all(&self.a2)?);
        Ok(match &self.closed_form {
            Some(cf) => sys.with_closed_form(cf.clone()),
            None => sys,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaDoc {
    pub gamma: Vec<String>,
}

impl GammaDoc {
    pub fn from_gamma<S: Scalar>(gamma: &GammaSeq<S>, count: usize) -> Result<Self> {
        Ok(GammaDoc {
            gamma: texts(&gamma.take(count)?),
        })
    }

    pub fn to_gamma<S: Scalar>(&self) -> Result<GammaSeq<S>> {
        Ok(GammaSeq::from_vec(parse_all(&self.gamma)?))
    }
}

/// Either accepted input document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InputDoc {
    Gamma(GammaDoc),
    System(SystemDoc),
}

impl InputDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("input JSON: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LuDoc {
    #[serde(rename = "L_sub")]
    pub l_sub: Vec<String>,
    #[serde(rename = "U_diag")]
    pub u_diag: Vec<String>,
}

impl<S: Scalar> From<&BidiagonalFactors<S>> for LuDoc {
    fn from(f: &BidiagonalFactors<S>) -> Self {
        LuDoc {
            l_sub: texts(&f.l_sub),
            u_diag: texts(&f.u_diag),
        }
    }
}

pub const ZEROS_CSV_HEADER: &str = "index,value,bracket_width";

/// One row per zero, 1-based index.
pub fn zeros_csv(zeros: &[Zero]) -> String {
    let mut out = String::from(ZEROS_CSV_HEADER);
    out.push('\n');
    for (i, z) in zeros.iter().enumerate() {
        writeln!(out, "{},{:.17e},{:.3e}", i + 1, z.value, z.bracket_width).unwrap();
    }
    out
}
