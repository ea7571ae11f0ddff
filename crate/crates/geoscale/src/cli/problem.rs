//! Problem files: a single JSON object describing a representation, a vector,
//! an optional target spectrum and optional solver parameters.

use num::rational::Rational64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::TargetSpectrum;
use crate::group::GroupKind;
use crate::gt::gt_orthonormal_rep;
use crate::margins::WeightMatrix;
use crate::reps::{
    conjugation_rep, matrix_scaling_rep, operator_scaling_rep, quiver_rep, restrict_to_sl, tensor_rep, torus_rep, Rep,
};
use crate::{c64, CVector};

/// Representation families accepted in problem files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RepSpec {
    Torus { weights: Vec<Vec<i64>> },
    MatrixScaling { n: usize },
    OperatorScaling { n: usize, k: usize },
    Tensor { dims: Vec<usize> },
    Conjugation { n: usize, k: usize },
    Quiver { dims: Vec<usize>, arrows: Vec<(usize, usize)> },
    /// Direct sum of tensor products of GT irreducibles; one `λ` per factor per summand.
    GtIrrepSum { sizes: Vec<usize>, summands: Vec<Vec<Vec<i64>>> },
}

/// A real number written as a JSON number or a decimal string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Decimal {
    Number(f64),
    Text(String),
}

impl Decimal {
    fn value(&self, path: &str) -> Result<f64> {
        let x = match self {
            Decimal::Number(x) => *x,
            Decimal::Text(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("field `{path}`: `{s}` is not a decimal number")))?,
        };
        if !x.is_finite() {
            return Err(Error::InvalidInput(format!("field `{path}`: value must be finite")));
        }
        Ok(x)
    }
}

/// A complex entry `[re, im]`, or a bare real number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexEntry {
    Pair([Decimal; 2]),
    Real(Decimal),
}

/// A rational written as an integer or a `"num/den"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalEntry {
    Integer(i64),
    Text(String),
}

impl RationalEntry {
    fn value(&self, path: &str) -> Result<Rational64> {
        match self {
            RationalEntry::Integer(k) => Ok(Rational64::from_integer(*k)),
            RationalEntry::Text(s) => {
                let bad = || Error::InvalidInput(format!("field `{path}`: `{s}` is not a rational of the form num/den"));
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?),
                    None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
                };
                if den == 0 {
                    return Err(Error::InvalidInput(format!("field `{path}`: zero denominator")));
                }
                Ok(Rational64::new(num, den))
            }
        }
    }
}

/// Optional solver parameters; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverParams {
    pub epsilon: Option<f64>,
    pub max_iterations: Option<usize>,
    pub cap_log_bound: Option<f64>,
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
    pub s_override: Option<u64>,
    pub randomize: Option<bool>,
    pub trace_every: Option<usize>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
}

/// The raw problem document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub representation: Option<RepSpec>,
    /// Applies to every factor; `GL` when omitted.
    pub group_kind: Option<GroupKind>,
    pub v: Option<Vec<ComplexEntry>>,
    /// Target spectrum, one nonincreasing vector per factor.
    pub target: Option<Vec<Vec<RationalEntry>>>,
    /// Raw weight list, accepted by the `margin` command in place of a representation.
    pub weights: Option<Vec<Vec<RationalEntry>>>,
    #[serde(default)]
    pub solver: SolverParams,
}

/// A validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    /// SHA-256 of the input bytes, hex encoded.
    pub digest: String,
    pub rep: Option<Rep>,
    pub v: Option<CVector>,
    pub target: Option<TargetSpectrum>,
    pub weights: Option<WeightMatrix>,
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Problem {
    /// Parses and validates a JSON problem document.
    pub fn from_json(text: &str) -> Result<Problem> {
        let mut de = serde_json::Deserializer::from_str(text);
        let file: ProblemFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let inner = e.inner();
            let path = e.path().to_string();
            Error::InvalidInput(format!("line {} column {}, field `{path}`: {inner}", inner.line(), inner.column()))
        })?;
        de.end().map_err(|e| Error::InvalidInput(format!("line {} column {}: {e}", e.line(), e.column())))?;
        let mut p = Problem::from_file(file)?;
        p.digest = hex_digest(text.as_bytes());
        Ok(p)
    }

    /// Validates an in-memory problem; the digest is taken over its canonical JSON form.
    pub fn from_file(file: ProblemFile) -> Result<Problem> {
        let canonical = serde_json::to_vec(&file).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let kind = file.group_kind.unwrap_or(GroupKind::Gl);
        let rep = file.representation.as_ref().map(|r| build_rep(r, kind)).transpose()?;
        if rep.is_none() && file.group_kind.is_some() {
            return Err(Error::InvalidInput("field `group_kind`: given without a representation".into()));
        }
        let v = match &file.v {
            Some(entries) => {
                let v = parse_vector(entries)?;
                if let Some(rep) = &rep {
                    if v.len() != rep.dim() {
                        return Err(Error::InvalidInput(format!(
                            "field `v`: length {} does not match the representation dimension {}",
                            v.len(),
                            rep.dim()
                        )));
                    }
                }
                Some(v)
            }
            None => None,
        };
        let target = match &file.target {
            Some(rows) => {
                let parts = parse_rows(rows, "target")?;
                let t = TargetSpectrum::new(parts).map_err(|e| located("target", e))?;
                if let Some(rep) = &rep {
                    t.check(rep.as_ref()).map_err(|e| located("target", e))?;
                }
                Some(t)
            }
            None => None,
        };
        let weights = match &file.weights {
            Some(rows) => Some(WeightMatrix::new(parse_rows(rows, "weights")?).map_err(|e| located("weights", e))?),
            None => None,
        };
        if rep.is_some() && weights.is_some() {
            return Err(Error::InvalidInput("field `weights`: give either a representation or a weight list".into()));
        }
        Ok(Problem { file, digest: hex_digest(&canonical), rep, v, target, weights })
    }

    pub fn rep(&self) -> Result<&Rep> {
        self.rep.as_ref().ok_or_else(|| Error::InvalidInput("field `representation`: required by this command".into()))
    }

    pub fn vector(&self) -> Result<&CVector> {
        let v = self.v.as_ref().ok_or_else(|| Error::InvalidInput("field `v`: required by this command".into()))?;
        if v.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::InvalidInput("field `v`: vector must be nonzero".into()));
        }
        Ok(v)
    }
}

fn located(field: &str, e: Error) -> Error {
    match e {
        Error::InvalidInput(m) => Error::InvalidInput(format!("field `{field}`: {m}")),
        other => other,
    }
}

fn parse_vector(entries: &[ComplexEntry]) -> Result<CVector> {
    if entries.is_empty() {
        return Err(Error::InvalidInput("field `v`: vector is empty".into()));
    }
    let vals = entries
        .iter()
        .enumerate()
        .map(|(i, e)| match e {
            ComplexEntry::Pair([re, im]) => Ok(c64(re.value(&format!("v[{i}][0]"))?, im.value(&format!("v[{i}][1]"))?)),
            ComplexEntry::Real(re) => Ok(c64(re.value(&format!("v[{i}]"))?, 0.0)),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CVector::from_vec(vals))
}

fn parse_rows(rows: &[Vec<RationalEntry>], field: &str) -> Result<Vec<Vec<Rational64>>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| r.iter().enumerate().map(|(j, x)| x.value(&format!("{field}[{i}][{j}]"))).collect())
        .collect()
}

fn build_rep(spec: &RepSpec, kind: GroupKind) -> Result<Rep> {
    let loc = |e: Error| located("representation", e);
    let sl = |r: Rep| if kind == GroupKind::Sl { restrict_to_sl(r) } else { Ok(r) };
    match spec {
        RepSpec::Torus { weights } => torus_rep(weights).and_then(sl),
        RepSpec::MatrixScaling { n } => matrix_scaling_rep(*n, kind),
        RepSpec::OperatorScaling { n, k } => operator_scaling_rep(*n, *k, kind),
        RepSpec::Tensor { dims } => tensor_rep(dims, kind),
        RepSpec::Conjugation { n, k } => conjugation_rep(*n, *k, kind),
        RepSpec::Quiver { dims, arrows } => quiver_rep(dims, arrows, kind),
        RepSpec::GtIrrepSum { sizes, summands } => gt_orthonormal_rep(summands, sizes).and_then(sl),
    }
    .map_err(loc)
}
