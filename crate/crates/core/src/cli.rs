//! Command implementations behind the `polycoh` binary. Every command
//! writes to a caller-supplied sink so it can be driven from tests.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chambers::{self, ScanError};
use crate::expr::{self, Mode, ParseError, Value};
use crate::hkn::{HknMonomial, NormalForm, PresentationError, QuotientVector};
use crate::lengths::{LengthError, LengthVector};
use crate::moduli::Moduli;
use crate::nice_ring::RingError;
use crate::verify;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lengths(#[from] LengthError),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("{failed} verification check(s) failed")]
    VerifyFailed { failed: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lengths(_) => 2,
            CliError::Parse(_) => 3,
            CliError::VerifyFailed { .. } => 4,
            _ => 1,
        }
    }
}

/// Parses and validates a comma-separated length list.
pub fn moduli(lengths: &str) -> Result<Arc<Moduli>, CliError> {
    let l: LengthVector = lengths.parse()?;
    Ok(Moduli::new(l)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub label: String,
    #[serde(with = "crate::hkn::integer")]
    pub coeff: BigInt,
}

/// One homogeneous part of a result: its normal form and its terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonComponent {
    pub degree: usize,
    pub basis: Vec<HknMonomial>,
    #[serde(with = "crate::hkn::integer_list")]
    pub coords: Vec<BigInt>,
    pub terms: Vec<JsonTerm>,
}

impl JsonComponent {
    pub fn quotient_vector(&self) -> QuotientVector {
        QuotientVector {
            degree: self.degree,
            coords: self.coords.clone(),
        }
    }
}

/// A homogeneous result is printed as a single object, anything else as
/// an array of objects by degree (empty for zero).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonResult {
    Homogeneous(JsonComponent),
    Mixed(Vec<JsonComponent>),
}

impl JsonResult {
    pub fn components(&self) -> &[JsonComponent] {
        match self {
            JsonResult::Homogeneous(c) => std::slice::from_ref(c),
            JsonResult::Mixed(v) => v,
        }
    }
}

fn value_parts(
    value: &Value,
) -> (
    String,
    BTreeMap<usize, Vec<JsonTerm>>,
    Result<NormalForm, RingError>,
) {
    let mut by_degree: BTreeMap<usize, Vec<JsonTerm>> = BTreeMap::new();
    let mut push = |d: usize, label: String, coeff: &BigInt| {
        by_degree.entry(d).or_default().push(JsonTerm {
            label,
            coeff: coeff.clone(),
        });
    };
    match value {
        Value::Nice(x) => {
            for (l, c) in x.terms().iter() {
                push(l.codim(), l.to_string(), c);
            }
            (x.to_string(), by_degree, x.normal_form())
        }
        Value::Perfect(x) => {
            for (l, c) in x.terms().iter() {
                push(l.codim(), l.to_string(), c);
            }
            (x.to_string(), by_degree, x.normal_form())
        }
        Value::Hkn(p) => {
            for (m, c) in p.terms() {
                push(m.degree(), m.to_string(), c);
            }
            (p.to_string(), by_degree, Ok(NormalForm::default()))
        }
    }
}

/// Builds the JSON view of a value.
pub fn json_result(value: &Value, moduli: &Moduli) -> Result<JsonResult, CliError> {
    let basis = moduli.basis()?;
    let (_, terms, nf) = value_parts(value);
    let nf = match value {
        Value::Hkn(p) => basis.reduce(p),
        _ => nf?,
    };
    let mut degrees: Vec<usize> = terms
        .keys()
        .copied()
        .chain(nf.components.keys().copied())
        .collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut parts: Vec<JsonComponent> = degrees
        .into_iter()
        .map(|d| {
            let (slice_basis, coords) = match basis.slice(d) {
                Some(s) => {
                    let q = nf
                        .component(d)
                        .cloned()
                        .unwrap_or_else(|| basis.reduce_in_degree(&Default::default(), d));
                    (s.basis(), q.coords)
                }
                None => (Vec::new(), Vec::new()),
            };
            JsonComponent {
                degree: d,
                basis: slice_basis,
                coords,
                terms: terms.get(&d).cloned().unwrap_or_default(),
            }
        })
        .collect();
    Ok(if parts.len() == 1 {
        JsonResult::Homogeneous(parts.remove(0))
    } else {
        JsonResult::Mixed(parts)
    })
}

/// Evaluates `expression` and prints the resulting combination.
pub fn multiply(
    out: &mut dyn Write,
    lengths: &str,
    mode: Mode,
    expression: &str,
    json: bool,
) -> Result<(), CliError> {
    let m = moduli(lengths)?;
    let e = expr::parse(expression, mode, m.n())?;
    let value = expr::evaluate(&e, mode, &m)?;
    if json {
        serde_json::to_writer_pretty(&mut *out, &json_result(&value, &m)?)?;
        writeln!(out)?;
    } else {
        let (text, _, _) = value_parts(&value);
        writeln!(out, "{text}")?;
    }
    Ok(())
}

pub fn verify(out: &mut dyn Write, lengths: &str, opts: verify::Options) -> Result<(), CliError> {
    let m = moduli(lengths)?;
    let report = verify::run_all(&m, opts);
    writeln!(out, "{report}")?;
    match report.failures().count() {
        0 => Ok(()),
        failed => Err(CliError::VerifyFailed { failed }),
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Ranks in complex grading, then by cohomological degree.
pub fn betti(out: &mut dyn Write, lengths: &str, json: bool) -> Result<(), CliError> {
    let m = moduli(lengths)?;
    let b = m.basis()?.betti();
    if json {
        serde_json::to_writer(&mut *out, &b)?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "{}", join(&b))?;
    let doubled = b
        .iter()
        .enumerate()
        .flat_map(|(d, &r)| if d == 0 { vec![r] } else { vec![0, r] });
    writeln!(out, "by cohomological degree: {}", join(doubled))?;
    Ok(())
}

pub fn basis(out: &mut dyn Write, lengths: &str, json: bool) -> Result<(), CliError> {
    let m = moduli(lengths)?;
    let dump = m.basis()?.dump();
    if json {
        serde_json::to_writer_pretty(&mut *out, &dump)?;
        writeln!(out)?;
        return Ok(());
    }
    for d in dump {
        writeln!(
            out,
            "degree {} (rank {}): {}",
            d.degree,
            d.rank,
            join(&d.monomials)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonChamber {
    pub witness: Vec<u64>,
    pub representative: Vec<u64>,
    pub minimal_long_sets: Vec<Vec<usize>>,
    pub betti: Option<Vec<usize>>,
    pub error: Option<String>,
}

pub fn chambers(out: &mut dyn Write, n: usize, bound: u64, json: bool) -> Result<(), CliError> {
    let rows: Vec<JsonChamber> = chambers::scan(n, bound)?
        .into_iter()
        .map(|c| JsonChamber {
            witness: c.witness.lengths().to_vec(),
            representative: c.representative.lengths().to_vec(),
            minimal_long_sets: c
                .signature
                .minimal_long_sets()
                .iter()
                .map(|s| s.iter().collect())
                .collect(),
            betti: c.betti.as_ref().ok().cloned(),
            error: c.betti.as_ref().err().map(ToString::to_string),
        })
        .collect();
    if json {
        serde_json::to_writer_pretty(&mut *out, &rows)?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "{} chambers (n={n}, bound={bound})", rows.len())?;
    for r in &rows {
        let lv = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let betti = match (&r.betti, &r.error) {
            (Some(b), _) => join(b),
            (None, Some(e)) => format!("error: {e}"),
            (None, None) => String::new(),
        };
        let long: Vec<String> = r
            .minimal_long_sets
            .iter()
            .map(|s| {
                format!(
                    "{{{}}}",
                    s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            lv(&r.witness),
            lv(&r.representative),
            betti,
            long.join(" ")
        )?;
    }
    Ok(())
}
