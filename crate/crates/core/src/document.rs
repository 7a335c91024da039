//! JSON design documents, schema version 1.
//!
//! Real numbers are written as decimal strings with 17 significant digits,
//! enough to reproduce every `f64` exactly.

use serde::{Deserialize, Serialize};

use crate::design::{DesignInput, PstDesign};
use crate::error::{PstError, Result};
use crate::spectral::SpectralMeasure;

pub const SCHEMA_VERSION: &str = "1";

/// Arithmetic used to produce a design.
pub const ARITHMETIC_MODE: &str = "f64 with double-double refinement";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub timestamp: String,
    pub arithmetic_mode: String,
}

impl Provenance {
    pub fn now() -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            arithmetic_mode: ARITHMETIC_MODE.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct WireDesign {
    m: u32,
    t0: String,
    theta: String,
    l_offsets: Vec<i64>,
    f_bits: Vec<u8>,
    support: Vec<String>,
    weights: Vec<String>,
    couplings: Vec<String>,
    hamiltonian_eigenvalues: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Wire {
    schema_version: String,
    design: WireDesign,
    provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignDocument {
    pub design: PstDesign,
    pub provenance: Provenance,
}

pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_real(field: &str, s: &str) -> Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| PstError::Document(format!("{field}: {s:?} is not a decimal number")))?;
    if !x.is_finite() {
        return Err(PstError::Document(format!("{field}: {s:?} is not finite")));
    }
    Ok(x)
}

fn parse_all(field: &str, v: &[String]) -> Result<Vec<f64>> {
    v.iter().map(|s| parse_real(field, s)).collect()
}

fn strings(v: &[f64]) -> Vec<String> {
    v.iter().copied().map(format_real).collect()
}

impl DesignDocument {
    pub fn new(design: PstDesign) -> Self {
        Self {
            design,
            provenance: Provenance::now(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let d = &self.design;
        let wire = Wire {
            schema_version: SCHEMA_VERSION.to_string(),
            design: WireDesign {
                m: d.input.m,
                t0: format_real(d.input.t0),
                theta: format_real(d.input.theta),
                l_offsets: d.input.l_offsets.clone(),
                f_bits: d.f_bits.clone(),
                support: strings(&d.measure.points),
                weights: strings(&d.measure.weights),
                couplings: strings(&d.couplings),
                hamiltonian_eigenvalues: strings(&d.hamiltonian_eigenvalues),
            },
            provenance: self.provenance.clone(),
        };
        serde_json::to_string_pretty(&wire).map_err(|e| PstError::Document(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: Wire =
            serde_json::from_str(text).map_err(|e| PstError::Document(e.to_string()))?;
        if wire.schema_version != SCHEMA_VERSION {
            return Err(PstError::Document(format!(
                "unsupported schema version {:?}",
                wire.schema_version
            )));
        }
        let w = wire.design;
        let input = DesignInput {
            m: w.m,
            t0: parse_real("t0", &w.t0)?,
            theta: parse_real("theta", &w.theta)?,
            l_offsets: w.l_offsets,
        };
        input
            .validate()
            .map_err(|e| PstError::Document(e.to_string()))?;
        let len = w.m as usize + 1;
        for (name, n) in [
            ("f_bits", w.f_bits.len()),
            ("support", w.support.len()),
            ("weights", w.weights.len()),
            ("couplings", w.couplings.len()),
            ("hamiltonian_eigenvalues", w.hamiltonian_eigenvalues.len()),
        ] {
            if n != len {
                return Err(PstError::Document(format!("{name} has {n} entries, expected {len}")));
            }
        }
        if w.f_bits.iter().any(|&b| b > 1) {
            return Err(PstError::Document("f_bits entries must be 0 or 1".into()));
        }
        let design = PstDesign {
            input,
            f_bits: w.f_bits,
            couplings: parse_all("couplings", &w.couplings)?,
            hamiltonian_eigenvalues: parse_all("hamiltonian_eigenvalues", &w.hamiltonian_eigenvalues)?,
            measure: SpectralMeasure {
                points: parse_all("support", &w.support)?,
                weights: parse_all("weights", &w.weights)?,
            },
        };
        Ok(Self {
            design,
            provenance: wire.provenance,
        })
    }
}
