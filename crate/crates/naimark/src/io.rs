//! Serialization schemas shared with the command-line tools.
//!
//! Effects travel as Pauli components; matrices are derived on load. Field
//! order is fixed by struct order, so identical inputs serialize to
//! byte-identical JSON.

use serde::{Deserialize, Serialize};

use crate::effect::{pauli_compose, pauli_decompose, PauliVector};
use crate::error::{Error, Result};
use crate::joint::JointPovm;
use crate::povm::{CdVectors, DiscretePovm, MultiplicityVector};
use crate::NaimarkDilation;

/// `{"e0": …, "ex": …, "ey": …, "ez": …}`
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EffectJson {
    pub e0: f64,
    pub ex: f64,
    pub ey: f64,
    pub ez: f64,
}

impl From<&PauliVector> for EffectJson {
    fn from(v: &PauliVector) -> Self {
        Self {
            e0: v.e0,
            ex: v.e[0],
            ey: v.e[1],
            ez: v.e[2],
        }
    }
}

impl From<&EffectJson> for PauliVector {
    fn from(e: &EffectJson) -> Self {
        PauliVector::new(e.e0, [e.ex, e.ey, e.ez])
    }
}

/// `{"effects": [EffectJson, …]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PovmJson {
    pub effects: Vec<EffectJson>,
}

impl PovmJson {
    pub fn from_povm(p: &DiscretePovm) -> Result<Self> {
        Ok(Self {
            effects: p.pauli_vectors()?.iter().map(EffectJson::from).collect(),
        })
    }

    pub fn to_povm(&self) -> DiscretePovm {
        DiscretePovm::new(
            self.effects
                .iter()
                .map(|e| pauli_compose(&PauliVector::from(e)))
                .collect(),
        )
    }
}

/// One isometry row in rectangular form.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RowJson {
    pub c_re: f64,
    pub c_im: f64,
    pub d_re: f64,
    pub d_im: f64,
}

/// `{"m": […], "rows": [RowJson, …]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DilationJson {
    pub m: Vec<u8>,
    pub rows: Vec<RowJson>,
}

impl DilationJson {
    pub fn from_dilation(d: &NaimarkDilation) -> Self {
        Self {
            m: d.m.0.clone(),
            rows: d
                .rows
                .iter()
                .map(|&(c, dd)| RowJson {
                    c_re: c.re,
                    c_im: c.im,
                    d_re: dd.re,
                    d_im: dd.im,
                })
                .collect(),
        }
    }

    pub fn to_dilation(&self) -> Result<NaimarkDilation> {
        let v = CdVectors {
            c: self
                .rows
                .iter()
                .map(|r| num_complex::Complex64::new(r.c_re, r.c_im))
                .collect(),
            d: self
                .rows
                .iter()
                .map(|r| num_complex::Complex64::new(r.d_re, r.d_im))
                .collect(),
        };
        NaimarkDilation::from_cd(&v, &MultiplicityVector(self.m.clone()))
    }
}

/// `{"grid": [[EffectJson, …], …]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridJson {
    pub grid: Vec<Vec<EffectJson>>,
}

impl GridJson {
    pub fn from_joint(j: &JointPovm) -> Result<Self> {
        let mut grid = Vec::with_capacity(j.rows());
        for row in &j.grid {
            let mut out = Vec::with_capacity(row.len());
            for n in row {
                out.push(EffectJson::from(&pauli_decompose(n)?));
            }
            grid.push(out);
        }
        Ok(Self { grid })
    }

    pub fn to_joint(&self) -> JointPovm {
        JointPovm {
            grid: self
                .grid
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| pauli_compose(&PauliVector::from(e)))
                        .collect()
                })
                .collect(),
        }
    }
}

pub fn parse_povm(text: &str) -> Result<DiscretePovm> {
    let parsed: PovmJson = serde_json::from_str(text)
        .map_err(|e| Error::InvalidArgument(format!("POVM JSON: {e}")))?;
    Ok(parsed.to_povm())
}
