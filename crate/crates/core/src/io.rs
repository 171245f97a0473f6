//! JSON file formats for states and Hamiltonians.
//!
//! Matrices are row-major nested arrays of `[re, im]` pairs. A state file is
//! `{"dims": [da, db], "rho": M}`; a Hamiltonian file is
//! `{"dims": [da, db], "h_a": M, "h_b": M, "v": M}`. An instance file holds
//! one of each under `state` and `hamiltonian`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat};
use crate::state::{BipartiteHamiltonian, Dims, QuantumState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexMatrix(pub Vec<Vec<[f64; 2]>>);

impl ComplexMatrix {
    pub fn from_matrix(m: &CMat) -> Self {
        ComplexMatrix((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
    }

    /// Checks the shape against `n × n` and reports the offending row.
    pub fn to_matrix(&self, n: usize, field: &str) -> Result<CMat> {
        if self.0.len() != n {
            return Err(Error::Parse(format!("field `{field}`: {} rows, expected {n}", self.0.len())));
        }
        for (i, row) in self.0.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("field `{field}`: row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(j) = row.iter().position(|z| !z[0].is_finite() || !z[1].is_finite()) {
                return Err(Error::Parse(format!("field `{field}`: entry ({i}, {j}) is not finite")));
            }
        }
        Ok(CMat::from_fn(n, n, |i, j| c(self.0[i][j][0], self.0[i][j][1])))
    }
}

fn dims_of(d: [usize; 2]) -> Result<Dims> {
    Dims::new(d[0], d[1]).map_err(|e| Error::Parse(format!("field `dims`: {e}")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub rho: ComplexMatrix,
}

impl StateFile {
    pub fn from_state(state: &QuantumState) -> Self {
        StateFile { dims: state.dims().as_slice(), rho: ComplexMatrix::from_matrix(state.matrix()) }
    }

    pub fn to_state(&self) -> Result<QuantumState> {
        let dims = dims_of(self.dims)?;
        QuantumState::new(dims, self.rho.to_matrix(dims.total(), "rho")?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianFile {
    pub dims: [usize; 2],
    pub h_a: ComplexMatrix,
    pub h_b: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl HamiltonianFile {
    pub fn from_hamiltonian(ham: &BipartiteHamiltonian) -> Self {
        HamiltonianFile {
            dims: ham.dims().as_slice(),
            h_a: ComplexMatrix::from_matrix(ham.local(crate::state::Subsystem::A)),
            h_b: ComplexMatrix::from_matrix(ham.local(crate::state::Subsystem::B)),
            v: ComplexMatrix::from_matrix(ham.interaction()),
        }
    }

    pub fn to_hamiltonian(&self) -> Result<BipartiteHamiltonian> {
        let dims = dims_of(self.dims)?;
        BipartiteHamiltonian::new(
            dims,
            self.h_a.to_matrix(dims.a, "h_a")?,
            self.h_b.to_matrix(dims.b, "h_b")?,
            self.v.to_matrix(dims.total(), "v")?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub state: StateFile,
    pub hamiltonian: HamiltonianFile,
    /// Free-form generator parameters kept for provenance.
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub parameters: serde_json::Value,
}

fn json_err(what: &str, e: serde_json::Error) -> Error {
    Error::Parse(format!("{what}: line {} column {}: {e}", e.line(), e.column()))
}

pub fn parse_state(text: &str) -> Result<QuantumState> {
    let f: StateFile = serde_json::from_str(text).map_err(|e| json_err("state file", e))?;
    f.to_state()
}

pub fn parse_hamiltonian(text: &str) -> Result<BipartiteHamiltonian> {
    let f: HamiltonianFile = serde_json::from_str(text).map_err(|e| json_err("Hamiltonian file", e))?;
    f.to_hamiltonian()
}

pub fn parse_instance(text: &str) -> Result<(QuantumState, BipartiteHamiltonian)> {
    let f: InstanceFile = serde_json::from_str(text).map_err(|e| json_err("instance file", e))?;
    Ok((f.state.to_state()?, f.hamiltonian.to_hamiltonian()?))
}

pub fn load_state(path: impl AsRef<Path>) -> Result<QuantumState> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<BipartiteHamiltonian> {
    parse_hamiltonian(&std::fs::read_to_string(path)?)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<(QuantumState, BipartiteHamiltonian)> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn state_to_json(state: &QuantumState) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(state)).expect("plain data serializes")
}

pub fn hamiltonian_to_json(ham: &BipartiteHamiltonian) -> String {
    serde_json::to_string_pretty(&HamiltonianFile::from_hamiltonian(ham)).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrong_row_length_names_the_row() {
        let text = r#"{"dims":[2,2],"rho":[[[1,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]],
            [[0,0],[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0],[0,0]]]}"#;
        let err = parse_state(text).unwrap_err().to_string();
        assert!(err.contains("row 1"), "{err}");
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_hamiltonian("{\n\"dims\": [2, 2],\n\"h_a\": oops}").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
    }
}
