//! Matrix JSON: `{"dim": n, "re": [[..]; n], "im": [[..]; n]}`, row-major,
//! written pretty-printed with a trailing newline.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{validate, DensityMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let rows = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n).map(|i| (0..n).map(|j| part(&m[(i, j)])).collect()).collect()
        };
        Self {
            dim: n,
            // + 0.0 maps -0.0 to 0.0 so conjugated zeros serialize plainly
            re: rows(|z| z.re + 0.0),
            im: rows(|z| z.im + 0.0),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.dim;
        let square = |rows: &[Vec<f64>], name: &str| -> Result<()> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Shape(format!("`{name}` is not {n}x{n}")));
            }
            Ok(())
        };
        square(&self.re, "re")?;
        square(&self.im, "im")?;
        let data = self
            .re
            .iter()
            .flatten()
            .zip(self.im.iter().flatten())
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(n, data)
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let raw: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    raw.to_matrix()
}

/// Parses and validates in one step.
pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    validate(&parse_matrix(text)?)
}

pub fn to_json(m: &ComplexMatrix) -> String {
    let mut s = serde_json::to_string_pretty(&MatrixJson::from_matrix(m)).expect("plain data");
    s.push('\n');
    s
}
