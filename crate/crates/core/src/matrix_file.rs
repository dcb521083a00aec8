//! JSON matrix file: `{"rows": R, "cols": N, "columns": ["+-+...", ...]}`.
//!
//! Character `l` of column string `j` is the sign of entry `(l, j)`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bitmatrix::BipolarMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<String>,
}

impl From<&BipolarMatrix> for MatrixFile {
    fn from(c: &BipolarMatrix) -> Self {
        let columns = (0..c.cols())
            .map(|j| {
                (0..c.rows())
                    .map(|l| if c.get(l, j) == 1 { '+' } else { '-' })
                    .collect()
            })
            .collect();
        Self {
            rows: c.rows(),
            cols: c.cols(),
            columns,
        }
    }
}

impl TryFrom<&MatrixFile> for BipolarMatrix {
    type Error = Error;

    fn try_from(f: &MatrixFile) -> Result<Self> {
        if f.columns.len() != f.cols {
            return Err(Error::Format(format!(
                "cols = {} but {} column strings",
                f.cols,
                f.columns.len()
            )));
        }
        let columns = f
            .columns
            .iter()
            .enumerate()
            .map(|(j, s)| {
                if s.chars().count() != f.rows {
                    return Err(Error::Format(format!(
                        "column {j} has {} chips, expected {}",
                        s.chars().count(),
                        f.rows
                    )));
                }
                s.chars()
                    .map(|ch| match ch {
                        '+' => Ok(1i8),
                        '-' => Ok(-1i8),
                        other => Err(Error::Format(format!(
                            "column {j}: unexpected character {other:?}"
                        ))),
                    })
                    .collect()
            })
            .collect::<Result<Vec<Vec<i8>>>>()?;
        BipolarMatrix::from_columns(f.rows, &columns).map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn to_json(c: &BipolarMatrix) -> String {
    let mut s = serde_json::to_string_pretty(&MatrixFile::from(c)).expect("matrix file serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<BipolarMatrix> {
    let f: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    BipolarMatrix::try_from(&f)
}

pub fn read(path: impl AsRef<Path>) -> Result<BipolarMatrix> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn write(path: impl AsRef<Path>, c: &BipolarMatrix) -> Result<()> {
    std::fs::write(path, to_json(c))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_the_documented_layout() {
        let c = from_json(r#"{"rows": 2, "cols": 3, "columns": ["++", "+-", "-+"]}"#).unwrap();
        assert_eq!(c.column(1), vec![1, -1]);
        assert_eq!(c.column(2), vec![-1, 1]);
    }

    #[test]
    fn rejects_malformed_files() {
        for bad in [
            r#"{"rows": 2, "cols": 2, "columns": ["++"]}"#,
            r#"{"rows": 2, "cols": 1, "columns": ["+"]}"#,
            r#"{"rows": 2, "cols": 1, "columns": ["+0"]}"#,
            r#"{"rows": 0, "cols": 0, "columns": []}"#,
            "not json",
        ] {
            assert!(matches!(from_json(bad), Err(Error::Format(_))), "{bad}");
        }
    }
}
