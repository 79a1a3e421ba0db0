use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// A rectangular numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub n: usize,
}

impl Dataset {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != columns.len()) {
            return Err(Error::Data(format!(
                "row {} has {} values, header has {} columns",
                i + 2,
                r.len(),
                columns.len()
            )));
        }
        let n = rows.len();
        Ok(Self { columns, rows, n })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Data(format!("no column named \"{name}\" (have: {})", self.columns.join(", "))))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let j = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[j]).collect())
    }

    /// CSV with a header and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Parse a headed CSV of numbers. Rows are numbered as file lines, so the
/// first data row is row 2.
pub fn parse_csv<R: Read>(input: R) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let header = reader.headers().map_err(|e| Error::Data(format!("header: {e}")))?.clone();
    let columns: Vec<String> = header.iter().map(str::to_string).collect();
    if columns.is_empty() || columns.iter().all(String::is_empty) {
        return Err(Error::Data("empty file: no header line".into()));
    }
    let mut rows = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let row = k + 2;
        let rec = rec.map_err(|e| Error::Data(format!("row {row}: {e}")))?;
        if rec.len() != columns.len() {
            return Err(Error::Data(format!(
                "row {row}: {} cells, expected {}",
                rec.len(),
                columns.len()
            )));
        }
        let values = rec
            .iter()
            .zip(&columns)
            .map(|(cell, col)| {
                if cell.is_empty() {
                    return Err(Error::Data(format!("row {row}, column \"{col}\": missing value")));
                }
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Data(format!("row {row}, column \"{col}\": cannot parse \"{cell}\" as a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(values);
    }
    if rows.is_empty() {
        return Err(Error::Data("no data rows".into()));
    }
    Dataset::new(columns, rows)
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
    parse_csv(file).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_rows() {
        let d = parse_csv("t,x1\n1.5,2\n2.5,3e-1\n".as_bytes()).unwrap();
        assert_eq!(d.n, 2);
        assert_eq!(d.column("x1").unwrap(), vec![2.0, 0.3]);
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        let err = parse_csv("t,x1,x2,x3\n1,2,3,abc\n".as_bytes()).unwrap_err().to_string();
        assert!(err.contains("row 2") && err.contains("\"x3\""), "{err}");
        let err = parse_csv("t,x1\n1,2\n3,\n".as_bytes()).unwrap_err().to_string();
        assert!(err.contains("row 3") && err.contains("missing"), "{err}");
        let err = parse_csv("t,x1\n1,2\n3\n".as_bytes()).unwrap_err().to_string();
        assert!(err.contains("row 3"), "{err}");
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(parse_csv("".as_bytes()).is_err());
        assert!(parse_csv("t,x\n".as_bytes()).is_err());
        assert!(parse_csv("t\n1,5\n".as_bytes()).is_err());
    }

    #[test]
    fn csv_output_round_trips() {
        let d = Dataset::new(vec!["a".into(), "b".into()], vec![vec![0.1, 1.0 / 3.0]]).unwrap();
        let back = parse_csv(d.to_csv().as_bytes()).unwrap();
        assert_eq!(back, d);
        assert!(d.column("zz").is_err());
    }
}
