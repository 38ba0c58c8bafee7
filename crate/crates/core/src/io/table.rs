use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::norms::NormReport;

/// `{:.16e}`: 17 significant digits, enough to round-trip every `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

/// A header row and rows of floats. Rows must match the header length.
pub fn write_csv<W: Write, R: AsRef<[f64]>>(out: W, header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    for row in rows {
        let row = row.as_ref();
        if row.len() != header.len() {
            return Err(Error::DimensionMismatch {
                expected: header.len(),
                actual: row.len(),
            });
        }
        w.write_record(row.iter().map(|&x| format_float(x))).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Config(format!("csv: {e}")))?;
    Ok(())
}

pub fn csv_string<R: AsRef<[f64]>>(header: &[&str], rows: impl IntoIterator<Item = R>) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, header, rows)?;
    Ok(String::from_utf8(buf).expect("ascii output"))
}

/// Header and float rows of a CSV file.
pub fn read_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        let row = rec
            .iter()
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("csv row {}: `{f}` is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

/// Norm rows in the fixed [`NormReport::COLUMNS`] schema.
pub fn norm_rows_csv(rows: &[NormReport]) -> Result<String> {
    csv_string(NormReport::COLUMNS, rows.iter().map(NormReport::values))
}

pub fn read_norm_rows<R: Read>(input: R) -> Result<Vec<NormReport>> {
    let (header, rows) = read_csv(input)?;
    if header.iter().map(String::as_str).ne(NormReport::COLUMNS.iter().copied()) {
        return Err(Error::Config(format!(
            "norm rows: header does not match the schema ({} columns expected)",
            NormReport::COLUMNS.len()
        )));
    }
    rows.iter().map(|r| NormReport::from_values(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_record_is_header_only() {
        let text = norm_rows_csv(&[]).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("t,l2_sq,"));
        assert!(read_norm_rows(text.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn schema_is_checked() {
        assert!(read_norm_rows("t,x\n1,2\n".as_bytes()).is_err());
        assert!(read_csv("a,b\n1,zz\n".as_bytes()).is_err());
        assert!(csv_string(&["a", "b"], [[1.0]]).is_err());
    }

    proptest! {
        #[test]
        fn rows_round_trip_bitwise(values in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, NormReport::COLUMNS.len() * 3)) {
            let rows: Vec<NormReport> = values.chunks(NormReport::COLUMNS.len()).map(|c| NormReport::from_values(c).unwrap()).collect();
            let back = read_norm_rows(norm_rows_csv(&rows).unwrap().as_bytes()).unwrap();
            for (a, b) in rows.iter().zip(&back) {
                for (x, y) in a.values().iter().zip(b.values()) {
                    prop_assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
    }
}
