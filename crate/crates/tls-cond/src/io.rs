//! Plain-text matrix format: a `rows cols` header line followed by
//! whitespace-separated row-major entries. Lines starting with `#` are
//! comments. Writers emit 17 significant digits.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::Error;
use crate::matrix::DenseMatrix;

pub fn read_matrix<R: Read>(reader: R) -> Result<DenseMatrix, Error> {
    let mut tokens: Vec<String> = Vec::new();
    for line in BufReader::new(reader).lines() {
        let line = line?;
        let trimmed = line.trim_start();
        if trimmed.starts_with('#') {
            continue;
        }
        tokens.extend(trimmed.split_whitespace().map(str::to_owned));
    }
    if tokens.len() < 2 {
        return Err(Error::Parse("missing `rows cols` header".into()));
    }
    let rows: usize = tokens[0]
        .parse()
        .map_err(|_| Error::Parse(format!("bad row count `{}`", tokens[0])))?;
    let cols: usize = tokens[1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad column count `{}`", tokens[1])))?;
    let expected = rows
        .checked_mul(cols)
        .ok_or(Error::DimensionOverflow)?;
    let values = &tokens[2..];
    if values.len() != expected {
        return Err(Error::Parse(format!(
            "expected {expected} entries for a {rows}x{cols} matrix, found {}",
            values.len()
        )));
    }
    let mut entries = Vec::with_capacity(expected);
    for tok in values {
        entries.push(
            tok.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad entry `{tok}`")))?,
        );
    }
    DenseMatrix::from_row_major(rows, cols, &entries)
}

pub fn load_matrix(path: &Path) -> Result<DenseMatrix, Error> {
    read_matrix(File::open(path)?)
}

pub fn write_matrix<W: Write>(mut writer: W, m: &DenseMatrix) -> Result<(), Error> {
    writeln!(writer, "{} {}", m.rows(), m.cols())?;
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format!("{:.16e}", m[(i, j)])).collect();
        writeln!(writer, "{}", row.join(" "))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_text() {
        let m = DenseMatrix::from_row_major(2, 3, &[1.0, -2.5, 3e-17, 4.0, 5.0, 6.125]).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &m).unwrap();
        let back = read_matrix(buf.as_slice()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn skips_comments_and_flexible_whitespace() {
        let text = "# a matrix\n2 2\n1 2\n# middle comment\n3   4\n";
        let m = read_matrix(text.as_bytes()).unwrap();
        assert_eq!(m.row_major(), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn reports_malformed_input() {
        assert!(matches!(read_matrix("".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_matrix("2 2\n1 2 3".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(
            read_matrix("2 2\n1 2 3 x".as_bytes()),
            Err(Error::Parse(_))
        ));
    }
}
