//! Shared plain-text parsing support for the one-line permutation, nest, and
//! matrix formats. All formats are ASCII, comma/semicolon/space separated.

use std::fmt;

/// Position-annotated parse failure for any of the text formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line of the offending token (always 1 for single-line input).
    pub line: usize,
    /// 1-based column of the offending token.
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }

    /// Error at a given column of a single-line input.
    pub fn at_col(col: usize, msg: impl Into<String>) -> Self {
        ParseError::new(1, col, msg)
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Parses a comma-separated list of nonnegative integers, reporting the
/// 1-based column of the first bad token. Empty input yields an empty list.
pub fn parse_csv_usize(s: &str) -> Result<Vec<usize>, ParseError> {
    let mut out = Vec::new();
    if s.trim().is_empty() {
        return Ok(out);
    }
    let mut col = 1;
    for tok in s.split(',') {
        let t = tok.trim();
        match t.parse::<usize>() {
            Ok(v) => out.push(v),
            Err(_) => {
                return Err(ParseError::at_col(col, format!("expected a nonnegative integer, found {t:?}")));
            }
        }
        col += tok.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_parses_and_reports_columns() {
        assert_eq!(parse_csv_usize("4,2,3,1,0").unwrap(), vec![4, 2, 3, 1, 0]);
        assert_eq!(parse_csv_usize("").unwrap(), Vec::<usize>::new());
        let err = parse_csv_usize("4,x,1").unwrap_err();
        assert_eq!(err.col, 3);
        assert_eq!(err.line, 1);
    }
}
