use std::path::Path;

use super::FiniteGroup;
use crate::{CayleyError, Error, Result};

/// Checks that `raw` is a group table with identity at index 0.
#[allow(clippy::needless_range_loop)]
pub fn validate_cayley(raw: &[Vec<usize>]) -> Result<FiniteGroup, CayleyError> {
    let n = raw.len();
    if n == 0 {
        return Err(CayleyError::Empty);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(CayleyError::NotSquare { row, len: r.len(), n });
        }
        if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(CayleyError::EntryOutOfRange { row, col, value, n });
        }
    }
    for g in 0..n {
        if raw[0][g] != g {
            return Err(CayleyError::NoIdentityAtZero { row: 0, col: g, value: raw[0][g] });
        }
        if raw[g][0] != g {
            return Err(CayleyError::NoIdentityAtZero { row: g, col: 0, value: raw[g][0] });
        }
    }
    let mut seen = vec![usize::MAX; n];
    for (row, r) in raw.iter().enumerate() {
        for (col, &value) in r.iter().enumerate() {
            if seen[value] == row {
                return Err(CayleyError::NotLatinSquare { row, col, value });
            }
            seen[value] = row;
        }
    }
    let mut seen = vec![usize::MAX; n];
    for col in 0..n {
        for row in 0..n {
            let value = raw[row][col];
            if seen[value] == col {
                return Err(CayleyError::NotLatinSquare { row, col, value });
            }
            seen[value] = col;
        }
    }
    for g in 0..n {
        let h = raw[g].iter().position(|&v| v == 0).expect("Latin row contains 0");
        if raw[h][g] != 0 {
            return Err(CayleyError::MissingInverse { element: g });
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = raw[a][b];
            for c in 0..n {
                if raw[ab][c] != raw[a][raw[b][c]] {
                    return Err(CayleyError::NotAssociative { a, b, c });
                }
            }
        }
    }
    let table = raw.iter().flatten().copied().collect();
    Ok(FiniteGroup::from_trusted(n, table))
}

/// Parses the text Cayley format: a line holding `n`, then `n` rows of `n`
/// space-separated indices. Lines starting with `#` are comments; blank
/// lines are ignored; anything else after the last row is rejected.
pub fn parse_cayley(text: &str, path: &str) -> Result<FiniteGroup> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_string(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing group order".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| err(line_no, format!("expected group order, found `{header}`")))?;
    if n == 0 {
        return Err(err(line_no, "group order must be positive".into()));
    }

    let mut raw = Vec::with_capacity(n);
    let mut last_line = line_no;
    for row in 0..n {
        let (line_no, text) = lines
            .next()
            .ok_or_else(|| err(last_line + 1, format!("expected {n} rows, found {row}")))?;
        last_line = line_no;
        let entries = text
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| err(line_no, format!("`{t}` is not a non-negative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.len() != n {
            return Err(err(
                line_no,
                format!("row {row} has {} entries, expected {n}", entries.len()),
            ));
        }
        raw.push(entries);
    }
    if let Some((line_no, extra)) = lines.next() {
        return Err(err(line_no, format!("trailing content `{extra}`")));
    }
    validate_cayley(&raw).map_err(|e| err(last_line, e.to_string()))
}

pub fn read_cayley_file(path: &Path) -> Result<FiniteGroup> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: shown.clone(),
        source,
    })?;
    parse_cayley(&text, &shown)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_two() {
        let g = validate_cayley(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.elt_orders(), &[1, 2]);
    }

    #[test]
    fn repeated_entry() {
        assert_eq!(
            validate_cayley(&[vec![0, 1], vec![1, 1]]),
            Err(CayleyError::NotLatinSquare { row: 1, col: 1, value: 1 })
        );
    }

    #[test]
    fn identity_must_be_zero() {
        // Z2 with identity at index 1
        assert!(matches!(
            validate_cayley(&[vec![1, 0], vec![0, 1]]),
            Err(CayleyError::NoIdentityAtZero { .. })
        ));
    }

    #[test]
    fn non_associative_loop() {
        // Latin square with identity 0 that is a loop but not a group (order 5)
        let raw = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            validate_cayley(&raw),
            Err(CayleyError::NotAssociative { .. })
        ));
    }

    #[test]
    fn missing_inverse() {
        // identity at 0, Latin, but 1*2 = 0 while 2*1 != 0
        let raw = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 3, 0, 4, 2],
            vec![2, 4, 3, 1, 0],
            vec![3, 2, 4, 0, 1],
            vec![4, 0, 1, 2, 3],
        ];
        assert_eq!(
            validate_cayley(&raw),
            Err(CayleyError::MissingInverse { element: 1 })
        );
    }

    const S3: &str = "# S3, rotations first\n6\n\
        0 1 2 3 4 5\n1 2 0 4 5 3\n2 0 1 5 3 4\n3 5 4 0 2 1\n4 3 5 1 0 2\n5 4 3 2 1 0\n";

    #[test]
    fn s3_file() {
        let g = parse_cayley(S3, "s3.txt").unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.elt_orders().iter().filter(|&&o| o == 3).count(), 2);
        assert!(!g.is_abelian());
    }

    #[test]
    fn trailing_garbage_rejected() {
        let text = format!("{S3}0 1\n");
        match parse_cayley(&text, "s3.txt") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_token_reports_line() {
        match parse_cayley("2\n0 1\n1 x\n", "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_cayley("2\n0 1\n", "t") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_cayley("2\n0 1\n1 0 1\n", "t").is_err());
        assert!(parse_cayley("2 2\n0 1\n1 0\n", "t").is_err());
    }
}
