//! Plain-text form of a [`BiPerm`]:
//!
//! ```text
//! d=2
//! 1 2 4 3
//! ```
//!
//! The second line is the flat 1-based one-line form.

use std::fmt;
use std::str::FromStr;

use super::{BiPerm, FlatPerm};
use crate::error::Error;

impl fmt::Display for BiPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d={}", self.d())?;
        let line: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
        writeln!(f, "{}", line.join(" "))
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(idx),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..idx]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

impl FromStr for BiPerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());

        let (hl, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, 1, "empty input, expected \"d=<d>\""))?;
        let col = header.len() - header.trim_start().len() + 1;
        let d_text = header
            .trim()
            .strip_prefix("d=")
            .ok_or_else(|| parse_err(hl, col, "expected \"d=<d>\""))?;
        let d: usize = d_text
            .trim()
            .parse()
            .map_err(|_| parse_err(hl, col + 2, format!("invalid dimension {d_text:?}")))?;
        if d == 0 || d > super::MAX_DIMENSION {
            return Err(parse_err(hl, col + 2, format!("dimension {d} out of range 1..=215")));
        }

        let (pl, body) = lines
            .next()
            .ok_or_else(|| parse_err(hl + 1, 1, "missing permutation line"))?;
        let n = d * d;
        let mut values = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for (c, tok) in tokens(body) {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(pl, c, format!("invalid integer {tok:?}")))?;
            if v == 0 || v > n {
                return Err(parse_err(pl, c, format!("value {v} out of range 1..={n}")));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(parse_err(pl, c, format!("value {v} repeated")));
            }
            values.push(v);
        }
        if values.len() != n {
            return Err(parse_err(
                pl,
                body.len() + 1,
                format!("expected {n} values, found {}", values.len()),
            ));
        }
        if let Some((el, extra)) = lines.next() {
            return Err(parse_err(
                el,
                extra.len() - extra.trim_start().len() + 1,
                "unexpected trailing content",
            ));
        }
        let flat = FlatPerm::new(&values)?;
        BiPerm::from_flat(&flat, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let p = BiPerm::from_one_line(&[1, 2, 4, 3], 2).unwrap();
        assert_eq!(p.to_string(), "d=2\n1 2 4 3\n");
    }

    #[test]
    fn parse_ok() {
        let p: BiPerm = "d=2\n  1 2 4 3  \n".parse().unwrap();
        assert_eq!(p.one_line(), vec![1, 2, 4, 3]);
    }

    fn err_pos(s: &str) -> (usize, usize) {
        match s.parse::<BiPerm>() {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(err_pos(""), (1, 1));
        assert_eq!(err_pos("n=2\n1 2 3 4"), (1, 1));
        assert_eq!(err_pos("d=x\n1 2 3 4"), (1, 3));
        assert_eq!(err_pos("d=2"), (2, 1));
        assert_eq!(err_pos("d=2\n1 2 x 4"), (2, 5));
        assert_eq!(err_pos("d=2\n1 2 2 4"), (2, 5));
        assert_eq!(err_pos("d=2\n1 2 9 4"), (2, 5));
        assert_eq!(err_pos("d=2\n1 2 3"), (2, 6));
        assert_eq!(err_pos("d=2\n1 2 3 4\n5"), (3, 1));
    }
}
