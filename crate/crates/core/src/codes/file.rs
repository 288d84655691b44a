use std::fmt::Write as _;

use crate::algebra::{Elem, Ring};
use crate::weights::{submodule_span, WeightFunction};

use super::{CodeError, QuotientCode};

/// Text form of a quotient code:
///
/// ```text
/// 7 z4
/// K
/// 0111333
/// M
/// 1022012
/// 3331321
/// ```
///
/// Rows are either whitespace-separated integers or, when every entry is a
/// single digit, one digit string of length `n`. `#` starts a comment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeFile {
    pub ring: Ring,
    pub n: usize,
    pub kernel: Vec<Vec<Elem>>,
    pub reps: Vec<Vec<Elem>>,
}

/// Parses one vector row in either accepted layout.
pub fn parse_vector_row(ring: &Ring, n: usize, line: &str) -> Result<Vec<Elem>, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let entries: Vec<&str> = if tokens.len() == 1 && n > 1 && tokens[0].len() == n {
        (0..n).map(|i| &tokens[0][i..i + 1]).collect()
    } else {
        tokens
    };
    if entries.len() != n {
        return Err(format!("expected {n} entries, found {}", entries.len()));
    }
    entries
        .iter()
        .map(|t| ring.parse_elem(t).ok_or_else(|| format!("`{t}` is not an element of {ring}")))
        .collect()
}

impl CodeFile {
    pub fn parse(text: &str) -> Result<CodeFile, CodeError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(CodeError::Parse { line: 1, msg: "empty input".into() })?;
        let mut fields = header.split_whitespace();
        let n: usize = fields
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(CodeError::Parse { line: hline, msg: "expected `n ring-spec`".into() })?;
        let ring: Ring = fields
            .next()
            .ok_or(CodeError::Parse { line: hline, msg: "missing ring spec".into() })?
            .parse()
            .map_err(|e| CodeError::Parse { line: hline, msg: format!("{e}") })?;
        let mut kernel = Vec::new();
        let mut reps = Vec::new();
        let mut section: Option<char> = None;
        for (line, body) in lines {
            match body {
                "K" => section = Some('K'),
                "M" => section = Some('M'),
                _ => {
                    let row = parse_vector_row(&ring, n, body).map_err(|msg| CodeError::Parse { line, msg })?;
                    match section {
                        Some('K') => kernel.push(row),
                        Some('M') => reps.push(row),
                        _ => return Err(CodeError::Parse { line, msg: "row before a `K` or `M` line".into() }),
                    }
                }
            }
        }
        Ok(CodeFile { ring, n, kernel, reps })
    }

    pub fn to_text(&self) -> String {
        let compact = self.ring.size() <= 10;
        let row = |v: &[Elem]| {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            parts.join(if compact { "" } else { " " })
        };
        let mut out = format!("{} {}\nK\n", self.n, self.ring);
        for g in &self.kernel {
            let _ = writeln!(out, "{}", row(g));
        }
        out.push_str("M\n");
        for r in &self.reps {
            let _ = writeln!(out, "{}", row(r));
        }
        out
    }

    /// Builds the code, merging listed vectors that share a coset.
    pub fn build(&self, weight: WeightFunction) -> Result<QuotientCode, CodeError> {
        let kernel = submodule_span(&self.ring, self.n, &self.kernel)?;
        QuotientCode::from_vectors(weight, kernel, &self.reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::Rational;

    const Z4: &str = "7 z4\nK\n0111333\nM\n1022012\n3 3 3 1 3 2 1  # spaced form\n";

    #[test]
    fn parse_and_round_trip() {
        let f = CodeFile::parse(Z4).unwrap();
        assert_eq!(f.n, 7);
        assert_eq!(f.kernel, vec![vec![0, 1, 1, 1, 3, 3, 3]]);
        assert_eq!(f.reps[1], vec![3, 3, 3, 1, 3, 2, 1]);
        assert_eq!(CodeFile::parse(&f.to_text()).unwrap(), f);
        let lee = WeightFunction::homogeneous(&f.ring, Rational::from(1)).unwrap();
        assert_eq!(f.build(lee).unwrap().min_induced_distance().unwrap(), Rational::from(8));
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(matches!(CodeFile::parse("3 z4\nK\n124\n"), Err(CodeError::Parse { line: 3, .. })));
        assert!(matches!(CodeFile::parse("3 z4\n012\n"), Err(CodeError::Parse { line: 2, .. })));
        assert!(matches!(CodeFile::parse("3 z4\nM\n01\n"), Err(CodeError::Parse { .. })));
        assert!(CodeFile::parse("").is_err());
        let big = CodeFile::parse("2 z12\nM\n10 11\n").unwrap();
        assert_eq!(big.reps, vec![vec![10, 11]]);
        assert_eq!(CodeFile::parse(&big.to_text()).unwrap(), big);
    }
}
