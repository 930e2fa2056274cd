//! JSON and line-oriented text forms of a complex.
//!
//! JSON: `{"n": 4, "r": 2, "faces": [[[1],[2]], [[1,2]], []]}`.
//!
//! Text: one face per line as space-separated 1-based ids. An optional
//! header `# n=<n> r=<r>` fixes the ambient size and cap; otherwise `n` is
//! the largest id and `r` the largest face dimension. Faces read from text
//! are down-closed, so a facet list is enough. Other `#` lines are comments.

use std::io::{BufRead, Write};

use super::{RawComplex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};

pub fn to_json(y: &SimplicialComplex) -> Result<String> {
    Ok(serde_json::to_string(&y.to_raw())?)
}

pub fn from_json(s: &str) -> Result<SimplicialComplex> {
    let raw: RawComplex = serde_json::from_str(s)?;
    SimplicialComplex::try_from(raw)
}

pub fn write_text<W: Write>(y: &SimplicialComplex, mut w: W) -> Result<()> {
    writeln!(w, "# n={} r={}", y.n(), y.r())?;
    for face in y.iter_faces() {
        writeln!(w, "{face}")?;
    }
    Ok(())
}

pub fn to_text(y: &SimplicialComplex) -> String {
    let mut buf = Vec::new();
    write_text(y, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

pub fn read_text<R: BufRead>(reader: R) -> Result<SimplicialComplex> {
    let mut header_n: Option<u32> = None;
    let mut header_r: Option<usize> = None;
    let mut faces = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("n=") {
                    header_n = Some(v.parse().map_err(|_| bad_line(lineno, t))?);
                } else if let Some(v) = tok.strip_prefix("r=") {
                    header_r = Some(v.parse().map_err(|_| bad_line(lineno, t))?);
                }
            }
            continue;
        }
        let ids = t
            .split_whitespace()
            .map(|tok| tok.parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad_line(lineno, t))?;
        faces.push(Simplex::new(ids)?);
    }
    let n = header_n.unwrap_or_else(|| faces.iter().map(Simplex::max_vertex).max().unwrap_or(0));
    let r = header_r.unwrap_or_else(|| faces.iter().map(Simplex::dim).max().unwrap_or(0));
    SimplicialComplex::closure(n, r, faces)
}

pub fn from_text(s: &str) -> Result<SimplicialComplex> {
    read_text(s.as_bytes())
}

/// Parses JSON when the content starts with `{`, text otherwise.
pub fn parse_any(s: &str) -> Result<SimplicialComplex> {
    if s.trim_start().starts_with('{') {
        from_json(s)
    } else {
        from_text(s)
    }
}

fn bad_line(lineno: usize, line: &str) -> Error {
    Error::Parse(format!("line {}: cannot parse `{line}`", lineno + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_reader_closes_facets_and_reads_header() {
        let y = from_text("# n=5 r=2\n1 2 3\n\n4\n").unwrap();
        assert_eq!(y.n(), 5);
        assert_eq!(y.f_vector().0, vec![4, 3, 1]);
        let z = from_text("2 3\n").unwrap();
        assert_eq!((z.n(), z.r()), (3, 1));
    }

    #[test]
    fn json_rejects_non_closed_input() {
        let bad = r#"{"n":3,"r":1,"faces":[[[1]],[[1,2]]]}"#;
        assert!(matches!(from_json(bad), Err(Error::InvalidComplex { .. })));
        assert!(from_text("1 x\n").is_err());
    }

    #[test]
    fn json_shape() {
        let y = SimplicialComplex::full_skeleton(2, 1);
        assert_eq!(to_json(&y).unwrap(), r#"{"n":2,"r":1,"faces":[[[1],[2]],[[1,2]]]}"#);
    }
}
