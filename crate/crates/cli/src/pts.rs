//! The `.pts` instance format: a `d n` header, then `n` lines of `d`
//! whitespace-separated coordinates. `#` starts a comment.

use std::fmt::Write;

use steiner_core::Point64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

pub fn parse_pts(text: &str) -> Result<Vec<Point64>, ParseError> {
    let mut rows = text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    });
    let (hline, header) = rows.next().ok_or_else(|| err(0, "missing \"d n\" header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let [d, n] = h[..] else {
        return Err(err(hline, "header must be \"d n\""));
    };
    let d: usize = d.parse().map_err(|_| err(hline, format!("bad dimension {d:?}")))?;
    let n: usize = n.parse().map_err(|_| err(hline, format!("bad point count {n:?}")))?;
    if d < 2 {
        return Err(err(hline, format!("dimension must be at least 2, got {d}")));
    }
    let mut points = Vec::with_capacity(n);
    for (line, body) in rows {
        if points.len() == n {
            return Err(err(line, format!("more than {n} points")));
        }
        let coords = body
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(line, format!("bad coordinate {t:?}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if coords.len() != d {
            return Err(err(line, format!("expected {d} coordinates, found {}", coords.len())));
        }
        points.push(Point64::new(coords).map_err(|e| err(line, e.to_string()))?);
    }
    if points.len() != n {
        return Err(err(text.lines().count(), format!("expected {n} points, found {}", points.len())));
    }
    Ok(points)
}

/// Coordinates are written in shortest round-trip form.
pub fn write_pts(points: &[Point64], comment: &str) -> String {
    let mut s = String::new();
    for line in comment.lines() {
        writeln!(s, "# {line}").unwrap();
    }
    let d = points.first().map_or(2, |p| p.dim());
    writeln!(s, "{d} {}", points.len()).unwrap();
    for p in points {
        let row: Vec<String> = p.coords().iter().map(|c| format!("{c:?}")).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let pts = vec![Point64::xy(0.1, -2.0), Point64::xy(1e-17, 3.0)];
        assert_eq!(parse_pts(&write_pts(&pts, "two points")).unwrap(), pts);
    }

    #[test]
    fn comments_and_blanks() {
        let p = parse_pts("# c\n2 2 # header\n\n0 0\n1 1 # tail\n").unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn diagnostics() {
        assert_eq!(parse_pts("2 2\n0 0\n1\n").unwrap_err().line, 3);
        assert!(parse_pts("").is_err());
        assert!(parse_pts("2 3\n0 0\n1 1\n").is_err());
        assert!(parse_pts("2 1\n0 0\n1 1\n").is_err());
        assert!(parse_pts("1 1\n0\n").is_err());
        assert!(parse_pts("2 1\nnan 0\n").is_err());
    }
}
