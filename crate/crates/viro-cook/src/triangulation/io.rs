//! Plain-text triangulation files.
//!
//! ```text
//! dim 2 deg 3
//! (0,0) (1,0) (0,1)
//! ...
//! certificate
//! (0,0) 0/1
//! ...
//! ```

use super::{LatticeSimplex, PLFunction, Point, Triangulation};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q};

fn fmt_point(p: &Point) -> String {
    let parts: Vec<String> = p.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn parse_point(s: &str) -> Result<Point> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("not a point: `{s}`")))?;
    inner.split(',').map(|c| c.trim().parse().map_err(|_| Error::Parse(format!("bad coordinate in `{s}`")))).collect()
}

#[must_use]
pub fn write(t: &Triangulation) -> String {
    let mut out = format!("dim {} deg {}\n", t.n, t.d);
    for s in &t.simplices {
        let parts: Vec<String> = s.vertices().iter().map(fmt_point).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out.push_str("certificate\n");
    for (p, v) in t.certificate.points.iter().zip(&t.certificate.values) {
        out.push_str(&format!("{} {}\n", fmt_point(p), fmt_q(v)));
    }
    out
}

pub fn read(text: &str) -> Result<Triangulation> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    let (n, d) = match words.as_slice() {
        ["dim", n, "deg", d] => (
            n.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension `{n}`")))?,
            d.parse::<u64>().map_err(|_| Error::Parse(format!("bad degree `{d}`")))?,
        ),
        _ => return Err(Error::Parse(format!("bad header `{header}`"))),
    };
    let mut simplices = Vec::new();
    let mut certificate = PLFunction { points: Vec::new(), values: Vec::new() };
    let mut in_cert = false;
    for line in lines {
        if line == "certificate" {
            in_cert = true;
            continue;
        }
        if in_cert {
            let (p, v) = line.rsplit_once(' ').ok_or_else(|| Error::Parse(format!("bad certificate line `{line}`")))?;
            certificate.points.push(parse_point(p)?);
            certificate.values.push(parse_q(v)?);
        } else {
            let pts = line.split_whitespace().map(parse_point).collect::<Result<Vec<_>>>()?;
            if pts.iter().any(|p| p.len() != n) {
                return Err(Error::Parse(format!("point of wrong dimension in `{line}`")));
            }
            simplices.push(LatticeSimplex::new(pts)?);
        }
    }
    simplices.sort();
    Ok(Triangulation { n, d, simplices, certificate })
}
