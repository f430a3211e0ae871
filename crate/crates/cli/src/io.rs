//! The `QPS 1` point-set file format.
//!
//! ```text
//! QPS 1
//! PG 2 3
//! # comment
//! 1 0 0
//! 0 2 1
//! ```
//!
//! The header is the magic line followed by the space line. Each further
//! line holds one point as `m+1` field elements. Lines starting with `#`
//! and blank lines are skipped. Points are normalized on load.

use std::fmt::Write as _;
use std::path::Path;

use qps_core::gf::Elem;
use qps_core::pg::{PointSet, ProjSpace};
use qps_core::{Error, Result};

pub const MAGIC: &str = "QPS 1";

/// Parses the file contents into a space and a set.
pub fn parse_pointset(text: &str) -> Result<(ProjSpace, PointSet)> {
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == MAGIC => {}
        Some((_, l)) => return Err(Error::BadHeader(format!("expected {MAGIC:?}, found {:?}", l.trim()))),
        None => return Err(Error::BadHeader("empty file".into())),
    }
    let (_, space_line) = lines.next().ok_or_else(|| Error::BadHeader("missing \"PG m q\" line".into()))?;
    let words: Vec<&str> = space_line.split_whitespace().collect();
    let (m, q) = match words[..] {
        ["PG", m, q] => match (m.parse::<usize>(), q.parse::<usize>()) {
            (Ok(m), Ok(q)) => (m, q),
            _ => return Err(Error::BadHeader(format!("bad space line {space_line:?}"))),
        },
        _ => return Err(Error::BadHeader(format!("bad space line {space_line:?}"))),
    };
    let space = ProjSpace::of(m, q).map_err(|e| Error::BadHeader(e.to_string()))?;
    let mut set = space.empty_set();
    for (no, line) in lines {
        let coords: Vec<Elem> = line
            .split_whitespace()
            .map(|w| match w.parse::<usize>() {
                Ok(x) if x < q => Ok(x as Elem),
                _ => Err(Error::ParseError(no, format!("{w:?} is not an element of GF({q})"))),
            })
            .collect::<Result<_>>()?;
        if coords.len() != m + 1 {
            return Err(Error::ParseError(no, format!("expected {} coordinates, found {}", m + 1, coords.len())));
        }
        let p = space.normalize_point(&coords).map_err(|e| Error::ParseError(no, e.to_string()))?;
        if !set.insert(p) {
            return Err(Error::DuplicatePoint(no));
        }
    }
    Ok((space, set))
}

/// The file contents for `set`, points in ascending index order.
pub fn format_pointset(space: &ProjSpace, set: &PointSet) -> String {
    let mut out = format!("{MAGIC}\nPG {} {}\n", space.dim(), space.q());
    for p in set.iter() {
        let coords: Vec<String> = space.point(p).iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", coords.join(" "));
    }
    out
}

pub fn load_pointset(path: &Path) -> Result<(ProjSpace, PointSet)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::IoError(format!("{}: {e}", path.display())))?;
    parse_pointset(&text)
}

pub fn save_pointset(space: &ProjSpace, set: &PointSet, path: &Path) -> Result<()> {
    std::fs::write(path, format_pointset(space, set)).map_err(|e| Error::IoError(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes() {
        let (space, s) = parse_pointset("QPS 1\nPG 2 3\n# a comment\n0 2 1\n1 0 0\n").unwrap();
        assert_eq!(s.count(), 2);
        let p = space.normalize_point(&[0, 1, 2]).unwrap();
        assert!(s.contains(p));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_pointset("QPS 2\nPG 2 2\n"), Err(Error::BadHeader(_))));
        assert!(matches!(parse_pointset("QPS 1\nPG 2 6\n"), Err(Error::BadHeader(_))));
        assert!(matches!(parse_pointset("QPS 1\nPG 2\n"), Err(Error::BadHeader(_))));
        assert!(matches!(parse_pointset(""), Err(Error::BadHeader(_))));
        assert!(matches!(parse_pointset("QPS 1\nPG 2 3\n1 0 0\n2 0 0\n"), Err(Error::DuplicatePoint(4))));
        assert!(matches!(parse_pointset("QPS 1\nPG 2 3\n1 0 3\n"), Err(Error::ParseError(3, _))));
        assert!(matches!(parse_pointset("QPS 1\nPG 2 3\n1 0\n"), Err(Error::ParseError(3, _))));
        assert!(matches!(parse_pointset("QPS 1\nPG 2 3\n0 0 0\n"), Err(Error::ParseError(3, _))));
    }

    #[test]
    fn empty_set_is_header_only() {
        let space = ProjSpace::of(3, 2).unwrap();
        assert_eq!(format_pointset(&space, &space.empty_set()), "QPS 1\nPG 3 2\n");
    }
}
