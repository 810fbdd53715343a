//! Side files: per-vertex values, pair lists and anchor lists.

use std::fs;
use std::path::Path;

use dmw::{Digraph, Error, Result};

pub const MAX_TAU: i64 = 1 << 40;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInstance(format!("{}: {e}", path.display())))
}

pub fn graph(path: &Path) -> Result<Digraph> {
    read(path)?.parse()
}

/// Integer rows of a headerless file, skipping blanks and `#` comments.
fn rows(text: &str, width: usize) -> Result<Vec<(usize, Vec<i64>)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let nums = content
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| Error::Malformed { line, message: format!("expected an integer, found {t:?}") }))
            .collect::<Result<Vec<_>>>()?;
        if nums.len() != width {
            return Err(Error::Malformed { line, message: format!("expected {width} integers") });
        }
        out.push((line, nums));
    }
    Ok(out)
}

fn vertex(d: &Digraph, line: usize, x: i64) -> Result<usize> {
    usize::try_from(x).ok().filter(|&v| v < d.n()).ok_or(Error::VertexOutOfRange { line, vertex: x.max(0) as usize, n: d.n() })
}

/// Lines `v value`; unlisted vertices get `default`.
pub fn per_vertex(d: &Digraph, path: Option<&Path>, default: i64) -> Result<Vec<i64>> {
    let mut values = vec![default; d.n()];
    let Some(path) = path else { return Ok(values) };
    let mut seen = vec![false; d.n()];
    for (line, row) in rows(&read(path)?, 2)? {
        let v = vertex(d, line, row[0])?;
        if seen[v] {
            return Err(Error::Malformed { line, message: format!("vertex {v} listed twice") });
        }
        seen[v] = true;
        values[v] = row[1];
    }
    Ok(values)
}

/// Lines `s t`.
pub fn pairs(d: &Digraph, path: &Path) -> Result<Vec<(usize, usize)>> {
    rows(&read(path)?, 2)?.into_iter().map(|(line, row)| Ok((vertex(d, line, row[0])?, vertex(d, line, row[1])?))).collect()
}

/// Comma-separated vertex ids.
pub fn anchors(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidInstance(format!("bad anchor {t:?}"))))
        .collect()
}

/// `--tau` if given, else `fallback`; never above [`MAX_TAU`].
pub fn tau(given: Option<i64>, fallback: i64) -> Result<i64> {
    let tau = given.unwrap_or(fallback);
    if tau > MAX_TAU {
        return Err(Error::InvalidInstance(format!("tau {tau} exceeds 2^40")));
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_files() {
        let dir = std::env::temp_dir().join(format!("dmw-input-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let d: Digraph = "3\n0 1\n".parse().unwrap();
        let w = dir.join("w.txt");
        fs::write(&w, "# weights\n2 5\n\n0 -1\n").unwrap();
        assert_eq!(per_vertex(&d, Some(&w), 1).unwrap(), vec![-1, 1, 5]);
        fs::write(&w, "1 2\n1 3\n").unwrap();
        assert!(matches!(per_vertex(&d, Some(&w), 1), Err(Error::Malformed { line: 2, .. })));
        fs::write(&w, "0 7\n").unwrap();
        assert!(matches!(pairs(&d, &w), Err(Error::VertexOutOfRange { line: 1, vertex: 7, n: 3 })));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn anchors_and_tau() {
        assert_eq!(anchors("3, 0,2").unwrap(), vec![3, 0, 2]);
        assert!(anchors("1,x").is_err());
        assert_eq!(tau(None, 9).unwrap(), 9);
        assert_eq!(tau(Some(MAX_TAU), 9).unwrap(), MAX_TAU);
        assert!(tau(Some(MAX_TAU + 1), 9).is_err());
    }
}
