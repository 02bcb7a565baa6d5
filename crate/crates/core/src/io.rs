//! Plain-text network and split-map files.
//!
//! ```text
//! directed n=4
//! 0,1,2.5
//! 3,3,-0.125
//! ```
//!
//! The header carries the kind token (`directed` or `undirected`) and the
//! vertex count. Each following line is one entry `i,j,w` with `w` written in
//! shortest round-trip decimal. Undirected files list each edge once with
//! `i < j`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::network::{DirectedNetwork, UndirectedNetwork};
use crate::transforms::SplitMap;

#[derive(Debug, Clone, PartialEq)]
pub enum NetworkFile {
    Directed(DirectedNetwork),
    Undirected(UndirectedNetwork),
}

impl NetworkFile {
    pub fn order(&self) -> usize {
        match self {
            NetworkFile::Directed(d) => d.order(),
            NetworkFile::Undirected(u) => u.order(),
        }
    }
}

pub fn format_directed(net: &DirectedNetwork) -> String {
    let mut s = format!("directed n={}\n", net.order());
    for e in net.entries() {
        let _ = writeln!(s, "{},{},{}", e.row, e.col, e.weight);
    }
    s
}

pub fn format_undirected(net: &UndirectedNetwork) -> String {
    let mut s = format!("undirected n={}\n", net.order());
    for e in net.edges() {
        let _ = writeln!(s, "{},{},{}", e.u, e.v, e.weight);
    }
    s
}

/// Parses network file contents; `origin` is only used in error messages.
pub fn parse_network(text: &str, origin: &Path) -> Result<NetworkFile> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header".into()))?;
    let mut directed = None;
    let mut n = None;
    for tok in header.split_whitespace() {
        match tok {
            "directed" => directed = Some(true),
            "undirected" => directed = Some(false),
            _ => match tok.strip_prefix("n=") {
                Some(v) => {
                    n = Some(
                        v.parse::<usize>()
                            .map_err(|e| parse_err(hline, format!("bad vertex count: {e}")))?,
                    )
                }
                None => return Err(parse_err(hline, format!("unexpected header token {tok:?}"))),
            },
        }
    }
    let directed = directed.ok_or_else(|| parse_err(hline, "missing directed/undirected".into()))?;
    let n = n.ok_or_else(|| parse_err(hline, "missing n=<int>".into()))?;

    let mut triples = Vec::new();
    for (k, line) in lines {
        let mut parts = line.split(',');
        let mut field = |name: &str| {
            parts
                .next()
                .map(str::trim)
                .ok_or_else(|| parse_err(k, format!("missing {name}")))
        };
        let i = field("row")?
            .parse::<usize>()
            .map_err(|e| parse_err(k, format!("bad row index: {e}")))?;
        let j = field("column")?
            .parse::<usize>()
            .map_err(|e| parse_err(k, format!("bad column index: {e}")))?;
        let w = field("weight")?
            .parse::<f64>()
            .map_err(|e| parse_err(k, format!("bad weight: {e}")))?;
        if parts.next().is_some() {
            return Err(parse_err(k, "too many fields".into()));
        }
        triples.push((i, j, w));
    }

    let wrap = |e: Error| match e {
        Error::Domain(msg) => parse_err(0, msg),
        other => other,
    };
    if directed {
        DirectedNetwork::new(n, triples)
            .map(NetworkFile::Directed)
            .map_err(wrap)
    } else {
        UndirectedNetwork::new(n, triples)
            .map(NetworkFile::Undirected)
            .map_err(wrap)
    }
}

pub fn read_network(path: impl AsRef<Path>) -> Result<NetworkFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_network(&text, path)
}

pub fn read_directed(path: impl AsRef<Path>) -> Result<DirectedNetwork> {
    let path = path.as_ref();
    match read_network(path)? {
        NetworkFile::Directed(d) => Ok(d),
        NetworkFile::Undirected(_) => Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: "expected a directed network".into(),
        }),
    }
}

pub fn write_directed(net: &DirectedNetwork, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_directed(net))
}

pub fn write_undirected(net: &UndirectedNetwork, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_undirected(net))
}

/// One line per original vertex: `orig,plus,minus`, with `-` for a side the
/// vertex does not have in the split network.
pub fn format_split_map(map: &SplitMap) -> String {
    let side = |s: Option<usize>| s.map_or_else(|| "-".to_string(), |v| v.to_string());
    let mut s = String::new();
    for (orig, ids) in map.iter() {
        let _ = writeln!(s, "{},{},{}", orig, side(ids.plus), side(ids.minus));
    }
    s
}

pub fn write_split_map(map: &SplitMap, path: impl AsRef<Path>) -> Result<()> {
    write_text(path.as_ref(), &format_split_map(map))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<NetworkFile> {
        parse_network(s, Path::new("<mem>"))
    }

    #[test]
    fn directed_round_trip_is_exact() {
        let net = DirectedNetwork::new(
            4,
            [(0, 1, 2.5), (3, 3, -0.1), (2, 0, 1.0 / 3.0), (1, 2, 1e-300)],
        )
        .unwrap();
        let text = format_directed(&net);
        assert!(text.starts_with("directed n=4\n"));
        assert_eq!(parse(&text).unwrap(), NetworkFile::Directed(net));
    }

    #[test]
    fn undirected_round_trip() {
        let net = UndirectedNetwork::new(3, [(2, 0, 7.0), (0, 1, 0.5)]).unwrap();
        let text = format_undirected(&net);
        assert_eq!(text, "undirected n=3\n0,1,0.5\n0,2,7\n");
        assert_eq!(parse(&text).unwrap(), NetworkFile::Undirected(net));
    }

    #[test]
    fn header_tokens_in_any_order() {
        let f = parse("n=2 directed\n0,1,1\n").unwrap();
        assert_eq!(f.order(), 2);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        for bad in [
            "",
            "directed\n",
            "n=3\n",
            "directed n=x\n",
            "directed n=2\n0,1\n",
            "directed n=2\n0,1,2,3\n",
            "directed n=2\n0,5,1\n",
            "directed n=2\n0,1,0\n",
            "sideways n=2\n",
        ] {
            assert!(
                matches!(parse(bad), Err(Error::Parse { .. })),
                "accepted {bad:?}"
            );
        }
    }
}
