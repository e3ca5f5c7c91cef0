//! Graph text format:
//!
//! ```text
//! # comment
//! n 4
//! 0 1 +
//! 1 2 -
//! ```
//!
//! The first non-comment line declares the node count; each following line is
//! one arc `src dst sign` with sign `+` or `-`.

use std::path::Path;
use std::str::FromStr;

use super::{Sign, SignedArc, SignedDigraph};
use crate::error::{Error, Result};

pub fn parse_graph(text: &str) -> Result<SignedDigraph> {
    let mut n: Option<usize> = None;
    let mut arcs = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(n) = n else {
            match fields.as_slice() {
                ["n", count] => {
                    let count: usize = count
                        .parse()
                        .map_err(|_| err(format!("bad node count `{count}`")))?;
                    if count < super::MIN_NODES {
                        return Err(err(format!(
                            "node count {count} is below the minimum of {}",
                            super::MIN_NODES
                        )));
                    }
                    n = Some(count);
                    continue;
                }
                _ => return Err(err("expected header `n <count>`".into())),
            }
        };
        let [src, dst, sign] = fields.as_slice() else {
            return Err(err(format!("expected `src dst sign`, got `{line}`")));
        };
        let node = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| err(format!("bad node id `{s}`")))?;
            if v >= n {
                return Err(err(format!("node id {v} outside 0..{n}")));
            }
            Ok(v)
        };
        let (src, dst) = (node(src)?, node(dst)?);
        let sign = match *sign {
            "+" => Sign::Positive,
            "-" => Sign::Negative,
            other => return Err(err(format!("bad sign `{other}`, expected `+` or `-`"))),
        };
        if src == dst {
            return Err(err(format!("self-loop at node {src}")));
        }
        if let Some(prev) = seen.insert((src, dst), line_no) {
            return Err(err(format!(
                "arc ({src}, {dst}) already declared on line {prev}"
            )));
        }
        arcs.push(SignedArc::new(src, dst, sign));
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing header `n <count>`".into(),
    })?;
    SignedDigraph::new(n, arcs)
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<SignedDigraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graph(&text)
}

impl FromStr for SignedDigraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}
