//! Text and JSON serialisation of r-graphs.
//!
//! Text form: a header line `n r`, then one edge per line as ascending
//! space-separated vertex indices.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::RGraph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseFormat {
    Text,
    Json,
}

/// JSON shape `{ "n": .., "r": .., "edges": [[..], ..] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: u32,
    pub r: usize,
    pub edges: Vec<Vec<u32>>,
}

impl RGraph {
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(16 + self.edge_count() * self.r() * 4);
        writeln!(s, "{} {}", self.n(), self.r()).unwrap();
        for e in self.edges() {
            let mut first = true;
            for v in e {
                if !first {
                    s.push(' ');
                }
                first = false;
                write!(s, "{v}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<RGraph> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let head = parse_numbers(header, 1)?;
        let [n, r] = head[..] else {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be `n r`".into(),
            });
        };
        let mut edges = Vec::new();
        for (i, line) in lines {
            edges.push(parse_numbers(line, i + 1)?);
        }
        RGraph::new(n, r as usize, edges)
    }

    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            r: self.r(),
            edges: self.edges().iter().map(|e| e.to_vec()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<RGraph> {
        let g: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        RGraph::new(g.n, g.r, g.edges)
    }

    pub fn parse(text: &str, format: ParseFormat) -> Result<RGraph> {
        match format {
            ParseFormat::Text => RGraph::from_text(text),
            ParseFormat::Json => RGraph::from_json(text),
        }
    }
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("{tok:?}: {e}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{sample_hypergraph, SamplingMethod};
    use proptest::prelude::*;

    #[test]
    fn text_layout() {
        let g = RGraph::new(5, 3, [[2, 0, 1], [4, 3, 2]]).unwrap();
        assert_eq!(g.to_text(), "5 3\n0 1 2\n2 3 4\n");
        assert_eq!(g.to_json(), r#"{"n":5,"r":3,"edges":[[0,1,2],[2,3,4]]}"#);
    }

    #[test]
    fn parse_errors() {
        assert!(RGraph::from_text("").is_err());
        assert!(RGraph::from_text("5\n").is_err());
        assert!(RGraph::from_text("5 3\n0 1 x\n").is_err());
        assert!(RGraph::from_text("5 3\n0 1\n").is_err());
        assert!(RGraph::from_json("{\"n\":3}").is_err());
    }

    proptest! {
        #[test]
        fn roundtrips_are_bit_exact(n in 4u32..14, r in 2usize..5, p in 0.0f64..1.0, seed: u64) {
            prop_assume!(r as u32 <= n);
            let g = sample_hypergraph(n, r, p, seed, SamplingMethod::Auto).unwrap();
            let text = g.to_text();
            let back = RGraph::from_text(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.to_text(), text);
            let json = g.to_json();
            let back = RGraph::from_json(&json).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.to_json(), json);
        }
    }
}
