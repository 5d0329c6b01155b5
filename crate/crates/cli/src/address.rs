//! Graph addresses: `named:<key>:<p1>:<p2>...`, `g6:<literal>`, `file:<path>`
//! (`file:-` reads standard input).

use std::io::Read;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use sidokit::construct::named;
use sidokit::graph6::{parse_graph6_lines, Graph6Line};
use sidokit::verify::{graph_from_literal, read_single_graph6, CorpusItem, Source};
use sidokit::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Address {
    Named { key: String, params: Vec<usize> },
    Graph6(String),
    File(PathBuf),
    Stdin,
}

impl std::str::FromStr for Address {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| anyhow!("graph address {s:?} needs a named:, g6: or file: prefix"))?;
        match kind {
            "named" => {
                let mut parts = rest.split(':');
                let key = parts.next().filter(|k| !k.is_empty()).ok_or_else(|| anyhow!("missing graph name in {s:?}"))?;
                let params = parts
                    .map(|p| p.parse::<usize>().with_context(|| format!("bad parameter {p:?} in {s:?}")))
                    .collect::<Result<_>>()?;
                Ok(Address::Named {
                    key: key.to_string(),
                    params,
                })
            }
            "g6" => Ok(Address::Graph6(rest.to_string())),
            "file" if rest == "-" => Ok(Address::Stdin),
            "file" if !rest.is_empty() => Ok(Address::File(rest.into())),
            _ => bail!("unrecognised graph address {s:?}"),
        }
    }
}

impl std::fmt::Display for Address {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Address::Named { key, params } => {
                write!(f, "named:{key}")?;
                params.iter().try_for_each(|p| write!(f, ":{p}"))
            }
            Address::Graph6(text) => write!(f, "g6:{text}"),
            Address::File(path) => write!(f, "file:{}", path.display()),
            Address::Stdin => f.write_str("file:-"),
        }
    }
}

fn read_stdin() -> Result<String> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
    Ok(text)
}

impl Address {
    pub fn named(words: &[String]) -> Result<Self> {
        let (key, params) = words.split_first().ok_or_else(|| anyhow!("--named needs a graph name"))?;
        let params = params
            .iter()
            .map(|p| p.parse::<usize>().with_context(|| format!("bad parameter {p:?} for {key}")))
            .collect::<Result<_>>()?;
        Ok(Address::Named {
            key: key.clone(),
            params,
        })
    }

    /// Resolves to exactly one graph.
    pub fn load(&self) -> Result<Graph> {
        match self {
            Address::Named { key, params } => Ok(named(key, params)?),
            Address::Graph6(text) => Ok(graph_from_literal(text)?),
            Address::File(path) => Ok(read_single_graph6(path)?),
            Address::Stdin => {
                let lines = parse_graph6_lines(&read_stdin()?);
                match <[Graph6Line; 1]>::try_from(lines) {
                    Ok([line]) => line.result.map_err(|e| anyhow!("stdin:{}: {e}", line.line)),
                    Err(lines) => bail!("standard input holds {} graphs, expected one", lines.len()),
                }
            }
        }
    }

    /// Resolves to a corpus: every line of a file, or a single graph.
    pub fn source(&self) -> Result<Source> {
        Ok(match self {
            Address::Named { key, params } => Source::Named {
                key: key.clone(),
                params: params.clone(),
            },
            Address::Graph6(text) => Source::Items(vec![CorpusItem {
                id: format!("g6:{text}"),
                graph: graph_from_literal(text).map_err(|e| e.to_string()),
            }]),
            Address::File(path) => Source::Graph6File(path.clone()),
            Address::Stdin => Source::Items(
                parse_graph6_lines(&read_stdin()?)
                    .into_iter()
                    .map(|l| CorpusItem {
                        id: format!("stdin:{}", l.line),
                        graph: l.result.map_err(|e| e.to_string()),
                    })
                    .collect(),
            ),
        })
    }
}
