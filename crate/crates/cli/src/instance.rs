//! Instance files.
//!
//! TOML with a `format` of `explicit` or `mst` and an `agents` count.
//! Explicit games list costs under `[costs]`, keyed by sorted agent lists;
//! a top-level `default` covers every coalition not listed. MST games give
//! `edges` as `[i, j, weight]` triples with node 0 the supplier. Numbers are
//! integers or `"p/q"` strings.
//!
//! ```toml
//! format = "explicit"
//! agents = 3
//! default = 1
//!
//! [costs]
//! "1,2,3" = 2
//! ```

use std::collections::BTreeMap;

use almost_core::{rational, Coalition, Game, GraphInstance, Rational, ENUMERATION_LIMIT};
use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceKind {
    Explicit(Vec<Rational>),
    Mst(GraphInstance),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: Option<String>,
    pub n: usize,
    pub kind: InstanceKind,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn to_rational(&self) -> std::result::Result<Rational, String> {
        match self {
            Number::Int(v) => Ok(rational::int(*v)),
            Number::Text(s) => rational::parse(s).map_err(|e| e.to_string()),
        }
    }
}

type RawEdge = (usize, usize, Number);

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    format: Spanned<String>,
    agents: Spanned<usize>,
    name: Option<String>,
    default: Option<Spanned<Number>>,
    costs: Option<BTreeMap<Spanned<String>, Spanned<Number>>>,
    edges: Option<Spanned<Vec<Spanned<RawEdge>>>>,
}

#[derive(Serialize)]
struct NormalExplicit<'a> {
    format: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    agents: usize,
    costs: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct NormalMst<'a> {
    format: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
    agents: usize,
    edges: Vec<(usize, usize, String)>,
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn of<T>(&self, s: &Spanned<T>) -> Option<usize> {
        Some(self.0[..s.span().start].matches('\n').count() + 1)
    }
}

/// Parses a coalition key such as `"1,3"`; agents are 1-based and strictly
/// increasing.
pub fn parse_key(key: &str, n: usize) -> std::result::Result<Coalition, String> {
    let mut agents = Vec::new();
    for part in key.split(',') {
        let a: usize = part
            .parse()
            .map_err(|_| format!("coalition key \"{key}\": \"{part}\" is not an agent number"))?;
        if a == 0 || a > n {
            return Err(format!("coalition key \"{key}\": agent {a} outside 1..={n}"));
        }
        if agents.last().is_some_and(|&p| p >= a) {
            return Err(format!(
                "coalition key \"{key}\" is not sorted in strictly increasing order"
            ));
        }
        agents.push(a);
    }
    Coalition::from_agents(n, agents.into_iter().map(|a| a - 1)).map_err(|e| e.to_string())
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self> {
        let lines = Lines(text);
        let raw: RawInstance = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1);
            CliError::parse(line, e.message().to_string())
        })?;
        let n = *raw.agents.get_ref();
        if n == 0 {
            return Err(CliError::parse(lines.of(&raw.agents), "agents must be at least 1"));
        }
        if n > ENUMERATION_LIMIT {
            return Err(almost_core::Error::LimitExceeded {
                what: "instance file",
                n,
                limit: ENUMERATION_LIMIT,
            }
            .into());
        }
        let num = |v: &Spanned<Number>| {
            v.get_ref()
                .to_rational()
                .map_err(|m| CliError::parse(lines.of(v), m))
        };
        let kind = match raw.format.get_ref().as_str() {
            "explicit" => {
                if let Some(e) = &raw.edges {
                    return Err(CliError::parse(lines.of(e), "explicit instances take no edges"));
                }
                let default = raw.default.as_ref().map(num).transpose()?;
                let mut table: Vec<Option<Rational>> = vec![None; 1 << n];
                table[0] = Some(rational::int(0));
                for (key, value) in raw.costs.iter().flatten() {
                    let s = parse_key(key.get_ref(), n).map_err(|m| CliError::parse(lines.of(key), m))?;
                    let v = num(value)?;
                    if v < rational::int(0) {
                        return Err(CliError::parse(lines.of(value), format!("negative cost {v}")));
                    }
                    table[s.bits() as usize] = Some(v);
                }
                let mut out = Vec::with_capacity(table.len());
                for (bits, v) in table.into_iter().enumerate() {
                    match v.or_else(|| default.clone()) {
                        Some(v) => out.push(v),
                        None => {
                            let s = Coalition::new(bits as u64, n)?;
                            return Err(CliError::parse(
                                None,
                                format!("no cost for coalition \"{}\" and no default", s.to_key()),
                            ));
                        }
                    }
                }
                Game::explicit(n, out.clone()).map_err(|e| CliError::parse(None, e.to_string()))?;
                InstanceKind::Explicit(out)
            }
            "mst" => {
                if let Some((k, _)) = raw.costs.as_ref().and_then(|c| c.iter().next()) {
                    return Err(CliError::parse(lines.of(k), "mst instances take no costs"));
                }
                if let Some(d) = &raw.default {
                    return Err(CliError::parse(lines.of(d), "mst instances take no default"));
                }
                let Some(edges) = &raw.edges else {
                    return Err(CliError::parse(None, "mst instance without edges"));
                };
                let mut list = Vec::new();
                for e in edges.get_ref() {
                    let (i, j, w) = e.get_ref();
                    let w = w.to_rational().map_err(|m| CliError::parse(lines.of(e), m))?;
                    if *i > n || *j > n {
                        return Err(CliError::parse(
                            lines.of(e),
                            format!("edge ({i}, {j}) names a node outside 0..={n}"),
                        ));
                    }
                    list.push((*i, *j, w));
                }
                let g = GraphInstance::from_edges(n, &list)
                    .map_err(|err| CliError::parse(lines.of(edges), err.to_string()))?;
                InstanceKind::Mst(g)
            }
            other => {
                return Err(CliError::parse(
                    lines.of(&raw.format),
                    format!("unknown format \"{other}\", expected \"explicit\" or \"mst\""),
                ))
            }
        };
        Ok(Instance {
            name: raw.name,
            n,
            kind,
        })
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn format_name(&self) -> &'static str {
        match self.kind {
            InstanceKind::Explicit(_) => "explicit",
            InstanceKind::Mst(_) => "mst",
        }
    }

    pub fn game(&self) -> Result<Game> {
        Ok(match &self.kind {
            InstanceKind::Explicit(t) => Game::explicit(self.n, t.clone())?,
            InstanceKind::Mst(g) => Game::mst(g.clone()),
        })
    }

    pub fn graph(&self) -> Option<&GraphInstance> {
        match &self.kind {
            InstanceKind::Mst(g) => Some(g),
            InstanceKind::Explicit(_) => None,
        }
    }

    /// Explicit instance with the same costs, every coalition listed.
    pub fn from_table(name: Option<String>, n: usize, table: Vec<Rational>) -> Self {
        Instance {
            name,
            n,
            kind: InstanceKind::Explicit(table),
        }
    }

    /// Normalized form: every coalition or every edge listed, numbers as
    /// strings. Parsing the result gives back an equal instance.
    pub fn to_toml(&self) -> String {
        let name = self.name.as_deref();
        let out = match &self.kind {
            InstanceKind::Explicit(t) => toml::to_string(&NormalExplicit {
                format: "explicit",
                name,
                agents: self.n,
                costs: Coalition::nonempty(self.n)
                    .map(|s| (s.to_key(), t[s.bits() as usize].to_string()))
                    .collect(),
            }),
            InstanceKind::Mst(g) => toml::to_string(&NormalMst {
                format: "mst",
                name,
                agents: self.n,
                edges: g.edges().map(|(i, j, w)| (i, j, w.to_string())).collect(),
            }),
        };
        out.expect("normalized instances serialize")
    }
}
