//! Plain-text instance formats.
//!
//! All formats are whitespace separated, ignore blank lines, and treat
//! everything after `#` as a comment.
//!
//! * `edge_list_graph`: one `u v mean_latency` line per edge.
//! * `bipartite_graph`: `left right` edge lines, then a line `means`, then
//!   one `left value` line per left vertex.
//! * `feature_matrix`: header `L d`, then `L` rows of `d` integers.
//! * `reward_rows`: header `N L`, then `N` rows of `L` reals in `[0, 1]`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matroid::{Family, Matroid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceFormat {
    EdgeListGraph,
    BipartiteGraph,
    FeatureMatrix,
    RewardRows,
}

impl FromStr for InstanceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge_list_graph" => Ok(InstanceFormat::EdgeListGraph),
            "bipartite_graph" => Ok(InstanceFormat::BipartiteGraph),
            "feature_matrix" => Ok(InstanceFormat::FeatureMatrix),
            "reward_rows" => Ok(InstanceFormat::RewardRows),
            other => Err(Error::Domain(format!("unknown instance format `{other}`"))),
        }
    }
}

/// Environment data that accompanies a loaded instance.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvironmentData {
    /// Expected latency per item.
    Latencies(Vec<f64>),
    /// Success probability per item.
    Means(Vec<f64>),
    /// Reward rows for an empirical environment.
    Rows(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedInstance {
    pub matroid: Option<Matroid>,
    pub data: Option<EnvironmentData>,
}

pub fn load_instance(path: &Path, format: InstanceFormat) -> Result<LoadedInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance(&text, path, format)
}

/// Parses `text` as `format`; `path` only labels error messages.
pub fn parse_instance(text: &str, path: &Path, format: InstanceFormat) -> Result<LoadedInstance> {
    let p = Parser {
        path: path.to_path_buf(),
    };
    Ok(match format {
        InstanceFormat::EdgeListGraph => {
            let (m, lat) = p.edge_list(text)?;
            LoadedInstance {
                matroid: Some(m),
                data: Some(EnvironmentData::Latencies(lat)),
            }
        }
        InstanceFormat::BipartiteGraph => {
            let (m, means) = p.bipartite(text)?;
            LoadedInstance {
                matroid: Some(m),
                data: Some(EnvironmentData::Means(means)),
            }
        }
        InstanceFormat::FeatureMatrix => LoadedInstance {
            matroid: Some(p.feature_matrix(text)?),
            data: None,
        },
        InstanceFormat::RewardRows => LoadedInstance {
            matroid: None,
            data: Some(EnvironmentData::Rows(p.reward_rows(text)?)),
        },
    })
}

pub fn load_edge_list(path: &Path) -> Result<(Matroid, Vec<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Parser::at(path).edge_list(&text)
}

pub fn load_bipartite(path: &Path) -> Result<(Matroid, Vec<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Parser::at(path).bipartite(&text)
}

pub fn load_feature_matrix(path: &Path) -> Result<Matroid> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Parser::at(path).feature_matrix(&text)
}

pub fn load_reward_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Parser::at(path).reward_rows(&text)
}

struct Parser {
    path: PathBuf,
}

/// Non-empty lines with comments removed, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

impl Parser {
    fn at(path: &Path) -> Self {
        Parser {
            path: path.to_path_buf(),
        }
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn field<T: FromStr>(&self, line: usize, token: &str, what: &str) -> Result<T> {
        token
            .parse()
            .map_err(|_| self.err(line, format!("cannot parse {what} from `{token}`")))
    }

    fn arity(&self, line: usize, fields: &[&str], n: usize, shape: &str) -> Result<()> {
        if fields.len() != n {
            return Err(self.err(
                line,
                format!("expected `{shape}`, found {} fields", fields.len()),
            ));
        }
        Ok(())
    }

    fn edge_list(&self, text: &str) -> Result<(Matroid, Vec<f64>)> {
        let mut edges = Vec::new();
        let mut latencies = Vec::new();
        for (line, f) in content_lines(text) {
            self.arity(line, &f, 3, "u v mean_latency")?;
            let u: usize = self.field(line, f[0], "vertex")?;
            let v: usize = self.field(line, f[1], "vertex")?;
            let lat: f64 = self.field(line, f[2], "latency")?;
            if !lat.is_finite() || lat < 0.0 {
                return Err(self.err(
                    line,
                    format!("latency {lat} must be finite and non-negative"),
                ));
            }
            edges.push((u, v));
            latencies.push(lat);
        }
        let vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Ok((Matroid::graphic(vertices, edges)?, latencies))
    }

    fn bipartite(&self, text: &str) -> Result<(Matroid, Vec<f64>)> {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut means: Vec<(usize, usize, f64)> = Vec::new();
        let mut in_means = false;
        for (line, f) in content_lines(text) {
            if f.len() == 1 && f[0].eq_ignore_ascii_case("means") {
                if in_means {
                    return Err(self.err(line, "duplicate `means` section"));
                }
                in_means = true;
                continue;
            }
            if in_means {
                self.arity(line, &f, 2, "left value")?;
                let left: usize = self.field(line, f[0], "left vertex")?;
                let value: f64 = self.field(line, f[1], "mean")?;
                if !(0.0..=1.0).contains(&value) {
                    return Err(self.err(line, format!("mean {value} is outside [0, 1]")));
                }
                means.push((line, left, value));
            } else {
                self.arity(line, &f, 2, "left right")?;
                edges.push((
                    self.field(line, f[0], "left vertex")?,
                    self.field(line, f[1], "right vertex")?,
                ));
            }
        }
        if !in_means {
            return Err(self.err(text.lines().count().max(1), "missing `means` section"));
        }
        let left = edges
            .iter()
            .map(|&(l, _)| l + 1)
            .chain(means.iter().map(|&(_, l, _)| l + 1))
            .max()
            .unwrap_or(0);
        let right = edges.iter().map(|&(_, r)| r + 1).max().unwrap_or(0);
        let mut adjacency = vec![Vec::new(); left];
        for (l, r) in edges {
            if !adjacency[l].contains(&r) {
                adjacency[l].push(r);
            }
        }
        let mut values = vec![None; left];
        for (line, l, v) in means {
            if values[l].replace(v).is_some() {
                return Err(self.err(line, format!("left vertex {l} has more than one mean")));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(l, v)| {
                v.ok_or_else(|| {
                    Error::Domain(format!(
                        "{}: left vertex {l} has no mean (expected {left} means)",
                        self.path.display()
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((Matroid::transversal(right, adjacency)?, values))
    }

    fn header<'t>(
        &self,
        lines: &mut impl Iterator<Item = (usize, Vec<&'t str>)>,
        shape: &str,
    ) -> Result<(usize, usize)> {
        let Some((line, f)) = lines.next() else {
            return Err(self.err(1, format!("missing `{shape}` header")));
        };
        self.arity(line, &f, 2, shape)?;
        Ok((
            self.field(line, f[0], "count")?,
            self.field(line, f[1], "count")?,
        ))
    }

    fn feature_matrix(&self, text: &str) -> Result<Matroid> {
        let mut lines = content_lines(text);
        let (items, dimension) = self.header(&mut lines, "L d")?;
        let mut columns = Vec::with_capacity(items);
        for (line, f) in lines.by_ref() {
            if columns.len() == items {
                return Err(self.err(line, format!("more than the declared {items} rows")));
            }
            if f.len() != dimension {
                return Err(self.err(
                    line,
                    format!("row has {} entries, expected {dimension}", f.len()),
                ));
            }
            let col = f
                .iter()
                .map(|t| self.field::<i64>(line, t, "integer"))
                .collect::<Result<Vec<_>>>()?;
            columns.push(col);
        }
        if columns.len() != items {
            return Err(Error::Domain(format!(
                "{}: header declares {items} rows but {} were found",
                self.path.display(),
                columns.len()
            )));
        }
        Matroid::linear(dimension, columns)
    }

    fn reward_rows(&self, text: &str) -> Result<Vec<Vec<f64>>> {
        let mut lines = content_lines(text);
        let (n, items) = self.header(&mut lines, "N L")?;
        let mut rows = Vec::with_capacity(n);
        for (line, f) in lines.by_ref() {
            if rows.len() == n {
                return Err(self.err(line, format!("more than the declared {n} rows")));
            }
            if f.len() != items {
                return Err(self.err(
                    line,
                    format!("row has {} entries, expected {items}", f.len()),
                ));
            }
            let row = f
                .iter()
                .map(|t| {
                    let x: f64 = self.field(line, t, "reward")?;
                    if (0.0..=1.0).contains(&x) {
                        Ok(x)
                    } else {
                        Err(self.err(line, format!("reward {x} is outside [0, 1]")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Domain(format!(
                "{}: header declares {n} rows but {} were found",
                self.path.display(),
                rows.len()
            )));
        }
        Ok(rows)
    }
}

/// Serializes a graphic matroid and its latencies as an edge list.
pub fn format_edge_list(matroid: &Matroid, latencies: &[f64]) -> Result<String> {
    let Family::Graphic { edges, .. } = matroid.family() else {
        return Err(Error::Domain(
            "edge lists can only hold graphic matroids".into(),
        ));
    };
    let mut s = String::from("# u v mean_latency\n");
    for (&(u, v), lat) in edges.iter().zip(latencies) {
        writeln!(s, "{u} {v} {lat}").unwrap();
    }
    Ok(s)
}

pub fn format_bipartite(matroid: &Matroid, means: &[f64]) -> Result<String> {
    let Family::Transversal { adjacency, .. } = matroid.family() else {
        return Err(Error::Domain(
            "bipartite files can only hold transversal matroids".into(),
        ));
    };
    let mut s = String::from("# left right\n");
    for (l, adj) in adjacency.iter().enumerate() {
        for r in adj {
            writeln!(s, "{l} {r}").unwrap();
        }
    }
    s.push_str("means\n");
    for (l, m) in means.iter().enumerate() {
        writeln!(s, "{l} {m}").unwrap();
    }
    Ok(s)
}

pub fn format_feature_matrix(matroid: &Matroid) -> Result<String> {
    let Family::Linear { dimension, columns } = matroid.family() else {
        return Err(Error::Domain(
            "feature matrices can only hold linear matroids".into(),
        ));
    };
    let mut s = format!("{} {dimension}\n", columns.len());
    for c in columns {
        let row: Vec<String> = c.iter().map(i64::to_string).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    Ok(s)
}

pub fn format_reward_rows(rows: &[Vec<f64>]) -> String {
    let items = rows.first().map_or(0, Vec::len);
    let mut s = format!("{} {items}\n", rows.len());
    for r in rows {
        let row: Vec<String> = r.iter().map(f64::to_string).collect();
        writeln!(s, "{}", row.join(" ")).unwrap();
    }
    s
}
