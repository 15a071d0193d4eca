//! File formats: complexes, point clouds, covers, monomial sets,
//! stratification JSON and DOT export of the labeled Hasse diagram.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::geometry::{Cover, MonomialSet, PointCloud};
use crate::sheaf::DeltaMap;
use crate::space::{build_from_maximal_simplices, FiniteSpace, Subspace};
use crate::stratify::Stratification;

#[derive(Deserialize)]
struct ComplexDoc {
    maximal_simplices: Vec<Vec<u32>>,
}

/// `{"maximal_simplices": [[0,1,3], ...]}`, or plain text with one maximal
/// simplex per line. Blank lines and lines starting with `#` are skipped.
pub fn parse_complex(text: &str) -> Result<FiniteSpace> {
    let simplices = if text.trim_start().starts_with('{') {
        serde_json::from_str::<ComplexDoc>(text)?.maximal_simplices
    } else {
        text.lines()
            .enumerate()
            .map(|(n, l)| (n, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .map(|(n, l)| {
                l.split_whitespace()
                    .map(|v| {
                        v.parse::<u32>().map_err(|_| {
                            Error::MalformedInput(format!("line {}: bad vertex id '{v}'", n + 1))
                        })
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<_>>()?
    };
    if simplices.is_empty() {
        return Err(Error::MalformedInput("no simplices".into()));
    }
    build_from_maximal_simplices(simplices)
}

/// One point per row. A first row that does not parse as numbers is taken as
/// a header.
pub fn parse_points_csv(text: &str) -> Result<PointCloud> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::MalformedInput(format!("csv: {e}")))?;
        let row: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match row {
            Ok(p) => points.push(p),
            Err(_) if n == 0 => continue,
            Err(_) => {
                return Err(Error::MalformedInput(format!(
                    "csv row {}: non-numeric value",
                    n + 1
                )))
            }
        }
    }
    PointCloud::new(points)
}

/// `{"sets": {"U1": [0, 1, 2], ...}}`; set order is kept.
pub fn parse_cover(text: &str) -> Result<Cover> {
    let doc: Value = serde_json::from_str(text)?;
    let sets = doc
        .get("sets")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::MalformedInput("cover needs a \"sets\" object".into()))?;
    let named = sets
        .iter()
        .map(|(name, v)| {
            let idx: Vec<usize> = serde_json::from_value(v.clone()).map_err(|_| {
                Error::MalformedInput(format!("cover set '{name}' is not a list of indices"))
            })?;
            Ok((name.clone(), idx))
        })
        .collect::<Result<Vec<_>>>()?;
    if named.is_empty() {
        return Err(Error::MalformedInput("empty cover".into()));
    }
    Ok(Cover::new(named))
}

pub fn cover_to_json(cover: &Cover) -> Value {
    let mut sets = Map::new();
    for i in 0..cover.len() {
        sets.insert(cover.name(i).to_string(), Value::from(cover.set(i).to_vec()));
    }
    let mut doc = Map::new();
    doc.insert("sets".into(), Value::Object(sets));
    Value::Object(doc)
}

/// A JSON list of exponent vectors, e.g. `[[0,0],[1,0],[0,1]]`.
pub fn parse_monomials(text: &str) -> Result<MonomialSet> {
    MonomialSet::new(serde_json::from_str(text)?)
}

/// Serialized form of a stratification with its `δ` labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratificationDoc {
    pub filtration_dim: usize,
    /// From the top stratum down to `S_0`.
    pub strata: Vec<StratumDoc>,
    pub delta_edges: Vec<DeltaEdge>,
    /// Cover-set names for nerve vertices, when the space is a nerve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_names: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StratumDoc {
    pub dim: usize,
    /// Each piece lists its simplices.
    pub pieces: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaEdge {
    pub from: Vec<u32>,
    pub to: Vec<u32>,
    pub iso: bool,
}

fn simplex_of(space: &FiniteSpace, x: usize) -> Result<Vec<u32>> {
    space
        .label(x)
        .map(|s| s.vertices().to_vec())
        .ok_or_else(|| Error::Precondition("stratification JSON needs a face poset".into()))
}

fn element_of(space: &FiniteSpace, vertices: &[u32]) -> Result<usize> {
    let s = crate::space::Simplex::new(vertices.to_vec())?;
    space
        .index_of(&s)
        .ok_or_else(|| Error::MalformedInput(format!("{s} is not a simplex of the complex")))
}

impl StratificationDoc {
    pub fn new(space: &FiniteSpace, strat: &Stratification, dm: &DeltaMap) -> Result<Self> {
        let strata = (0..=strat.filtration_dim())
            .rev()
            .map(|i| {
                let pieces = strat
                    .pieces(i)
                    .iter()
                    .map(|p| p.iter().map(|x| simplex_of(space, x)).collect())
                    .collect::<Result<_>>()?;
                Ok(StratumDoc { dim: i, pieces })
            })
            .collect::<Result<_>>()?;
        let delta_edges = dm
            .edges()
            .map(|(x, y, iso)| {
                Ok(DeltaEdge {
                    from: simplex_of(space, x)?,
                    to: simplex_of(space, y)?,
                    iso,
                })
            })
            .collect::<Result<_>>()?;
        Ok(StratificationDoc {
            filtration_dim: strat.filtration_dim(),
            strata,
            delta_edges,
            vertex_names: None,
        })
    }

    pub fn with_vertex_names(mut self, names: Vec<String>) -> Self {
        self.vertex_names = Some(names);
        self
    }

    /// Rebuilds the stratification and the `δ` labels on `space`.
    pub fn load(&self, space: &FiniteSpace) -> Result<(Stratification, DeltaMap)> {
        let mut strata = vec![Subspace::empty(space.len()); self.filtration_dim + 1];
        for s in &self.strata {
            if s.dim > self.filtration_dim {
                return Err(Error::MalformedInput(format!(
                    "stratum dimension {} exceeds filtration dimension {}",
                    s.dim, self.filtration_dim
                )));
            }
            for x in s.pieces.iter().flatten() {
                strata[s.dim].insert(element_of(space, x)?);
            }
        }
        let strat = Stratification::from_strata(space, &strata)?;
        let mut labels = std::collections::BTreeMap::new();
        for e in &self.delta_edges {
            labels.insert((element_of(space, &e.from)?, element_of(space, &e.to)?), e.iso);
        }
        if labels.len() != space.covering_pairs().len()
            || space.covering_pairs().iter().any(|p| !labels.contains_key(p))
        {
            return Err(Error::MalformedInput(
                "delta_edges must list every covering pair exactly once".into(),
            ));
        }
        let dm = DeltaMap::from_fn(space, |x, y| labels[&(x, y)]);
        Ok((strat, dm))
    }

    /// Compact JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string(self)?;
        s.push('\n');
        Ok(s)
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram with `δ = 1` edges solid and `δ = 0` edges dashed. Node
/// labels show the element and the sheaf value summary. With
/// `vertex_names`, simplices are written in terms of those names.
pub fn to_dot(space: &FiniteSpace, dm: &DeltaMap, vertex_names: Option<&[String]>) -> String {
    let name = |x: usize| match (space.label(x), vertex_names) {
        (Some(s), Some(names)) => {
            let parts: Vec<&str> = s
                .vertices()
                .iter()
                .map(|&v| names.get(v as usize).map_or("?", String::as_str))
                .collect();
            format!("{{{}}}", parts.join(","))
        }
        _ => space.name(x),
    };
    let mut out = String::from("graph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
    for x in 0..space.len() {
        let summary = dm.summary(x);
        let label = if summary.is_empty() {
            name(x)
        } else {
            format!("{}\\n{}", name(x), summary)
        };
        let _ = writeln!(out, "  n{x} [label=\"{}\"];", dot_escape(&label).replace("\\\\n", "\\n"));
    }
    for (x, y, iso) in dm.edges() {
        let style = if iso { "solid" } else { "dashed" };
        let _ = writeln!(out, "  n{x} -- n{y} [style={style}];");
    }
    out.push_str("}\n");
    out
}
