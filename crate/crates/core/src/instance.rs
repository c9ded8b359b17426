//! Instance documents: a JSON file naming the elements (via the stream
//! order), the matroid constraints, and the objective.
//!
//! ```json
//! {
//!   "n": 3,
//!   "matroids": [{ "kind": "uniform", "rank": 1, "ground": ["a", "b", "c"] }],
//!   "objective": { "kind": "modular", "weights": { "a": 1.0, "b": 2.0 } },
//!   "order": ["c", "a", "b"]
//! }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matchoid::{vertex_matroids, PMatchoid};
use crate::matroids::{GraphicMatroid, MatroidOracle, PartitionMatroid, UniformMatroid};
use crate::model::{ArrivalStream, Universe};
use crate::objectives::{
    CoverageObjective, GraphCutObjective, LogDetObjective, ModularObjective, SubmodularOracle,
};

pub const CONSTRAINT_KINDS: [&str; 5] =
    ["uniform", "partition", "graphic", "b_matching", "matchoid"];
pub const OBJECTIVE_KINDS: [&str; 4] = ["coverage", "cut", "logdet", "modular"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub n: usize,
    #[serde(default)]
    pub matroids: Vec<ConstraintDescriptor>,
    pub objective: ObjectiveDescriptor,
    /// Element ids in arrival order.
    pub order: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintDescriptor {
    Uniform {
        rank: usize,
        ground: Vec<String>,
    },
    Partition {
        ground: Vec<String>,
        blocks: Vec<Vec<String>>,
        caps: Vec<usize>,
    },
    Graphic {
        ground: Vec<String>,
        /// Element id -> its two vertex labels.
        endpoints: BTreeMap<String, [String; 2]>,
    },
    BMatching {
        vertices: Vec<String>,
        edges: Vec<EdgeDescriptor>,
        b: Capacity,
    },
    Matchoid {
        matroids: Vec<ConstraintDescriptor>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDescriptor {
    pub id: String,
    pub u: String,
    pub v: String,
}

/// Either one capacity for every vertex or one per vertex label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Capacity {
    Uniform(usize),
    PerVertex(BTreeMap<String, usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveDescriptor {
    Coverage {
        /// Element id -> covered item labels.
        covers: BTreeMap<String, Vec<String>>,
        /// Item weights; unlisted items weigh 1.
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        weights: BTreeMap<String, f64>,
    },
    Cut {
        edges: Vec<CutEdge>,
    },
    Logdet {
        /// Row/column labels of `kernel`.
        ids: Vec<String>,
        /// Dense row-major kernel.
        kernel: Vec<Vec<f64>>,
    },
    Modular {
        /// Unlisted elements weigh 0.
        weights: BTreeMap<String, f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutEdge {
    pub u: String,
    pub v: String,
    #[serde(default = "unit_weight")]
    pub w: f64,
}

fn unit_weight() -> f64 {
    1.0
}

/// A loaded instance: oracles and stream ready to run.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    pub universe: Universe,
    pub stream: ArrivalStream,
    pub matchoid: PMatchoid,
    pub objective: Arc<dyn SubmodularOracle>,
}

impl Instance {
    /// Wraps in-memory oracles as an instance with anonymous element ids.
    pub fn from_parts(
        id: impl Into<String>,
        stream: ArrivalStream,
        matchoid: PMatchoid,
        objective: Arc<dyn SubmodularOracle>,
    ) -> Result<Self> {
        let n = stream.len();
        if matchoid.n() != n || objective.n() != n {
            return Err(Error::Validation(format!(
                "stream has {n} elements, matchoid {}, objective {}",
                matchoid.n(),
                objective.n()
            )));
        }
        Ok(Instance {
            id: id.into(),
            universe: Universe::anonymous(n),
            stream,
            matchoid,
            objective,
        })
    }

    pub fn n(&self) -> usize {
        self.universe.len()
    }

    pub fn ids_of(&self, elements: &[usize]) -> Vec<String> {
        elements
            .iter()
            .map(|&e| self.universe.id(e).to_string())
            .collect()
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn check_kind(value: &Value, allowed: &[&str], context: &str) -> Result<()> {
    if let Some(kind) = value.get("kind").and_then(Value::as_str) {
        if !allowed.contains(&kind) {
            return Err(Error::UnsupportedDescriptor {
                kind: kind.to_string(),
                context: context.to_string(),
            });
        }
        if kind == "matchoid" {
            for (i, inner) in value
                .get("matroids")
                .and_then(Value::as_array)
                .into_iter()
                .flatten()
                .enumerate()
            {
                check_kind(inner, allowed, &format!("{context}.matroids[{i}]"))?;
            }
        }
    }
    Ok(())
}

impl InstanceSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(parse_error)?;
        for (i, m) in value
            .get("matroids")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
            .enumerate()
        {
            check_kind(m, &CONSTRAINT_KINDS, &format!("matroids[{i}]"))?;
        }
        if let Some(obj) = value.get("objective") {
            check_kind(obj, &OBJECTIVE_KINDS, "objective")?;
        }
        serde_json::from_str(text).map_err(parse_error)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance specs always serialize")
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = self.to_json_string();
        text.push('\n');
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    /// Validates the document and builds the oracles.
    pub fn build(&self) -> Result<Instance> {
        if self.order.len() != self.n {
            return Err(Error::Validation(format!(
                "n = {} but the order lists {} ids",
                self.n,
                self.order.len()
            )));
        }
        let universe = Universe::new(self.order.iter().cloned())?;
        let sequence = self
            .order
            .iter()
            .map(|id| universe.require(id, "order"))
            .collect::<Result<Vec<_>>>()?;
        let stream = ArrivalStream::new(self.n, sequence)?;

        let mut matroids = Vec::new();
        for (i, d) in self.matroids.iter().enumerate() {
            build_constraint(d, &universe, &format!("matroids[{i}]"), &mut matroids)?;
        }
        let matchoid = PMatchoid::compose(matroids, self.n)?;
        let objective = build_objective(&self.objective, &universe)?;

        Ok(Instance {
            id: self
                .metadata
                .get("id")
                .cloned()
                .unwrap_or_else(|| "instance".to_string()),
            universe,
            stream,
            matchoid,
            objective,
        })
    }
}

/// Reads, validates and builds an instance file.
pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    InstanceSpec::from_path(path)?.build()
}

fn indices(universe: &Universe, ids: &[String], context: &str) -> Result<Vec<usize>> {
    ids.iter().map(|id| universe.require(id, context)).collect()
}

fn labels<'a>(names: impl IntoIterator<Item = &'a String>) -> BTreeMap<&'a str, usize> {
    let set: BTreeSet<&str> = names.into_iter().map(String::as_str).collect();
    set.into_iter().enumerate().map(|(i, s)| (s, i)).collect()
}

fn build_constraint(
    d: &ConstraintDescriptor,
    universe: &Universe,
    context: &str,
    out: &mut Vec<Arc<dyn MatroidOracle>>,
) -> Result<()> {
    match d {
        ConstraintDescriptor::Uniform { rank, ground } => {
            out.push(Arc::new(UniformMatroid::new(
                indices(universe, ground, context)?,
                *rank,
            )?));
        }
        ConstraintDescriptor::Partition {
            ground,
            blocks,
            caps,
        } => {
            let listed: BTreeSet<&String> = ground.iter().collect();
            let blocked: BTreeSet<&String> = blocks.iter().flatten().collect();
            if listed != blocked || listed.len() != ground.len() {
                return Err(Error::Validation(format!(
                    "{context}: partition blocks must cover the ground set exactly once"
                )));
            }
            let blocks = blocks
                .iter()
                .map(|b| indices(universe, b, context))
                .collect::<Result<Vec<_>>>()?;
            out.push(Arc::new(PartitionMatroid::new(blocks, caps.clone())?));
        }
        ConstraintDescriptor::Graphic { ground, endpoints } => {
            let listed: BTreeSet<&String> = ground.iter().collect();
            let described: BTreeSet<&String> = endpoints.keys().collect();
            if listed != described || listed.len() != ground.len() {
                return Err(Error::Validation(format!(
                    "{context}: graphic endpoints must describe every ground element exactly once"
                )));
            }
            let vertex = labels(endpoints.values().flatten());
            let edges = endpoints
                .iter()
                .map(|(id, [a, b])| {
                    universe
                        .require(id, context)
                        .map(|e| (e, (vertex[a.as_str()], vertex[b.as_str()])))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push(Arc::new(GraphicMatroid::new(edges)?));
        }
        ConstraintDescriptor::BMatching { vertices, edges, b } => {
            let vertex = labels(vertices);
            if vertex.len() != vertices.len() {
                return Err(Error::Validation(format!(
                    "{context}: duplicate vertex label"
                )));
            }
            let lookup = |name: &str| {
                vertex.get(name).copied().ok_or_else(|| {
                    Error::Validation(format!(
                        "{context}: edge endpoint `{name}` is not a listed vertex"
                    ))
                })
            };
            let labelled = edges
                .iter()
                .map(|e| {
                    Ok((
                        universe.require(&e.id, context)?,
                        lookup(&e.u)?,
                        lookup(&e.v)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            let caps = match b {
                Capacity::Uniform(c) => vec![*c; vertex.len()],
                Capacity::PerVertex(map) => {
                    if let Some(k) = map.keys().find(|k| !vertex.contains_key(k.as_str())) {
                        return Err(Error::Validation(format!(
                            "{context}: capacity for unknown vertex `{k}`"
                        )));
                    }
                    vertex
                        .keys()
                        .map(|v| {
                            map.get(*v).copied().ok_or_else(|| {
                                Error::Validation(format!(
                                    "{context}: vertex `{v}` has no capacity"
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            };
            out.extend(vertex_matroids(vertex.len(), &labelled, &caps)?);
        }
        ConstraintDescriptor::Matchoid { matroids } => {
            for (i, inner) in matroids.iter().enumerate() {
                build_constraint(inner, universe, &format!("{context}.matroids[{i}]"), out)?;
            }
        }
    }
    Ok(())
}

fn build_objective(
    d: &ObjectiveDescriptor,
    universe: &Universe,
) -> Result<Arc<dyn SubmodularOracle>> {
    let n = universe.len();
    Ok(match d {
        ObjectiveDescriptor::Coverage { covers, weights } => {
            let item = labels(covers.values().flatten().chain(weights.keys()));
            let mut sets = vec![Vec::new(); n];
            for (id, items) in covers {
                let e = universe.require(id, "objective.covers")?;
                sets[e] = items.iter().map(|i| item[i.as_str()]).collect();
                sets[e].sort_unstable();
                sets[e].dedup();
            }
            let w = item
                .keys()
                .map(|k| weights.get(*k).copied().unwrap_or(1.0))
                .collect();
            Arc::new(CoverageObjective::new(sets, w)?)
        }
        ObjectiveDescriptor::Cut { edges } => {
            let edges = edges
                .iter()
                .map(|e| {
                    Ok((
                        universe.require(&e.u, "objective.edges")?,
                        universe.require(&e.v, "objective.edges")?,
                        e.w,
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Arc::new(GraphCutObjective::new(n, &edges)?)
        }
        ObjectiveDescriptor::Logdet { ids, kernel } => {
            let rows = indices(universe, ids, "objective.ids")?;
            if rows.len() != n || rows.iter().collect::<BTreeSet<_>>().len() != n {
                return Err(Error::Validation(
                    "objective.ids must list every element exactly once".into(),
                ));
            }
            if kernel.len() != n || kernel.iter().any(|r| r.len() != n) {
                return Err(Error::Validation(format!(
                    "objective.kernel must be {n}×{n}"
                )));
            }
            let mut position = vec![0; n];
            rows.iter().enumerate().for_each(|(r, &e)| position[e] = r);
            let mut dense = vec![0.0; n * n];
            for a in 0..n {
                for b in 0..n {
                    dense[a * n + b] = kernel[position[a]][position[b]];
                }
            }
            Arc::new(LogDetObjective::new(n, dense)?)
        }
        ObjectiveDescriptor::Modular { weights } => {
            let mut w = vec![0.0; n];
            for (id, x) in weights {
                w[universe.require(id, "objective.weights")?] = *x;
            }
            Arc::new(ModularObjective::new(w)?)
        }
    })
}
