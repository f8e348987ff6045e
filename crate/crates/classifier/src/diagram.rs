//! Finite diagrams (quivers) of classifications and path commutativity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classification::Classification;
use crate::error::ClassifierError;
use crate::infomorphism::{Arrow, Infomorphism, ValidationReport};

/// Nodes are classifications; edges are infomorphisms between nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct ClassifierDiagram {
    nodes: Vec<Classification>,
    edges: Vec<Infomorphism>,
    endpoints: Vec<(usize, usize)>,
    arrows: Vec<Arrow>,
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    nodes: Vec<Classification>,
    edges: Vec<Infomorphism>,
}

impl TryFrom<DiagramRepr> for ClassifierDiagram {
    type Error = ClassifierError;
    fn try_from(r: DiagramRepr) -> Result<Self, Self::Error> {
        ClassifierDiagram::new(r.nodes, r.edges)
    }
}

impl From<ClassifierDiagram> for DiagramRepr {
    fn from(d: ClassifierDiagram) -> Self {
        DiagramRepr {
            nodes: d.nodes,
            edges: d.edges,
        }
    }
}

impl ClassifierDiagram {
    pub fn new(nodes: Vec<Classification>, edges: Vec<Infomorphism>) -> Result<Self, ClassifierError> {
        let mut index = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.id().to_string(), i).is_some() {
                return Err(ClassifierError::DuplicateNode(n.id().to_string()));
            }
        }
        let mut endpoints = Vec::with_capacity(edges.len());
        let mut arrows = Vec::with_capacity(edges.len());
        for e in &edges {
            let s = *index
                .get(&e.source)
                .ok_or_else(|| ClassifierError::UnknownNode(e.source.clone()))?;
            let t = *index
                .get(&e.target)
                .ok_or_else(|| ClassifierError::UnknownNode(e.target.clone()))?;
            arrows.push(Arrow::resolve(e, &nodes[s], &nodes[t])?);
            endpoints.push((s, t));
        }
        Ok(ClassifierDiagram {
            nodes,
            edges,
            endpoints,
            arrows,
        })
    }

    pub fn empty() -> Self {
        ClassifierDiagram::new(Vec::new(), Vec::new()).unwrap()
    }

    pub fn nodes(&self) -> &[Classification] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Infomorphism] {
        &self.edges
    }

    pub fn node(&self, id: &str) -> Option<&Classification> {
        self.nodes.iter().find(|n| n.id() == id)
    }

    pub fn node_position(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id() == id)
    }

    /// `(source, target)` node positions of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e]
    }

    pub(crate) fn arrow(&self, e: usize) -> &Arrow {
        &self.arrows[e]
    }

    /// Fundamental-property report for every edge, in edge order.
    pub fn validate_edges(&self) -> Vec<ValidationReport> {
        (0..self.edges.len())
            .map(|e| {
                let (s, t) = self.endpoints[e];
                self.arrows[e].validate(&self.nodes[s], &self.nodes[t])
            })
            .collect()
    }

    pub(crate) fn first_invalid_edge(&self) -> Option<(usize, usize)> {
        self.validate_edges()
            .iter()
            .enumerate()
            .find(|(_, r)| !r.is_ok())
            .map(|(e, r)| (e, r.violations.len()))
    }

    pub(crate) fn edge_label(&self, e: usize) -> String {
        match &self.edges[e].name {
            Some(n) => n.clone(),
            None => format!("{}->{}#{}", self.edges[e].source, self.edges[e].target, e),
        }
    }

    /// Composite of a non-empty edge path, `None` if the path is not connected.
    pub fn compose_path(&self, path: &[usize]) -> Option<Infomorphism> {
        let (first, rest) = path.split_first()?;
        let mut acc = self.arrows[*first].clone();
        let mut at = self.endpoints[*first].1;
        for &e in rest {
            let (s, t) = self.endpoints[e];
            if s != at {
                return None;
            }
            acc = acc.then(&self.arrows[e]);
            at = t;
        }
        let start = &self.nodes[self.endpoints[*first].0];
        Some(acc.to_infomorphism(None, start, &self.nodes[at]))
    }
}

/// The element on which two parallel composites disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum PathWitness {
    /// A source type sent to different target types.
    Type { name: String, left: String, right: String },
    /// A target token pulled back to different source tokens.
    Token { name: String, left: String, right: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub start: String,
    pub end: String,
    pub left_path: Vec<String>,
    pub right_path: Vec<String>,
    pub witness: PathWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutativityVerdict {
    pub commutes: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

/// Decides whether every pair of parallel directed paths of length
/// `0..=|edges|` has equal composites. The empty path at a node counts, so a
/// closed path must compose to the identity.
///
/// Paths are explored breadth-first per start node. A composite already seen
/// at the same endpoint is not extended again: any extension of it was
/// already reachable from a path at most as long, so the length cap is
/// respected exactly. The first disagreement found is the shortest one.
pub fn check_commutes(d: &ClassifierDiagram) -> CommutativityVerdict {
    let cap = d.edges.len();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); d.nodes.len()];
    for (e, &(s, _)) in d.endpoints.iter().enumerate() {
        out_edges[s].push(e);
    }
    for start in 0..d.nodes.len() {
        // end node -> (composite, path)
        // the empty path sits at the start, so closed paths are compared with the identity
        let mut seen: HashMap<usize, (Arrow, Vec<usize>)> = HashMap::new();
        seen.insert(start, (Arrow::identity(&d.nodes[start]), Vec::new()));
        let mut frontier: Vec<(usize, Arrow, Vec<usize>)> =
            vec![(start, Arrow::identity(&d.nodes[start]), Vec::new())];
        for _ in 0..cap {
            let mut next = Vec::new();
            for (at, comp, path) in &frontier {
                for &e in &out_edges[*at] {
                    let end = d.endpoints[e].1;
                    let c = comp.then(&d.arrows[e]);
                    let mut p = path.clone();
                    p.push(e);
                    match seen.get(&end) {
                        Some((prev, _)) if *prev == c => {}
                        Some((prev, prev_path)) => {
                            return CommutativityVerdict {
                                commutes: false,
                                counterexample: Some(counterexample(d, start, end, prev, prev_path, &c, &p)),
                            };
                        }
                        None => {
                            seen.insert(end, (c.clone(), p.clone()));
                            next.push((end, c, p));
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
    }
    CommutativityVerdict {
        commutes: true,
        counterexample: None,
    }
}

fn counterexample(
    d: &ClassifierDiagram,
    start: usize,
    end: usize,
    left: &Arrow,
    left_path: &[usize],
    right: &Arrow,
    right_path: &[usize],
) -> Counterexample {
    let s = &d.nodes[start];
    let t = &d.nodes[end];
    let witness = match (0..left.types.len()).find(|&i| left.types[i] != right.types[i]) {
        Some(i) => PathWitness::Type {
            name: s.types()[i].clone(),
            left: t.types()[left.types[i]].clone(),
            right: t.types()[right.types[i]].clone(),
        },
        None => {
            let k = (0..left.tokens.len())
                .find(|&k| left.tokens[k] != right.tokens[k])
                .expect("composites differ");
            PathWitness::Token {
                name: t.tokens()[k].clone(),
                left: s.tokens()[left.tokens[k]].clone(),
                right: s.tokens()[right.tokens[k]].clone(),
            }
        }
    };
    Counterexample {
        start: s.id().to_string(),
        end: t.id().to_string(),
        left_path: left_path.iter().map(|&e| d.edge_label(e)).collect(),
        right_path: right_path.iter().map(|&e| d.edge_label(e)).collect(),
        witness,
    }
}
