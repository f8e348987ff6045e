//! Cone-cocone diagrams: a base diagram with a core that is at once the
//! colimit of the incoming arrows and the limit of the outgoing arrows.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classification::Classification;
use crate::diagram::{check_commutes, ClassifierDiagram, Counterexample};
use crate::error::ClassifierError;
use crate::infomorphism::{find_isomorphism_arrow, Arrow, Infomorphism};
use crate::limits::{colimit_named, limit_named};

/// A candidate cone-cocone diagram.
///
/// `incoming[i]` is an arrow from a base node into the core and `outgoing[i]`
/// an arrow from the core to a base node; every base node has exactly one of
/// each. Both lists may be in any order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CccdRepr", into = "CccdRepr")]
pub struct CccdCandidate {
    base: ClassifierDiagram,
    core: Classification,
    incoming: Vec<Infomorphism>,
    outgoing: Vec<Infomorphism>,
    /// Per base node: position in `incoming` / `outgoing`.
    in_of: Vec<usize>,
    out_of: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CccdRepr {
    base: ClassifierDiagram,
    core: Classification,
    incoming: Vec<Infomorphism>,
    outgoing: Vec<Infomorphism>,
}

impl TryFrom<CccdRepr> for CccdCandidate {
    type Error = ClassifierError;
    fn try_from(r: CccdRepr) -> Result<Self, Self::Error> {
        CccdCandidate::new(r.base, r.core, r.incoming, r.outgoing)
    }
}

impl From<CccdCandidate> for CccdRepr {
    fn from(c: CccdCandidate) -> Self {
        CccdRepr {
            base: c.base,
            core: c.core,
            incoming: c.incoming,
            outgoing: c.outgoing,
        }
    }
}

fn structural(msg: impl Into<String>) -> ClassifierError {
    ClassifierError::Cccd(msg.into())
}

impl CccdCandidate {
    pub fn new(
        base: ClassifierDiagram,
        core: Classification,
        incoming: Vec<Infomorphism>,
        outgoing: Vec<Infomorphism>,
    ) -> Result<Self, ClassifierError> {
        if base.node(core.id()).is_some() {
            return Err(structural(format!("core id `{}` clashes with a base node", core.id())));
        }
        let n = base.nodes().len();
        let mut in_of = vec![usize::MAX; n];
        for (k, f) in incoming.iter().enumerate() {
            if f.target != core.id() {
                return Err(structural(format!("incoming arrow `{}` does not end at the core", f.label())));
            }
            let i = base
                .node_position(&f.source)
                .ok_or_else(|| ClassifierError::UnknownNode(f.source.clone()))?;
            if in_of[i] != usize::MAX {
                return Err(structural(format!("base node `{}` has two incoming arrows", f.source)));
            }
            Arrow::resolve(f, &base.nodes()[i], &core)?;
            in_of[i] = k;
        }
        let mut out_of = vec![usize::MAX; n];
        for (k, h) in outgoing.iter().enumerate() {
            if h.source != core.id() {
                return Err(structural(format!("outgoing arrow `{}` does not start at the core", h.label())));
            }
            let i = base
                .node_position(&h.target)
                .ok_or_else(|| ClassifierError::UnknownNode(h.target.clone()))?;
            if out_of[i] != usize::MAX {
                return Err(structural(format!("base node `{}` has two outgoing arrows", h.target)));
            }
            Arrow::resolve(h, &core, &base.nodes()[i])?;
            out_of[i] = k;
        }
        for (i, node) in base.nodes().iter().enumerate() {
            if in_of[i] == usize::MAX {
                return Err(structural(format!("base node `{}` has no arrow into the core", node.id())));
            }
            if out_of[i] == usize::MAX {
                return Err(structural(format!("base node `{}` has no arrow from the core", node.id())));
            }
        }
        Ok(CccdCandidate {
            base,
            core,
            incoming,
            outgoing,
            in_of,
            out_of,
        })
    }

    /// Builds the canonical candidate over `base`: the core is the colimit
    /// with its cocone, and the outgoing arrows are the limit cone transported
    /// along the first isomorphism found between colimit and limit.
    pub fn from_base(base: ClassifierDiagram, core_id: &str) -> Result<Self, BuildError> {
        let colim = colimit_named(&base, core_id)?;
        let lim = limit_named(&base, "lim")?;
        let iso = find_isomorphism_arrow(&colim.apex, &lim.apex).ok_or_else(|| BuildError::NoSelfDualCore {
            colimit_types: colim.apex.type_count(),
            colimit_tokens: colim.apex.token_count(),
            limit_types: lim.apex.type_count(),
            limit_tokens: lim.apex.token_count(),
        })?;
        let outgoing = base
            .nodes()
            .iter()
            .zip(&lim.legs)
            .map(|(node, pi)| {
                let pi = Arrow::resolve(pi, &lim.apex, node).expect("limit legs resolve");
                iso.then(&pi)
                    .to_infomorphism(Some(format!("h_{}", node.id())), &colim.apex, node)
            })
            .collect();
        let incoming = colim
            .legs
            .iter()
            .zip(base.nodes())
            .map(|(f, node)| f.clone().with_name(format!("f_{}", node.id())))
            .collect();
        Ok(CccdCandidate::new(base, colim.apex, incoming, outgoing)?)
    }

    pub fn base(&self) -> &ClassifierDiagram {
        &self.base
    }

    pub fn core(&self) -> &Classification {
        &self.core
    }

    pub fn incoming(&self) -> &[Infomorphism] {
        &self.incoming
    }

    pub fn outgoing(&self) -> &[Infomorphism] {
        &self.outgoing
    }

    /// Incoming arrows ordered like the base nodes.
    pub fn incoming_by_node(&self) -> Vec<&Infomorphism> {
        self.in_of.iter().map(|&k| &self.incoming[k]).collect()
    }

    /// Outgoing arrows ordered like the base nodes.
    pub fn outgoing_by_node(&self) -> Vec<&Infomorphism> {
        self.out_of.iter().map(|&k| &self.outgoing[k]).collect()
    }

    /// The diagram as drawn: a source row of base nodes, the core, and a
    /// target row of base nodes. Base arrows appear in both rows; incoming
    /// arrows leave the source row and outgoing arrows enter the target row.
    pub fn unfolded(&self) -> ClassifierDiagram {
        let src = |id: &str| format!("in:{id}");
        let dst = |id: &str| format!("out:{id}");
        let mut nodes = Vec::new();
        for n in self.base.nodes() {
            nodes.push(n.renamed(src(n.id())));
        }
        nodes.push(self.core.clone());
        for n in self.base.nodes() {
            nodes.push(n.renamed(dst(n.id())));
        }
        let mut edges = Vec::new();
        for (row, rename) in [("in", &src as &dyn Fn(&str) -> String), ("out", &dst)] {
            for (e, g) in self.base.edges().iter().enumerate() {
                let mut g = g.clone();
                g.name = Some(format!(
                    "{row}:{}",
                    g.name.clone().unwrap_or_else(|| format!("{}->{}#{e}", g.source, g.target))
                ));
                g.source = rename(&g.source);
                g.target = rename(&g.target);
                edges.push(g);
            }
        }
        for f in &self.incoming {
            let mut f = f.clone();
            f.name = Some(f.label());
            f.source = src(&f.source);
            edges.push(f);
        }
        for h in &self.outgoing {
            let mut h = h.clone();
            h.name = Some(h.label());
            h.target = dst(&h.target);
            edges.push(h);
        }
        ClassifierDiagram::new(nodes, edges).expect("unfolding preserves structure")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Structural(#[from] ClassifierError),
    #[error(
        "colimit ({colimit_types} types, {colimit_tokens} tokens) and limit ({limit_types} types, {limit_tokens} tokens) are not isomorphic"
    )]
    NoSelfDualCore {
        colimit_types: usize,
        colimit_tokens: usize,
        limit_types: usize,
        limit_tokens: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum CccdWitness {
    InvalidArrow { arrow: String, violations: usize },
    Noncommutative(Counterexample),
    NotColimit { reason: String },
    NotLimit { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CccdReport {
    pub verdict: bool,
    pub commutes: bool,
    pub core_is_colimit: bool,
    pub core_is_limit: bool,
    /// First failure found, checked in the order arrows, commutativity,
    /// colimit, limit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<CccdWitness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<CccdWitness>,
}

pub fn verify_cccd(c: &CccdCandidate) -> CccdReport {
    let mut failures = Vec::new();

    let unfolded = c.unfolded();
    for (e, r) in unfolded.validate_edges().iter().enumerate() {
        if !r.is_ok() {
            failures.push(CccdWitness::InvalidArrow {
                arrow: unfolded.edges()[e].label(),
                violations: r.violations.len(),
            });
        }
    }
    let arrows_ok = failures.is_empty();

    let verdict = check_commutes(&unfolded);
    if let Some(cx) = verdict.counterexample {
        failures.push(CccdWitness::Noncommutative(cx));
    }

    let core_is_colimit = match core_as_colimit(c) {
        Ok(()) => true,
        Err(reason) => {
            failures.push(CccdWitness::NotColimit { reason });
            false
        }
    };
    let core_is_limit = match core_as_limit(c) {
        Ok(()) => true,
        Err(reason) => {
            failures.push(CccdWitness::NotLimit { reason });
            false
        }
    };
    CccdReport {
        verdict: arrows_ok && verdict.commutes && core_is_colimit && core_is_limit,
        commutes: verdict.commutes,
        core_is_colimit,
        core_is_limit,
        witness: failures.first().cloned(),
        failures,
    }
}

fn core_as_colimit(c: &CccdCandidate) -> Result<(), String> {
    let colim = colimit_named(&c.base, "colim").map_err(|e| e.to_string())?;
    let legs: Vec<Arrow> = c
        .incoming_by_node()
        .into_iter()
        .zip(c.base.nodes())
        .map(|(f, n)| Arrow::resolve(f, n, &c.core).expect("checked at construction"))
        .collect();
    let m = colim.mediate_arrows(&c.base, &c.core, &legs).map_err(|f| f.reason)?;
    if !m.is_bijective() {
        return Err(format!(
            "mediating map from the canonical colimit ({} types, {} tokens) is not bijective",
            colim.apex.type_count(),
            colim.apex.token_count()
        ));
    }
    Ok(())
}

fn core_as_limit(c: &CccdCandidate) -> Result<(), String> {
    let lim = limit_named(&c.base, "lim").map_err(|e| e.to_string())?;
    let legs: Vec<Arrow> = c
        .outgoing_by_node()
        .into_iter()
        .zip(c.base.nodes())
        .map(|(h, n)| Arrow::resolve(h, &c.core, n).expect("checked at construction"))
        .collect();
    let m = lim.mediate_arrows(&c.base, &c.core, &legs).map_err(|f| f.reason)?;
    if !m.is_bijective() {
        return Err(format!(
            "mediating map into the canonical limit ({} types, {} tokens) is not bijective",
            lim.apex.type_count(),
            lim.apex.token_count()
        ));
    }
    Ok(())
}

/// Why two cone-cocone diagrams have no common core.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum NonCodeployable {
    Noncommutative(Counterexample),
    NoCommonCore {
        colimit_types: usize,
        colimit_tokens: usize,
        limit_types: usize,
        limit_tokens: usize,
    },
    Unverified(CccdReport),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MergeError {
    #[error(transparent)]
    Structural(#[from] ClassifierError),
    #[error("input candidate {which} does not verify")]
    InputNotVerified { which: usize, report: Box<CccdReport> },
    #[error("non-codeployable: {0:?}")]
    NonCodeployable(NonCodeployable),
}

/// Joins the bases of two verified candidates (nodes with equal ids are
/// shared and must be identical) and builds a common core over the combined
/// base.
pub fn merge_cores(c1: &CccdCandidate, c2: &CccdCandidate) -> Result<CccdCandidate, MergeError> {
    for (which, c) in [(1, c1), (2, c2)] {
        let r = verify_cccd(c);
        if !r.verdict {
            return Err(MergeError::InputNotVerified {
                which,
                report: Box::new(r),
            });
        }
    }
    let combined = combined_base(c1.base(), c2.base())?;
    if let Some(cx) = check_commutes(&combined).counterexample {
        return Err(MergeError::NonCodeployable(NonCodeployable::Noncommutative(cx)));
    }
    let mut core_id = format!("{}+{}", c1.core.id(), c2.core.id());
    while combined.node(&core_id).is_some() {
        core_id.push('\'');
    }
    let merged = match CccdCandidate::from_base(combined, &core_id) {
        Ok(m) => m,
        Err(BuildError::Structural(e)) => return Err(e.into()),
        Err(BuildError::NoSelfDualCore {
            colimit_types,
            colimit_tokens,
            limit_types,
            limit_tokens,
        }) => {
            return Err(MergeError::NonCodeployable(NonCodeployable::NoCommonCore {
                colimit_types,
                colimit_tokens,
                limit_types,
                limit_tokens,
            }))
        }
    };
    let report = verify_cccd(&merged);
    if !report.verdict {
        return Err(MergeError::NonCodeployable(NonCodeployable::Unverified(report)));
    }
    Ok(merged)
}

/// Union of two bases: nodes by id (equal ids must carry equal content),
/// edges deduplicated by endpoints and maps.
pub fn combined_base(a: &ClassifierDiagram, b: &ClassifierDiagram) -> Result<ClassifierDiagram, ClassifierError> {
    let mut nodes: Vec<Classification> = a.nodes().to_vec();
    for n in b.nodes() {
        match a.node(n.id()) {
            Some(existing) if existing == n => {}
            Some(_) => return Err(ClassifierError::DuplicateNode(n.id().to_string())),
            None => nodes.push(n.clone()),
        }
    }
    let mut edges: Vec<Infomorphism> = a.edges().to_vec();
    for e in b.edges() {
        let dup = edges.iter().any(|x| {
            x.source == e.source && x.target == e.target && x.type_map == e.type_map && x.token_map == e.token_map
        });
        if !dup {
            edges.push(e.clone());
        }
    }
    ClassifierDiagram::new(nodes, edges)
}
