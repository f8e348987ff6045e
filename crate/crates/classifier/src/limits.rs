//! Colimits and limits of finite classification diagrams.
//!
//! Colimit: types are the disjoint union of node types modulo the equivalence
//! generated by `α ~ f(α)` along every edge; tokens are the families of node
//! tokens compatible with every token map. The limit is the dual
//! construction.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classification::Classification;
use crate::diagram::ClassifierDiagram;
use crate::error::ClassifierError;
use crate::infomorphism::{Arrow, Infomorphism};

/// Upper bound on the number of compatible families a construction may build.
pub const FAMILY_CAP: usize = 1_000_000;

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index stays the root so class order is stable
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Groups `(node, element)` pairs into classes. Returns the classes (each
/// sorted, ordered by smallest member) and the class of every pair.
fn quotient(
    counts: &[usize],
    edges: impl Iterator<Item = ((usize, usize), (usize, usize))>,
) -> (Vec<Vec<(usize, usize)>>, Vec<Vec<usize>>) {
    let offsets: Vec<usize> = counts
        .iter()
        .scan(0, |acc, &c| {
            let o = *acc;
            *acc += c;
            Some(o)
        })
        .collect();
    let total: usize = counts.iter().sum();
    let mut uf = UnionFind::new(total);
    for ((n1, x1), (n2, x2)) in edges {
        uf.union(offsets[n1] + x1, offsets[n2] + x2);
    }
    let mut root_to_class: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut class_of: Vec<Vec<usize>> = counts.iter().map(|&c| vec![0; c]).collect();
    for (node, &count) in counts.iter().enumerate() {
        for x in 0..count {
            let root = uf.find(offsets[node] + x);
            let next = classes.len();
            let cls = *root_to_class.entry(root).or_insert(next);
            if cls == classes.len() {
                classes.push(Vec::new());
            }
            classes[cls].push((node, x));
            class_of[node][x] = cls;
        }
    }
    (classes, class_of)
}

/// Depth-first enumeration of choice vectors `c[node] < sizes[node]` that
/// satisfy every `(a, b, map)` constraint `c[a] == map[c[b]]`.
fn compatible_families(
    sizes: &[usize],
    constraints: &[(usize, usize, &[usize])],
) -> Result<Vec<Vec<usize>>, ClassifierError> {
    let n = sizes.len();
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    // constraints become checkable once max(a, b) is assigned
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(a, b, _)) in constraints.iter().enumerate() {
        ready[a.max(b)].push(i);
    }
    fn go(
        depth: usize,
        sizes: &[usize],
        constraints: &[(usize, usize, &[usize])],
        ready: &[Vec<usize>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), ClassifierError> {
        if depth == sizes.len() {
            if out.len() >= FAMILY_CAP {
                return Err(ClassifierError::TooLarge {
                    what: "compatible families",
                    needed: FAMILY_CAP as u128 + 1,
                    cap: FAMILY_CAP as u128,
                });
            }
            out.push(cur.clone());
            return Ok(());
        }
        for v in 0..sizes[depth] {
            cur[depth] = v;
            let ok = ready[depth].iter().all(|&i| {
                let (a, b, map) = constraints[i];
                cur[a] == map[cur[b]]
            });
            if ok {
                go(depth + 1, sizes, constraints, ready, cur, out)?;
            }
        }
        Ok(())
    }
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    go(0, sizes, constraints, &ready, &mut cur, &mut out)?;
    Ok(out)
}

fn ensure_valid_edges(d: &ClassifierDiagram) -> Result<(), ClassifierError> {
    match d.first_invalid_edge() {
        Some((e, count)) => Err(ClassifierError::InvalidArrow {
            arrow: d.edge_label(e),
            count,
        }),
        None => Ok(()),
    }
}

fn class_name(d: &ClassifierDiagram, members: &[(usize, usize)], types: bool) -> String {
    members
        .iter()
        .map(|&(n, x)| {
            let node = &d.nodes()[n];
            let el = if types { &node.types()[x] } else { &node.tokens()[x] };
            format!("{}.{}", node.id(), el)
        })
        .collect::<Vec<_>>()
        .join("~")
}

fn family_name(d: &ClassifierDiagram, family: &[usize], types: bool) -> String {
    let parts: Vec<String> = family
        .iter()
        .enumerate()
        .map(|(n, &x)| {
            let node = &d.nodes()[n];
            let el = if types { &node.types()[x] } else { &node.tokens()[x] };
            format!("{}.{}", node.id(), el)
        })
        .collect();
    format!("({})", parts.join(","))
}

/// Why a candidate (co)cone has no mediating infomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MediationFailure {
    pub reason: String,
}

/// Result of checking the universal property against a battery of (co)cones.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct UniversalCheck {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl UniversalCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Canonical colimit together with its cocone `ι_i: A_i → colim`.
#[derive(Debug, Clone)]
pub struct Colimit {
    pub apex: Classification,
    pub legs: Vec<Infomorphism>,
    leg_arrows: Vec<Arrow>,
    class_of: Vec<Vec<usize>>,
    family_index: HashMap<Vec<usize>, usize>,
}

/// Canonical limit together with its cone `π_i: lim → A_i`.
#[derive(Debug, Clone)]
pub struct Limit {
    pub apex: Classification,
    pub legs: Vec<Infomorphism>,
    leg_arrows: Vec<Arrow>,
    class_of: Vec<Vec<usize>>,
    family_index: HashMap<Vec<usize>, usize>,
}

pub fn colimit(d: &ClassifierDiagram) -> Result<Colimit, ClassifierError> {
    colimit_named(d, "colim")
}

pub fn colimit_named(d: &ClassifierDiagram, id: &str) -> Result<Colimit, ClassifierError> {
    ensure_valid_edges(d)?;
    let nodes = d.nodes();
    let type_counts: Vec<usize> = nodes.iter().map(|n| n.type_count()).collect();
    let token_counts: Vec<usize> = nodes.iter().map(|n| n.token_count()).collect();
    let glue = (0..d.edges().len()).flat_map(|e| {
        let (s, t) = d.endpoints(e);
        d.arrow(e)
            .types
            .iter()
            .enumerate()
            .map(move |(a, &b)| ((s, a), (t, b)))
    });
    let (classes, class_of) = quotient(&type_counts, glue);
    let constraints: Vec<(usize, usize, &[usize])> = (0..d.edges().len())
        .map(|e| {
            let (s, t) = d.endpoints(e);
            (s, t, d.arrow(e).tokens.as_slice())
        })
        .collect();
    let families = compatible_families(&token_counts, &constraints)?;

    let incidence: Vec<Vec<bool>> = families
        .iter()
        .map(|fam| {
            classes
                .iter()
                .map(|members| {
                    let (n, ty) = members[0];
                    nodes[n].holds(fam[n], ty)
                })
                .collect()
        })
        .collect();
    let apex = Classification::new(
        id,
        families.iter().map(|f| family_name(d, f, false)).collect(),
        classes.iter().map(|m| class_name(d, m, true)).collect(),
        incidence,
    )?;
    let leg_arrows: Vec<Arrow> = (0..nodes.len())
        .map(|i| Arrow {
            types: class_of[i].clone(),
            tokens: families.iter().map(|f| f[i]).collect(),
        })
        .collect();
    let legs = leg_arrows
        .iter()
        .enumerate()
        .map(|(i, a)| a.to_infomorphism(Some(format!("iota_{}", nodes[i].id())), &nodes[i], &apex))
        .collect();
    let family_index = families.into_iter().enumerate().map(|(i, f)| (f, i)).collect();
    Ok(Colimit {
        apex,
        legs,
        leg_arrows,
        class_of,
        family_index,
    })
}

pub fn limit(d: &ClassifierDiagram) -> Result<Limit, ClassifierError> {
    limit_named(d, "lim")
}

pub fn limit_named(d: &ClassifierDiagram, id: &str) -> Result<Limit, ClassifierError> {
    ensure_valid_edges(d)?;
    let nodes = d.nodes();
    let type_counts: Vec<usize> = nodes.iter().map(|n| n.type_count()).collect();
    let token_counts: Vec<usize> = nodes.iter().map(|n| n.token_count()).collect();
    let glue = (0..d.edges().len()).flat_map(|e| {
        let (s, t) = d.endpoints(e);
        d.arrow(e)
            .tokens
            .iter()
            .enumerate()
            .map(move |(b, &a)| ((t, b), (s, a)))
    });
    let (classes, class_of) = quotient(&token_counts, glue);
    // type families: α_t == types_e[α_s]
    let constraints: Vec<(usize, usize, &[usize])> = (0..d.edges().len())
        .map(|e| {
            let (s, t) = d.endpoints(e);
            (t, s, d.arrow(e).types.as_slice())
        })
        .collect();
    let families = compatible_families(&type_counts, &constraints)?;

    let incidence: Vec<Vec<bool>> = classes
        .iter()
        .map(|members| {
            let (n, tok) = members[0];
            families.iter().map(|fam| nodes[n].holds(tok, fam[n])).collect()
        })
        .collect();
    let apex = Classification::new(
        id,
        classes.iter().map(|m| class_name(d, m, false)).collect(),
        families.iter().map(|f| family_name(d, f, true)).collect(),
        incidence,
    )?;
    let leg_arrows: Vec<Arrow> = (0..nodes.len())
        .map(|i| Arrow {
            types: families.iter().map(|f| f[i]).collect(),
            tokens: class_of[i].clone(),
        })
        .collect();
    let legs = leg_arrows
        .iter()
        .enumerate()
        .map(|(i, a)| a.to_infomorphism(Some(format!("pi_{}", nodes[i].id())), &apex, &nodes[i]))
        .collect();
    let family_index = families.into_iter().enumerate().map(|(i, f)| (f, i)).collect();
    Ok(Limit {
        apex,
        legs,
        leg_arrows,
        class_of,
        family_index,
    })
}

fn resolve_legs(
    d: &ClassifierDiagram,
    apex: &Classification,
    legs: &[Infomorphism],
    incoming: bool,
) -> Result<Vec<Arrow>, ClassifierError> {
    if legs.len() != d.nodes().len() {
        return Err(ClassifierError::Cccd(format!(
            "expected {} legs, found {}",
            d.nodes().len(),
            legs.len()
        )));
    }
    d.nodes()
        .iter()
        .zip(legs)
        .map(|(n, leg)| {
            if incoming {
                Arrow::resolve(leg, n, apex)
            } else {
                Arrow::resolve(leg, apex, n)
            }
        })
        .collect()
}

/// Legs `g_i: A_i → X` form a cocone when `g_t ∘ e = g_s` for every edge.
pub fn is_cocone(d: &ClassifierDiagram, apex: &Classification, legs: &[Infomorphism]) -> Result<bool, ClassifierError> {
    let arrows = resolve_legs(d, apex, legs, true)?;
    Ok(cocone_compatible(d, &arrows))
}

fn cocone_compatible(d: &ClassifierDiagram, legs: &[Arrow]) -> bool {
    (0..d.edges().len()).all(|e| {
        let (s, t) = d.endpoints(e);
        d.arrow(e).then(&legs[t]) == legs[s]
    })
}

/// Legs `h_i: X → A_i` form a cone when `e ∘ h_s = h_t` for every edge.
pub fn is_cone(d: &ClassifierDiagram, apex: &Classification, legs: &[Infomorphism]) -> Result<bool, ClassifierError> {
    let arrows = resolve_legs(d, apex, legs, false)?;
    Ok(cone_compatible(d, &arrows))
}

fn cone_compatible(d: &ClassifierDiagram, legs: &[Arrow]) -> bool {
    (0..d.edges().len()).all(|e| {
        let (s, t) = d.endpoints(e);
        legs[s].then(d.arrow(e)) == legs[t]
    })
}

impl Colimit {
    /// The unique `m: colim → X` with `m ∘ ι_i = g_i`, built from the forced
    /// values and then checked.
    pub fn mediate(
        &self,
        d: &ClassifierDiagram,
        x: &Classification,
        legs: &[Infomorphism],
    ) -> Result<Result<Infomorphism, MediationFailure>, ClassifierError> {
        let g = resolve_legs(d, x, legs, true)?;
        Ok(self.mediate_arrows(d, x, &g).map(|m| m.to_infomorphism(Some("mediator".into()), &self.apex, x)))
    }

    pub(crate) fn mediate_arrows(
        &self,
        d: &ClassifierDiagram,
        x: &Classification,
        g: &[Arrow],
    ) -> Result<Arrow, MediationFailure> {
        let mut types = vec![usize::MAX; self.apex.type_count()];
        for (i, gi) in g.iter().enumerate() {
            for (alpha, &img) in gi.types.iter().enumerate() {
                let cls = self.class_of[i][alpha];
                if types[cls] != usize::MAX && types[cls] != img {
                    return Err(MediationFailure {
                        reason: format!(
                            "type class `{}` is sent to both `{}` and `{}`",
                            self.apex.types()[cls],
                            x.types()[types[cls]],
                            x.types()[img]
                        ),
                    });
                }
                types[cls] = img;
            }
        }
        let mut tokens = Vec::with_capacity(x.token_count());
        for k in 0..x.token_count() {
            let family: Vec<usize> = g.iter().map(|gi| gi.tokens[k]).collect();
            match self.family_index.get(&family) {
                Some(&f) => tokens.push(f),
                None => {
                    return Err(MediationFailure {
                        reason: format!(
                            "token `{}` pulls back to an incompatible family {}",
                            x.tokens()[k],
                            family_name(d, &family, false)
                        ),
                    })
                }
            }
        }
        let m = Arrow { types, tokens };
        if !m.is_valid(&self.apex, x) {
            return Err(MediationFailure {
                reason: "mediating pair violates the fundamental property".into(),
            });
        }
        for (i, gi) in g.iter().enumerate() {
            if self.leg_arrows[i].then(&m) != *gi {
                return Err(MediationFailure {
                    reason: format!("mediator does not factor leg {}", d.nodes()[i].id()),
                });
            }
        }
        Ok(m)
    }

    /// Checks that every compatible cocone in `battery` factors through the
    /// colimit. Uniqueness is structural: every value of the mediator is
    /// forced by the legs.
    pub fn verify_universal(
        &self,
        d: &ClassifierDiagram,
        battery: &[(Classification, Vec<Infomorphism>)],
    ) -> Result<UniversalCheck, ClassifierError> {
        let mut check = UniversalCheck::default();
        for (x, legs) in battery {
            let g = resolve_legs(d, x, legs, true)?;
            if !cocone_compatible(d, &g) {
                continue;
            }
            check.checked += 1;
            if let Err(f) = self.mediate_arrows(d, x, &g) {
                check.failures.push(format!("into `{}`: {}", x.id(), f.reason));
            }
        }
        Ok(check)
    }
}

impl Limit {
    /// The unique `n: X → lim` with `π_i ∘ n = h_i`.
    pub fn mediate(
        &self,
        d: &ClassifierDiagram,
        x: &Classification,
        legs: &[Infomorphism],
    ) -> Result<Result<Infomorphism, MediationFailure>, ClassifierError> {
        let h = resolve_legs(d, x, legs, false)?;
        Ok(self.mediate_arrows(d, x, &h).map(|m| m.to_infomorphism(Some("mediator".into()), x, &self.apex)))
    }

    pub(crate) fn mediate_arrows(
        &self,
        d: &ClassifierDiagram,
        x: &Classification,
        h: &[Arrow],
    ) -> Result<Arrow, MediationFailure> {
        let mut types = Vec::with_capacity(x.type_count());
        for gamma in 0..x.type_count() {
            let family: Vec<usize> = h.iter().map(|hi| hi.types[gamma]).collect();
            match self.family_index.get(&family) {
                Some(&f) => types.push(f),
                None => {
                    return Err(MediationFailure {
                        reason: format!(
                            "type `{}` is sent to an incompatible family {}",
                            x.types()[gamma],
                            family_name(d, &family, true)
                        ),
                    })
                }
            }
        }
        let mut tokens = vec![usize::MAX; self.apex.token_count()];
        for (i, hi) in h.iter().enumerate() {
            for (a, &img) in hi.tokens.iter().enumerate() {
                let cls = self.class_of[i][a];
                if tokens[cls] != usize::MAX && tokens[cls] != img {
                    return Err(MediationFailure {
                        reason: format!(
                            "token class `{}` pulls back to both `{}` and `{}`",
                            self.apex.tokens()[cls],
                            x.tokens()[tokens[cls]],
                            x.tokens()[img]
                        ),
                    });
                }
                tokens[cls] = img;
            }
        }
        let n = Arrow { types, tokens };
        if !n.is_valid(x, &self.apex) {
            return Err(MediationFailure {
                reason: "mediating pair violates the fundamental property".into(),
            });
        }
        for (i, hi) in h.iter().enumerate() {
            if n.then(&self.leg_arrows[i]) != *hi {
                return Err(MediationFailure {
                    reason: format!("mediator does not factor leg {}", d.nodes()[i].id()),
                });
            }
        }
        Ok(n)
    }

    pub fn verify_universal(
        &self,
        d: &ClassifierDiagram,
        battery: &[(Classification, Vec<Infomorphism>)],
    ) -> Result<UniversalCheck, ClassifierError> {
        let mut check = UniversalCheck::default();
        for (x, legs) in battery {
            let h = resolve_legs(d, x, legs, false)?;
            if !cone_compatible(d, &h) {
                continue;
            }
            check.checked += 1;
            if let Err(f) = self.mediate_arrows(d, x, &h) {
                check.failures.push(format!("from `{}`: {}", x.id(), f.reason));
            }
        }
        Ok(check)
    }
}

/// Every compatible cocone from `d` into `x`, up to `max` of them.
pub fn cocones_into(
    d: &ClassifierDiagram,
    x: &Classification,
    max: usize,
) -> Result<Vec<Vec<Infomorphism>>, ClassifierError> {
    let per_node: Vec<Vec<Arrow>> = d
        .nodes()
        .iter()
        .map(|n| all_arrows(n, x))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    let mut cur: Vec<usize> = vec![0; per_node.len()];
    search_legs(d, &per_node, 0, &mut cur, &mut out, max, true);
    Ok(out
        .into_iter()
        .map(|choice| {
            choice
                .iter()
                .enumerate()
                .map(|(i, &c)| per_node[i][c].to_infomorphism(None, &d.nodes()[i], x))
                .collect()
        })
        .collect())
}

/// Every compatible cone from `x` into `d`, up to `max` of them.
pub fn cones_from(
    d: &ClassifierDiagram,
    x: &Classification,
    max: usize,
) -> Result<Vec<Vec<Infomorphism>>, ClassifierError> {
    let per_node: Vec<Vec<Arrow>> = d
        .nodes()
        .iter()
        .map(|n| all_arrows(x, n))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    let mut cur: Vec<usize> = vec![0; per_node.len()];
    search_legs(d, &per_node, 0, &mut cur, &mut out, max, false);
    Ok(out
        .into_iter()
        .map(|choice| {
            choice
                .iter()
                .enumerate()
                .map(|(i, &c)| per_node[i][c].to_infomorphism(None, x, &d.nodes()[i]))
                .collect()
        })
        .collect())
}

fn all_arrows(source: &Classification, target: &Classification) -> Result<Vec<Arrow>, ClassifierError> {
    let infos = crate::infomorphism::enumerate_infomorphisms(source, target, 1 << 22)?;
    Ok(infos
        .iter()
        .map(|f| Arrow::resolve(f, source, target).expect("enumerated arrows resolve"))
        .collect())
}

fn search_legs(
    d: &ClassifierDiagram,
    per_node: &[Vec<Arrow>],
    depth: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    max: usize,
    incoming: bool,
) {
    if out.len() >= max {
        return;
    }
    if depth == per_node.len() {
        out.push(cur.clone());
        return;
    }
    for c in 0..per_node[depth].len() {
        cur[depth] = c;
        let ok = (0..d.edges().len()).all(|e| {
            let (s, t) = d.endpoints(e);
            if s.max(t) != depth {
                return true;
            }
            let (ls, lt) = (&per_node[s][cur[s]], &per_node[t][cur[t]]);
            if incoming {
                d.arrow(e).then(lt) == *ls
            } else {
                ls.then(d.arrow(e)) == *lt
            }
        });
        if ok {
            search_legs(d, per_node, depth + 1, cur, out, max, incoming);
        }
    }
}
