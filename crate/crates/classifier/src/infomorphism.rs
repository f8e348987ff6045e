//! Infomorphisms: types forward, tokens backward.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classification::Classification;
use crate::error::ClassifierError;

/// A contravariant pair of maps `f: A ⇄ B`.
///
/// `type_map` sends `Typ(A) → Typ(B)` and `token_map` sends `Tok(B) → Tok(A)`.
/// The endpoints are referenced by classification id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Infomorphism {
    #[serde(rename = "id", default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: String,
    pub target: String,
    #[serde(rename = "typeMap")]
    pub type_map: BTreeMap<String, String>,
    #[serde(rename = "tokenMap")]
    pub token_map: BTreeMap<String, String>,
}

/// A pair where the fundamental property fails:
/// `tokenMap(token) ⊨ ty` disagrees with `token ⊨ typeMap(ty)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyViolation {
    /// Token of the target classification.
    pub token: String,
    /// Type of the source classification.
    #[serde(rename = "type")]
    pub ty: String,
    pub pulled_back_holds: bool,
    pub pushed_forward_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<PropertyViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Infomorphism {
    pub fn identity(c: &Classification) -> Infomorphism {
        Infomorphism {
            name: Some(format!("id_{}", c.id())),
            source: c.id().to_string(),
            target: c.id().to_string(),
            type_map: c.types().iter().map(|t| (t.clone(), t.clone())).collect(),
            token_map: c.tokens().iter().map(|t| (t.clone(), t.clone())).collect(),
        }
    }

    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!("{}->{}", self.source, self.target),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Inverse of an infomorphism whose maps are both bijective.
    pub fn inverse(&self) -> Option<Infomorphism> {
        let type_map: BTreeMap<_, _> = self
            .type_map
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        let token_map: BTreeMap<_, _> = self
            .token_map
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        if type_map.len() != self.type_map.len() || token_map.len() != self.token_map.len() {
            return None;
        }
        Some(Infomorphism {
            name: self.name.as_ref().map(|n| format!("{n}^-1")),
            source: self.target.clone(),
            target: self.source.clone(),
            type_map,
            token_map,
        })
    }
}

/// Checks the fundamental property at every `(b, α)` pair.
///
/// Dangling or missing identifiers are structural errors, distinct from
/// property violations.
pub fn validate_infomorphism(
    f: &Infomorphism,
    source: &Classification,
    target: &Classification,
) -> Result<ValidationReport, ClassifierError> {
    let arrow = Arrow::resolve(f, source, target)?;
    Ok(arrow.validate(source, target))
}

/// `compose(f, g)` is "first `f`, then `g`".
pub fn compose(f: &Infomorphism, g: &Infomorphism) -> Result<Infomorphism, ClassifierError> {
    if f.target != g.source {
        return Err(ClassifierError::EndpointMismatch {
            arrow: g.label(),
            expected: f.target.clone(),
            found: g.source.clone(),
        });
    }
    let mut type_map = BTreeMap::new();
    for (a, b) in &f.type_map {
        let c = g.type_map.get(b).ok_or_else(|| ClassifierError::Dangling {
            arrow: g.label(),
            name: b.clone(),
            side: "typeMap domain",
        })?;
        type_map.insert(a.clone(), c.clone());
    }
    let mut token_map = BTreeMap::new();
    for (c, b) in &g.token_map {
        let a = f.token_map.get(b).ok_or_else(|| ClassifierError::Dangling {
            arrow: f.label(),
            name: b.clone(),
            side: "tokenMap domain",
        })?;
        token_map.insert(c.clone(), a.clone());
    }
    Ok(Infomorphism {
        name: Some(format!("{};{}", f.label(), g.label())),
        source: f.source.clone(),
        target: g.target.clone(),
        type_map,
        token_map,
    })
}

/// Index-level form of an infomorphism between two known classifications.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Arrow {
    /// Source type position → target type position.
    pub types: Vec<usize>,
    /// Target token position → source token position.
    pub tokens: Vec<usize>,
}

impl Arrow {
    pub fn resolve(
        f: &Infomorphism,
        source: &Classification,
        target: &Classification,
    ) -> Result<Arrow, ClassifierError> {
        for (expected, found) in [(source.id(), &f.source), (target.id(), &f.target)] {
            if expected != found {
                return Err(ClassifierError::EndpointMismatch {
                    arrow: f.label(),
                    expected: expected.to_string(),
                    found: found.clone(),
                });
            }
        }
        let dangling = |name: &String, side| ClassifierError::Dangling {
            arrow: f.label(),
            name: name.clone(),
            side,
        };
        for (a, b) in &f.type_map {
            source
                .type_position(a)
                .ok_or_else(|| dangling(a, "typeMap domain"))?;
            target
                .type_position(b)
                .ok_or_else(|| dangling(b, "typeMap codomain"))?;
        }
        for (b, a) in &f.token_map {
            target
                .token_position(b)
                .ok_or_else(|| dangling(b, "tokenMap domain"))?;
            source
                .token_position(a)
                .ok_or_else(|| dangling(a, "tokenMap codomain"))?;
        }
        let types = source
            .types()
            .iter()
            .map(|t| {
                f.type_map
                    .get(t)
                    .map(|img| target.type_position(img).unwrap())
                    .ok_or_else(|| ClassifierError::PartialTypeMap {
                        arrow: f.label(),
                        name: t.clone(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let tokens = target
            .tokens()
            .iter()
            .map(|t| {
                f.token_map
                    .get(t)
                    .map(|img| source.token_position(img).unwrap())
                    .ok_or_else(|| ClassifierError::PartialTokenMap {
                        arrow: f.label(),
                        name: t.clone(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arrow { types, tokens })
    }

    pub fn identity(c: &Classification) -> Arrow {
        Arrow {
            types: (0..c.type_count()).collect(),
            tokens: (0..c.token_count()).collect(),
        }
    }

    /// First `self`, then `next`.
    pub fn then(&self, next: &Arrow) -> Arrow {
        Arrow {
            types: self.types.iter().map(|&t| next.types[t]).collect(),
            tokens: next.tokens.iter().map(|&k| self.tokens[k]).collect(),
        }
    }

    pub fn validate(&self, source: &Classification, target: &Classification) -> ValidationReport {
        let mut violations = Vec::new();
        for (b, &a) in self.tokens.iter().enumerate() {
            for (alpha, &beta) in self.types.iter().enumerate() {
                let back = source.holds(a, alpha);
                let fwd = target.holds(b, beta);
                if back != fwd {
                    violations.push(PropertyViolation {
                        token: target.tokens()[b].clone(),
                        ty: source.types()[alpha].clone(),
                        pulled_back_holds: back,
                        pushed_forward_holds: fwd,
                    });
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn is_valid(&self, source: &Classification, target: &Classification) -> bool {
        self.tokens.iter().enumerate().all(|(b, &a)| {
            self.types
                .iter()
                .enumerate()
                .all(|(alpha, &beta)| source.holds(a, alpha) == target.holds(b, beta))
        })
    }

    pub fn to_infomorphism(
        &self,
        name: Option<String>,
        source: &Classification,
        target: &Classification,
    ) -> Infomorphism {
        Infomorphism {
            name,
            source: source.id().to_string(),
            target: target.id().to_string(),
            type_map: self
                .types
                .iter()
                .enumerate()
                .map(|(a, &b)| (source.types()[a].clone(), target.types()[b].clone()))
                .collect(),
            token_map: self
                .tokens
                .iter()
                .enumerate()
                .map(|(b, &a)| (target.tokens()[b].clone(), source.tokens()[a].clone()))
                .collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        is_permutation(&self.types) && is_permutation(&self.tokens)
    }
}

fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    for &x in map {
        if x >= seen.len() || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    true
}

/// Every valid infomorphism `source → target`, in lexicographic order of
/// (type map, token map). Returns `TooLarge` when the candidate space
/// exceeds `cap`.
pub fn enumerate_infomorphisms(
    source: &Classification,
    target: &Classification,
    cap: u128,
) -> Result<Vec<Infomorphism>, ClassifierError> {
    let n_type_maps = (target.type_count() as u128).checked_pow(source.type_count() as u32);
    let n_token_maps = (source.token_count() as u128).checked_pow(target.token_count() as u32);
    let needed = n_type_maps
        .zip(n_token_maps)
        .and_then(|(a, b)| a.checked_mul(b))
        .unwrap_or(u128::MAX);
    if needed > cap {
        return Err(ClassifierError::TooLarge {
            what: "infomorphism candidates",
            needed,
            cap,
        });
    }
    let mut out = Vec::new();
    for types in all_functions(source.type_count(), target.type_count()) {
        for tokens in all_functions(target.token_count(), source.token_count()) {
            let arrow = Arrow { types: types.clone(), tokens };
            if arrow.is_valid(source, target) {
                out.push(arrow.to_infomorphism(None, source, target));
            }
        }
    }
    Ok(out)
}

/// All functions `{0..domain} → {0..codomain}` as value vectors.
pub(crate) fn all_functions(domain: usize, codomain: usize) -> Vec<Vec<usize>> {
    if domain == 0 {
        return vec![Vec::new()];
    }
    if codomain == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; domain];
    loop {
        out.push(cur.clone());
        let mut i = domain;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < codomain {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Searches for an isomorphism `a → b`: a bijection on types together with a
/// bijection on tokens preserving incidence. Type bijections are explored
/// exhaustively (pruned by column weight); for a fixed type bijection the
/// token bijection exists iff the multisets of permuted rows agree.
pub fn find_isomorphism(a: &Classification, b: &Classification) -> Option<Infomorphism> {
    find_isomorphism_arrow(a, b).map(|arrow| arrow.to_infomorphism(None, a, b))
}

pub(crate) fn find_isomorphism_arrow(a: &Classification, b: &Classification) -> Option<Arrow> {
    if a.type_count() != b.type_count() || a.token_count() != b.token_count() {
        return None;
    }
    let col_weight = |c: &Classification, t: usize| (0..c.token_count()).filter(|&k| c.holds(k, t)).count();
    let wa: Vec<usize> = (0..a.type_count()).map(|t| col_weight(a, t)).collect();
    let wb: Vec<usize> = (0..b.type_count()).map(|t| col_weight(b, t)).collect();
    let mut sigma = vec![usize::MAX; a.type_count()];
    let mut used = vec![false; b.type_count()];
    search_types(a, b, &wa, &wb, 0, &mut sigma, &mut used)
}

fn search_types(
    a: &Classification,
    b: &Classification,
    wa: &[usize],
    wb: &[usize],
    depth: usize,
    sigma: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> Option<Arrow> {
    if depth == sigma.len() {
        return match_tokens(a, b, sigma).map(|tokens| Arrow {
            types: sigma.clone(),
            tokens,
        });
    }
    for cand in 0..b.type_count() {
        if used[cand] || wa[depth] != wb[cand] {
            continue;
        }
        sigma[depth] = cand;
        used[cand] = true;
        if let Some(found) = search_types(a, b, wa, wb, depth + 1, sigma, used) {
            return Some(found);
        }
        used[cand] = false;
    }
    sigma[depth] = usize::MAX;
    None
}

fn match_tokens(a: &Classification, b: &Classification, sigma: &[usize]) -> Option<Vec<usize>> {
    // token b' must pull back to some a' with row_a(a')[t] == row_b(b')[sigma[t]]
    let mut taken = vec![false; a.token_count()];
    let mut tokens = Vec::with_capacity(b.token_count());
    for kb in 0..b.token_count() {
        let wanted: Vec<bool> = sigma.iter().map(|&s| b.holds(kb, s)).collect();
        let ka = (0..a.token_count()).find(|&ka| !taken[ka] && a.incidence()[ka] == wanted)?;
        taken[ka] = true;
        tokens.push(ka);
    }
    Some(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asym() -> Classification {
        // a ⊨ x, a ⊨ y, b ⊨ y
        Classification::from_relation("A", &["a", "b"], &["x", "y"], &[("a", "x"), ("a", "y"), ("b", "y")])
            .unwrap()
    }

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn identity_is_valid() {
        let a = asym();
        let r = validate_infomorphism(&Infomorphism::identity(&a), &a, &a).unwrap();
        assert!(r.is_ok());
    }

    #[test]
    fn token_swap_on_asymmetric_incidence_is_caught() {
        let a = asym();
        let b = asym().renamed("B");
        let f = Infomorphism {
            name: None,
            source: "A".into(),
            target: "B".into(),
            type_map: map(&[("x", "x"), ("y", "y")]),
            token_map: map(&[("a", "b"), ("b", "a")]),
        };
        let r = validate_infomorphism(&f, &a, &b).unwrap();
        // exhaustive: (a,x): b⊨x false vs a⊨x true; (b,x): a⊨x true vs b⊨x false; y holds everywhere
        let got: Vec<(String, String)> =
            r.violations.iter().map(|v| (v.token.clone(), v.ty.clone())).collect();
        assert_eq!(got, vec![("a".into(), "x".into()), ("b".into(), "x".into())]);
    }

    #[test]
    fn into_single_all_true_token() {
        let a = asym();
        let one = Classification::from_relation("One", &["*"], &["x", "y"], &[("*", "x"), ("*", "y")]).unwrap();
        // pulled-back token `a` satisfies both image types
        let f = Infomorphism {
            name: None,
            source: "A".into(),
            target: "One".into(),
            type_map: map(&[("x", "x"), ("y", "y")]),
            token_map: map(&[("*", "a")]),
        };
        assert!(validate_infomorphism(&f, &a, &one).unwrap().is_ok());
    }

    #[test]
    fn dangling_name_is_structural() {
        let a = asym();
        let mut f = Infomorphism::identity(&a);
        f.type_map.insert("x".into(), "nope".into());
        assert!(matches!(
            validate_infomorphism(&f, &a, &a),
            Err(ClassifierError::Dangling { .. })
        ));
        let mut g = Infomorphism::identity(&a);
        g.token_map.remove("b");
        assert!(matches!(
            validate_infomorphism(&g, &a, &a),
            Err(ClassifierError::PartialTokenMap { .. })
        ));
    }

    #[test]
    fn identity_is_neutral_for_compose() {
        let a = asym();
        let b = asym().renamed("B");
        let f = Infomorphism {
            name: Some("f".into()),
            source: "A".into(),
            target: "B".into(),
            type_map: map(&[("x", "x"), ("y", "y")]),
            token_map: map(&[("a", "a"), ("b", "b")]),
        };
        let left = compose(&Infomorphism::identity(&a), &f).unwrap();
        let right = compose(&f, &Infomorphism::identity(&b)).unwrap();
        for g in [left, right] {
            assert_eq!(g.type_map, f.type_map);
            assert_eq!(g.token_map, f.token_map);
            assert_eq!((g.source.as_str(), g.target.as_str()), ("A", "B"));
        }
    }

    #[test]
    fn compose_checks_endpoints() {
        let a = asym();
        let f = Infomorphism::identity(&a);
        let mut g = f.clone();
        g.source = "Z".into();
        assert!(matches!(compose(&f, &g), Err(ClassifierError::EndpointMismatch { .. })));
    }

    #[test]
    fn finds_isomorphism_under_relabelling() {
        let a = asym();
        let b = Classification::from_relation("B", &["p", "q"], &["u", "v"], &[("q", "v"), ("q", "u"), ("p", "u")])
            .unwrap();
        let iso = find_isomorphism(&a, &b).unwrap();
        assert!(validate_infomorphism(&iso, &a, &b).unwrap().is_ok());
        assert_eq!(iso.type_map["x"], "v");
        let c = Classification::from_relation("C", &["p", "q"], &["u", "v"], &[("p", "u")]).unwrap();
        assert!(find_isomorphism(&a, &c).is_none());
    }

    #[test]
    fn enumerates_identity_among_endomorphisms() {
        let a = asym();
        let all = enumerate_infomorphisms(&a, &a, 1 << 20).unwrap();
        assert!(all.iter().any(|f| f.type_map == Infomorphism::identity(&a).type_map
            && f.token_map == Infomorphism::identity(&a).token_map));
        assert!(all.iter().all(|f| validate_infomorphism(f, &a, &a).unwrap().is_ok()));
    }
}
