//! Small bundled fixtures: diagrams for universal-property checks, bases
//! whose colimit and limit coincide, and candidate pairs for merging.

use std::collections::BTreeMap;

use crate::cccd::CccdCandidate;
use crate::classification::Classification;
use crate::diagram::ClassifierDiagram;
use crate::infomorphism::{enumerate_infomorphisms, Infomorphism};

/// Two tokens, two types, each token satisfying exactly its own type.
pub fn bit(id: &str) -> Classification {
    Classification::from_relation(id, &["0", "1"], &["is0", "is1"], &[("0", "is0"), ("1", "is1")]).unwrap()
}

/// `a ⊨ x`, `a ⊨ y`, `b ⊨ y`.
pub fn asym(id: &str) -> Classification {
    Classification::from_relation(id, &["a", "b"], &["x", "y"], &[("a", "x"), ("a", "y"), ("b", "y")]).unwrap()
}

/// One token satisfying one type.
pub fn unit(id: &str) -> Classification {
    Classification::from_relation(id, &["*"], &["t"], &[("*", "t")]).unwrap()
}

/// Three tokens over two types: `u ⊨ x`, `v ⊨ y`, `w ⊨ x, y`.
pub fn three(id: &str) -> Classification {
    Classification::from_relation(
        id,
        &["u", "v", "w"],
        &["x", "y"],
        &[("u", "x"), ("v", "y"), ("w", "x"), ("w", "y")],
    )
    .unwrap()
}

/// The `k`-th valid infomorphism `source → target` (cyclically), if any exists.
pub fn pick_arrow(name: &str, source: &Classification, target: &Classification, k: usize) -> Option<Infomorphism> {
    let all = enumerate_infomorphisms(source, target, 1 << 20).ok()?;
    if all.is_empty() {
        return None;
    }
    Some(all[k % all.len()].clone().with_name(name))
}

/// Identity-shaped (or swapped, when `flip`) isomorphism between two copies
/// of the same `bit`/`asym`-style classification.
pub fn relabel(name: &str, source: &Classification, target: &Classification, flip: bool) -> Infomorphism {
    let swap = |v: &[String], i: usize| -> String {
        if flip && v.len() == 2 {
            v[1 - i].clone()
        } else {
            v[i].clone()
        }
    };
    let type_map: BTreeMap<String, String> = source
        .types()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), swap(target.types(), i)))
        .collect();
    let token_map: BTreeMap<String, String> = target
        .tokens()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), swap(source.tokens(), i)))
        .collect();
    Infomorphism {
        name: Some(name.to_string()),
        source: source.id().to_string(),
        target: target.id().to_string(),
        type_map,
        token_map,
    }
}

fn diagram(nodes: Vec<Classification>, edges: Vec<Option<Infomorphism>>) -> Option<ClassifierDiagram> {
    let edges: Option<Vec<Infomorphism>> = edges.into_iter().collect();
    ClassifierDiagram::new(nodes, edges?).ok()
}

/// Spans, cospans, chains, discrete pairs, single nodes, the empty diagram
/// and cyclic quivers.
pub fn universal_corpus() -> Vec<(String, ClassifierDiagram)> {
    let mut out: Vec<(String, Option<ClassifierDiagram>)> = Vec::new();
    out.push(("empty".into(), Some(ClassifierDiagram::empty())));
    for (name, c) in [("bit", bit("A")), ("asym", asym("A")), ("three", three("A"))] {
        out.push((format!("single-{name}"), diagram(vec![c], vec![])));
    }
    out.push(("discrete-bit-asym".into(), diagram(vec![bit("A"), asym("B")], vec![])));

    let makers: [(&str, fn(&str) -> Classification); 4] = [("bit", bit), ("asym", asym), ("unit", unit), ("three", three)];
    // spans A <- S -> B
    for (k, (s, a, b)) in [(3usize, 0usize, 1usize), (3, 0, 0), (2, 1, 1), (1, 1, 2), (3, 2, 3), (3, 3, 1)]
        .into_iter()
        .enumerate()
    {
        let (sn, sf) = makers[s];
        let (an, af) = makers[a];
        let (bn, bf) = makers[b];
        let (sc, ac, bc) = (sf("S"), af("A"), bf("B"));
        let d = diagram(
            vec![sc.clone(), ac.clone(), bc.clone()],
            vec![pick_arrow("f", &sc, &ac, k), pick_arrow("g", &sc, &bc, k + 1)],
        );
        out.push((format!("span-{an}<-{sn}->{bn}"), d));
    }
    // cospans A -> T <- B
    for (k, (a, t, b)) in [(0usize, 0usize, 3usize), (3, 0, 3), (1, 1, 2), (2, 1, 3), (1, 2, 3), (3, 3, 3)]
        .into_iter()
        .enumerate()
    {
        let (an, af) = makers[a];
        let (tn, tf) = makers[t];
        let (bn, bf) = makers[b];
        let (ac, tc, bc) = (af("A"), tf("T"), bf("B"));
        let d = diagram(
            vec![ac.clone(), tc.clone(), bc.clone()],
            vec![pick_arrow("f", &ac, &tc, k), pick_arrow("g", &bc, &tc, k + 2)],
        );
        out.push((format!("cospan-{an}->{tn}<-{bn}"), d));
    }
    // chains A -> B -> C
    for (k, (a, b, c)) in [(0usize, 0usize, 0usize), (3, 1, 2), (2, 1, 1), (3, 3, 0)].into_iter().enumerate() {
        let (an, af) = makers[a];
        let (bn, bf) = makers[b];
        let (cn, cf) = makers[c];
        let (ac, bc, cc) = (af("A"), bf("B"), cf("C"));
        let d = diagram(
            vec![ac.clone(), bc.clone(), cc.clone()],
            vec![pick_arrow("f", &ac, &bc, k), pick_arrow("g", &bc, &cc, k + 1)],
        );
        out.push((format!("chain-{an}->{bn}->{cn}"), d));
    }
    // cyclic quivers
    let (a, b) = (bit("A"), bit("B"));
    out.push((
        "cycle-bit-flip".into(),
        diagram(
            vec![a.clone(), b.clone()],
            vec![Some(relabel("f", &a, &b, true)), Some(relabel("g", &b, &a, true))],
        ),
    ));
    out.push((
        "cycle-bit-noncommuting".into(),
        diagram(
            vec![a.clone(), b.clone()],
            vec![Some(relabel("f", &a, &b, true)), Some(relabel("g", &b, &a, false)), Some(relabel("k", &a, &b, false))],
        ),
    ));
    let t = three("A");
    out.push(("self-loop-three".into(), diagram(vec![t.clone()], vec![pick_arrow("e", &t, &t, 3)])));

    out.into_iter().filter_map(|(n, d)| d.map(|d| (n, d))).collect()
}

/// Bases whose canonical colimit and limit are isomorphic.
pub fn self_dual_bases() -> Vec<(String, ClassifierDiagram)> {
    let (a, b, c) = (bit("A"), bit("B"), bit("C"));
    let (p, q) = (asym("P"), asym("Q"));
    let mut out = vec![
        ("single-bit".to_string(), ClassifierDiagram::new(vec![a.clone()], vec![])),
        ("single-asym".to_string(), ClassifierDiagram::new(vec![p.clone()], vec![])),
        ("single-three".to_string(), ClassifierDiagram::new(vec![three("T")], vec![])),
        ("single-unit".to_string(), ClassifierDiagram::new(vec![unit("U")], vec![])),
        (
            "iso-edge-bit".to_string(),
            ClassifierDiagram::new(vec![a.clone(), b.clone()], vec![relabel("g_AB", &a, &b, true)]),
        ),
        (
            "iso-edge-asym".to_string(),
            ClassifierDiagram::new(vec![p.clone(), q.clone()], vec![relabel("g_PQ", &p, &q, false)]),
        ),
        (
            "iso-cycle-bit".to_string(),
            ClassifierDiagram::new(
                vec![a.clone(), b.clone()],
                vec![relabel("g_AB", &a, &b, true), relabel("g_BA", &b, &a, true)],
            ),
        ),
        (
            "iso-chain-bit".to_string(),
            ClassifierDiagram::new(
                vec![a.clone(), b.clone(), c.clone()],
                vec![
                    relabel("g_AB", &a, &b, true),
                    relabel("g_BA", &b, &a, true),
                    relabel("g_BC", &b, &c, false),
                    relabel("g_CB", &c, &b, false),
                ],
            ),
        ),
        (
            "iso-triangle-bit".to_string(),
            ClassifierDiagram::new(
                vec![a.clone(), b.clone(), c.clone()],
                vec![
                    relabel("g_AB", &a, &b, true),
                    relabel("g_BC", &b, &c, true),
                    relabel("g_AC", &a, &c, false),
                ],
            ),
        ),
        ("discrete-bit-pair".to_string(), ClassifierDiagram::new(vec![a.clone(), b.clone()], vec![])),
    ];
    out.retain(|(_, d)| d.is_ok());
    out.into_iter().map(|(n, d)| (n, d.unwrap())).collect()
}

/// Construct-then-verify candidates over every self-dual base.
pub fn cccd_fixtures() -> Vec<(String, CccdCandidate)> {
    self_dual_bases()
        .into_iter()
        .map(|(n, d)| {
            let c = CccdCandidate::from_base(d, "Core").expect("self-dual base");
            (n, c)
        })
        .collect()
}

/// One-element perturbations of a candidate: an incoming type image moved,
/// an outgoing token image moved, or one core incidence bit flipped.
pub fn mutants(c: &CccdCandidate) -> Vec<(String, CccdCandidate)> {
    let mut out = Vec::new();
    let core = c.core();
    for (k, f) in c.incoming().iter().enumerate() {
        if core.type_count() < 2 {
            break;
        }
        let (ty, img) = f.type_map.iter().next().expect("nonempty type map");
        let pos = core.type_position(img).unwrap();
        let moved = core.types()[(pos + 1) % core.type_count()].clone();
        let mut incoming = c.incoming().to_vec();
        incoming[k].type_map.insert(ty.clone(), moved);
        if let Ok(m) = CccdCandidate::new(c.base().clone(), core.clone(), incoming, c.outgoing().to_vec()) {
            out.push((format!("incoming[{k}].typeMap[{ty}]"), m));
        }
    }
    for (k, h) in c.outgoing().iter().enumerate() {
        if core.token_count() < 2 {
            break;
        }
        let (tok, img) = h.token_map.iter().next().expect("nonempty token map");
        let pos = core.token_position(img).unwrap();
        let moved = core.tokens()[(pos + 1) % core.token_count()].clone();
        let mut outgoing = c.outgoing().to_vec();
        outgoing[k].token_map.insert(tok.clone(), moved);
        if let Ok(m) = CccdCandidate::new(c.base().clone(), core.clone(), c.incoming().to_vec(), outgoing) {
            out.push((format!("outgoing[{k}].tokenMap[{tok}]"), m));
        }
    }
    if core.token_count() > 0 && core.type_count() > 0 {
        let mut inc = core.incidence().to_vec();
        inc[0][0] = !inc[0][0];
        let flipped = Classification::new(core.id(), core.tokens().to_vec(), core.types().to_vec(), inc).unwrap();
        if let Ok(m) = CccdCandidate::new(c.base().clone(), flipped, c.incoming().to_vec(), c.outgoing().to_vec()) {
            out.push(("core.incidence[0][0]".to_string(), m));
        }
    }
    out
}

/// Candidate pairs for merging and whether a common core is expected.
pub fn merge_corpus() -> Vec<(String, CccdCandidate, CccdCandidate, bool)> {
    let build = |d: ClassifierDiagram, core: &str| CccdCandidate::from_base(d, core).expect("self-dual base");
    let (a, b, c, d) = (bit("A"), bit("B"), bit("C"), bit("D"));
    let single = |n: &Classification, core: &str| build(ClassifierDiagram::new(vec![n.clone()], vec![]).unwrap(), core);
    let pair = |x: &Classification, y: &Classification, flip: bool, core: &str| {
        build(
            ClassifierDiagram::new(vec![x.clone(), y.clone()], vec![relabel("g", x, y, flip)]).unwrap(),
            core,
        )
    };
    vec![
        ("self-merge-single".into(), single(&a, "C1"), single(&a, "C2"), true),
        ("self-merge-iso-edge".into(), pair(&a, &b, true, "C1"), pair(&a, &b, true, "C2"), true),
        ("disjoint-singles".into(), single(&a, "C1"), single(&b, "C2"), true),
        ("disjoint-iso-edges".into(), pair(&a, &b, true, "C1"), pair(&c, &d, false, "C2"), true),
        ("shared-node-consistent".into(), pair(&a, &b, true, "C1"), single(&a, "C2"), true),
        ("contradictory-parallel-arrows".into(), pair(&a, &b, true, "C1"), pair(&a, &b, false, "C2"), false),
        (
            "contradictory-cycle".into(),
            pair(&a, &b, true, "C1"),
            build(
                ClassifierDiagram::new(vec![b.clone(), a.clone()], vec![relabel("k", &b, &a, false)]).unwrap(),
                "C2",
            ),
            false,
        ),
    ]
}
