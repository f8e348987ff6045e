//! Global-section and contextual-fraction answers checked against a vertex
//! enumeration oracle, Fine's inequalities, and explicit decompositions.

use std::sync::OnceLock;

use proptest::prelude::*;
use qframe_contextuality::catalog::{chsh_scenario, pr_box};
use qframe_contextuality::*;

const PM: &[&str] = &["1", "-1"];

fn triangle() -> MeasurementScenario {
    MeasurementScenario::from_parts(&[("a", PM), ("b", PM), ("c", PM)], &[&["a", "b"], &["b", "c"], &["a", "c"]]).unwrap()
}

/// Mixed radices and a singleton context.
fn path3() -> MeasurementScenario {
    MeasurementScenario::from_parts(&[("p", PM), ("q", &["x", "y", "z"]), ("r", PM)], &[&["p", "q"], &["q", "r"], &["r"]]).unwrap()
}

/// Global assignments as digit vectors over the observables in id order.
fn globals(s: &MeasurementScenario) -> Vec<Vec<usize>> {
    let radices: Vec<usize> = s.observables().values().map(Vec::len).collect();
    let mut out = vec![vec![]];
    for r in radices {
        out = out.into_iter().flat_map(|g| (0..r).map(move |d| [g.clone(), vec![d]].concat())).collect();
    }
    out
}

/// Position of context `c`'s tuple for global `g`: outcomes in context order,
/// first observable most significant.
fn tuple_of(s: &MeasurementScenario, c: usize, g: &[usize]) -> usize {
    let ids: Vec<&String> = s.observables().keys().collect();
    s.contexts()[c].iter().fold(0, |acc, o| {
        let i = ids.iter().position(|x| *x == o).unwrap();
        acc * s.observables()[o].len() + g[i]
    })
}

fn rows(s: &MeasurementScenario) -> usize {
    (0..s.contexts().len())
        .map(|c| s.contexts()[c].iter().map(|o| s.observables()[o].len()).product::<usize>())
        .sum()
}

/// Incidence matrix: row per (context, tuple), column per global assignment.
fn incidence(s: &MeasurementScenario) -> Vec<Vec<f64>> {
    let gs = globals(s);
    let mut a = vec![vec![0.; gs.len()]; rows(s)];
    for (j, g) in gs.iter().enumerate() {
        let mut off = 0;
        for c in 0..s.contexts().len() {
            a[off + tuple_of(s, c, g)][j] = 1.;
            off += s.tuple_count(c);
        }
    }
    a
}

/// Solve A_S x = b for a column subset; None if the columns are dependent or
/// the system is inconsistent.
fn solve_subset(a: &[Vec<f64>], cols: &[usize], b: &[f64]) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &bi)| cols.iter().map(|&j| r[j]).chain([bi]).collect()).collect();
    for p in 0..k {
        let piv = (p..m.len()).max_by(|&x, &y| m[x][p].abs().total_cmp(&m[y][p].abs()))?;
        if m[piv][p].abs() < 1e-9 {
            return None;
        }
        m.swap(p, piv);
        for r in 0..m.len() {
            if r != p {
                let f = m[r][p] / m[p][p];
                if f != 0. {
                    for col in p..=k {
                        m[r][col] -= f * m[p][col];
                    }
                }
            }
        }
    }
    if m[k..].iter().any(|r| r[k].abs() > 1e-9) {
        return None;
    }
    Some((0..k).map(|p| m[p][k] / m[p][p]).collect())
}

fn rank(a: &[Vec<f64>]) -> usize {
    let mut m = a.to_vec();
    let (mut r, cols) = (0, a[0].len());
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c].abs() > 1e-9) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r {
                let f = m[i][c] / m[r][c];
                for j in 0..cols {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        r += 1;
    }
    r
}

/// Column subsets of size 1..=rank, i.e. every candidate basic support.
fn supports(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == r {
            return;
        }
        for j in start..n {
            cur.push(j);
            go(j + 1, n, r, cur, out);
            cur.pop();
        }
    }
    go(0, n, r, &mut cur, &mut out);
    out
}

struct Oracle {
    a: Vec<Vec<f64>>,
    supports: Vec<Vec<usize>>,
}

impl Oracle {
    fn new(s: &MeasurementScenario) -> Self {
        let a = incidence(s);
        let supports = supports(a[0].len(), rank(&a));
        Oracle { a, supports }
    }

    /// Feasible iff some basic support gives a nonnegative solution.
    fn feasible(&self, m: &EmpiricalModel) -> bool {
        let b: Vec<f64> = m.tables().iter().flatten().map(Prob::to_f64).collect();
        self.supports
            .iter()
            .any(|cols| solve_subset(&self.a, cols, &b).is_some_and(|x| x.iter().all(|&v| v >= -1e-9)))
    }
}

fn oracle_for(name: &str) -> &'static Oracle {
    static TRI: OnceLock<Oracle> = OnceLock::new();
    static CHSH: OnceLock<Oracle> = OnceLock::new();
    static PATH: OnceLock<Oracle> = OnceLock::new();
    match name {
        "triangle" => TRI.get_or_init(|| Oracle::new(&triangle())),
        "chsh" => CHSH.get_or_init(|| Oracle::new(&chsh_scenario())),
        _ => PATH.get_or_init(|| Oracle::new(&path3())),
    }
}

fn scenario_for(name: &str) -> MeasurementScenario {
    match name {
        "triangle" => triangle(),
        "chsh" => chsh_scenario(),
        _ => path3(),
    }
}

/// Model generated by integer weights on global assignments.
fn from_weights(s: &MeasurementScenario, w: &[i64]) -> EmpiricalModel {
    let total: i64 = w.iter().sum();
    let gs = globals(s);
    let tables = (0..s.contexts().len())
        .map(|c| {
            let mut t = vec![0i64; s.tuple_count(c)];
            for (g, &wi) in gs.iter().zip(w) {
                t[tuple_of(s, c, g)] += wi;
            }
            t.into_iter().map(|x| Prob::ratio(x, total)).collect()
        })
        .collect();
    EmpiricalModel::new(s.clone(), tables).unwrap()
}

/// Independent tables per context, usually signalling.
fn from_tables(s: &MeasurementScenario, w: &[Vec<i64>]) -> EmpiricalModel {
    let tables = w
        .iter()
        .map(|t| {
            let total: i64 = t.iter().sum();
            t.iter().map(|&x| Prob::ratio(x, total)).collect()
        })
        .collect();
    EmpiricalModel::new(s.clone(), tables).unwrap()
}

/// Perfect anticorrelation in every pair: no-signalling, not local.
fn specker() -> EmpiricalModel {
    let h = Prob::ratio(1, 2);
    let t = vec![Prob::zero(), h.clone(), h, Prob::zero()];
    EmpiricalModel::new(triangle(), vec![t; 3]).unwrap()
}

fn mix(q: &Prob, x: &EmpiricalModel, y: &EmpiricalModel) -> EmpiricalModel {
    let rest = Prob::one().sub(q);
    let tables = x
        .tables()
        .iter()
        .zip(y.tables())
        .map(|(tx, ty)| tx.iter().zip(ty).map(|(a, b)| q.mul(a).add(&rest.mul(b))).collect())
        .collect();
    EmpiricalModel::new(x.scenario().clone(), tables).unwrap()
}

fn correlators(m: &EmpiricalModel) -> [f64; 4] {
    std::array::from_fn(|c| {
        let t = m.table(c);
        t[0].to_f64() - t[1].to_f64() - t[2].to_f64() + t[3].to_f64()
    })
}

/// Fine: a no-signalling CHSH box is local iff all eight CHSH forms are ≤ 2.
fn fine_local(m: &EmpiricalModel) -> bool {
    let e = correlators(m);
    let sum: f64 = e.iter().sum();
    (0..4).all(|odd| (sum - 2. * e[odd]).abs() <= 2. + 1e-12)
}

fn exact() -> SolveOptions {
    SolveOptions { arithmetic: Arithmetic::Exact, ..SolveOptions::default() }
}

fn float() -> SolveOptions {
    SolveOptions { arithmetic: Arithmetic::Float, ..SolveOptions::default() }
}

/// Run both arithmetic modes, verify certificates, return the shared verdict.
fn checked_verdict(m: &EmpiricalModel) -> bool {
    let e = has_global_section(m, &exact()).unwrap();
    verify_section_certificate(m, &e.certificate, 0.).unwrap();
    let f = has_global_section(m, &float()).unwrap();
    verify_section_certificate(m, &f.certificate, 1e-9).unwrap();
    assert_eq!(e.feasible, f.feasible, "exact and float disagree");
    e.feasible
}

fn global_weights(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..4, n).prop_filter("nonzero", |w| w.iter().any(|&x| x > 0))
}

fn table_weights(s: &MeasurementScenario) -> impl Strategy<Value = Vec<Vec<i64>>> {
    let sizes: Vec<usize> = (0..s.contexts().len()).map(|c| s.tuple_count(c)).collect();
    sizes
        .into_iter()
        .map(|n| prop::collection::vec(0i64..4, n).prop_filter("nonzero", |w| w.iter().any(|&x| x > 0)))
        .collect::<Vec<_>>()
}

#[test]
fn oracle_sanity() {
    assert_eq!(rank(&incidence(&chsh_scenario())), 9);
    assert!(!oracle_for("chsh").feasible(&pr_box()));
    assert!(!oracle_for("triangle").feasible(&specker()));
}

#[test]
fn pr_mixtures_follow_fine_and_the_oracle() {
    let local = from_weights(&chsh_scenario(), &[1; 16]);
    for k in 0..=10 {
        let q = Prob::ratio(k, 10);
        let m = mix(&q, &pr_box(), &local);
        let verdict = checked_verdict(&m);
        assert_eq!(verdict, k <= 5, "q = {k}/10");
        assert_eq!(verdict, fine_local(&m));
        assert_eq!(verdict, oracle_for("chsh").feasible(&m));
        let cf = contextual_fraction(&m, &exact()).unwrap().value;
        // uniform noise is interior, so the fraction is (B−2)/2 past the facet
        let want = if k <= 5 { Prob::zero() } else { Prob::ratio(2 * k - 10, 10) };
        assert_eq!(cf, want, "q = {k}/10");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn generated_from_globals_is_feasible(name in prop::sample::select(vec!["triangle", "chsh", "path"]), seed in any::<u64>()) {
        let s = scenario_for(name);
        let n = globals(&s).len();
        let w: Vec<i64> = (0..n).map(|i| ((seed >> (i % 60)) & 3) as i64).collect();
        prop_assume!(w.iter().any(|&x| x > 0));
        let m = from_weights(&s, &w);
        prop_assert!(checked_verdict(&m));
        prop_assert!(contextual_fraction(&m, &exact()).unwrap().value.is_zero());
    }

    #[test]
    fn triangle_tables_match_oracle(w in table_weights(&triangle())) {
        let m = from_tables(&triangle(), &w);
        prop_assert_eq!(checked_verdict(&m), oracle_for("triangle").feasible(&m));
    }

    #[test]
    fn path_tables_match_oracle(w in table_weights(&path3())) {
        let m = from_tables(&path3(), &w);
        prop_assert_eq!(checked_verdict(&m), oracle_for("path").feasible(&m));
    }

    #[test]
    fn specker_mixtures_match_oracle(k in 0i64..=12, w in global_weights(8)) {
        let q = Prob::ratio(k, 12);
        let m = mix(&q, &specker(), &from_weights(&triangle(), &w));
        let verdict = checked_verdict(&m);
        prop_assert_eq!(verdict, oracle_for("triangle").feasible(&m));
        let cf = contextual_fraction(&m, &exact()).unwrap();
        prop_assert_eq!(cf.value.is_zero(), verdict);
        // the mixture itself is a decomposition with contextual weight q
        prop_assert!(cf.value.to_f64() <= q.to_f64() + 1e-12);
        prop_assert!(cf.value.to_f64() >= 0.);
    }

    #[test]
    fn chsh_mixtures_respect_bounds(k in 0i64..=8, w in global_weights(16)) {
        let q = Prob::ratio(k, 8);
        let m = mix(&q, &pr_box(), &from_weights(&chsh_scenario(), &w));
        let verdict = checked_verdict(&m);
        prop_assert_eq!(verdict, fine_local(&m));
        let cf = contextual_fraction(&m, &exact()).unwrap().value.to_f64();
        let e = correlators(&m);
        let b = e[0] + e[1] + e[2] - e[3];
        prop_assert!(cf >= (b - 2.) / 2. - 1e-12);
        prop_assert!(cf <= q.to_f64() + 1e-12);
        let cf_float = contextual_fraction(&m, &float()).unwrap().value.to_f64();
        prop_assert!((cf - cf_float).abs() < 1e-9);
    }

    #[test]
    fn correlator_boxes_follow_fine(e in prop::array::uniform4(-4i64..=4)) {
        let m = catalog::from_exact_correlators(e.map(|x| Prob::ratio(x, 4)));
        let verdict = checked_verdict(&m);
        prop_assert_eq!(verdict, fine_local(&m));
        prop_assert_eq!(verdict, oracle_for("chsh").feasible(&m));
    }
}

