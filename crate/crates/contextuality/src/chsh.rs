use crate::error::{ContextualityError, Result};
use crate::model::EmpiricalModel;
use crate::prob::Prob;

fn sign(outcome: &str) -> Option<i64> {
    match outcome.trim().parse::<f64>().ok()? {
        x if x == 1. => Some(1),
        x if x == -1. => Some(-1),
        _ => None,
    }
}

/// Checks the context order `(a,b), (a,b′), (a′,b), (a′,b′)` with `±1` outcomes.
pub fn check_chsh_shape(m: &EmpiricalModel) -> Result<()> {
    let s = m.scenario();
    let bad = |why: &str| Err(ContextualityError::NotChshScenario(why.to_string()));
    if s.observables().len() != 4 {
        return bad("expected four observables");
    }
    for (o, outs) in s.observables() {
        let signs: Vec<Option<i64>> = outs.iter().map(|x| sign(x)).collect();
        if outs.len() != 2 || signs.contains(&None) || signs[0] == signs[1] {
            return bad(&format!("observable `{o}` must have outcomes +1 and -1"));
        }
    }
    let c = s.contexts();
    if c.len() != 4 || c.iter().any(|x| x.len() != 2) {
        return bad("expected four two-observable contexts");
    }
    let (a, a2, b, b2) = (&c[0][0], &c[2][0], &c[0][1], &c[1][1]);
    let ok = c[1][0] == *a && c[3][0] == *a2 && c[2][1] == *b && c[3][1] == *b2 && a != a2 && b != b2;
    if !ok {
        return bad("contexts must be (a,b), (a,b'), (a',b), (a',b') in that order");
    }
    Ok(())
}

/// `E = Σ o₁ o₂ p(o₁, o₂)` for a two-observable context with `±1` outcomes.
pub fn correlator(m: &EmpiricalModel, c: usize) -> Result<Prob> {
    let s = m.scenario();
    let ctx = &s.contexts()[c];
    if ctx.len() != 2 {
        return Err(ContextualityError::NotChshScenario(format!("context {c} is not a pair")));
    }
    let mut e = Prob::zero();
    for (t, p) in m.table(c).iter().enumerate() {
        let d = s.tuple_digits(c, t);
        let mut v = 1;
        for (k, o) in ctx.iter().enumerate() {
            v *= sign(&s.outcomes(o).unwrap()[d[k]])
                .ok_or_else(|| ContextualityError::NotChshScenario(format!("`{o}` has a non ±1 outcome")))?;
        }
        e = if v > 0 { e.add(p) } else { e.sub(p) };
    }
    Ok(e)
}

/// `E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′)`, exact when the model is.
pub fn chsh_value(m: &EmpiricalModel) -> Result<Prob> {
    check_chsh_shape(m)?;
    let e: Vec<Prob> = (0..4).map(|c| correlator(m, c)).collect::<Result<_>>()?;
    Ok(e[0].add(&e[1]).add(&e[2]).sub(&e[3]))
}
