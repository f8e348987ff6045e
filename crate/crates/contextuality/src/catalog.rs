//! Standard models of the two-party, two-setting, two-outcome scenario.

use crate::model::EmpiricalModel;
use crate::prob::Prob;
use crate::scenario::MeasurementScenario;

pub const PM: [&str; 2] = ["1", "-1"];

/// Observables `a, a', b, b'` and contexts `(a,b), (a,b'), (a',b), (a',b')`.
pub fn chsh_scenario() -> MeasurementScenario {
    MeasurementScenario::from_parts(
        &[("a", &PM), ("a'", &PM), ("b", &PM), ("b'", &PM)],
        &[&["a", "b"], &["a", "b'"], &["a'", "b"], &["a'", "b'"]],
    )
    .expect("fixed scenario")
}

fn from_entries(entries: impl Fn(usize, i64, i64) -> Prob) -> EmpiricalModel {
    let tables = (0..4)
        .map(|c| {
            [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                .into_iter()
                .map(|(x, y)| entries(c, x, y))
                .collect()
        })
        .collect();
    EmpiricalModel::new(chsh_scenario(), tables).expect("normalised by construction")
}

/// Perfect correlation in the first three contexts, anticorrelation in `(a′,b′)`.
pub fn pr_box() -> EmpiricalModel {
    from_entries(|c, x, y| {
        let want = if c == 3 { -1 } else { 1 };
        if x * y == want {
            Prob::ratio(1, 2)
        } else {
            Prob::zero()
        }
    })
}

/// Uniform marginals with the given correlators: `p(x,y) = (1 + xy·E_c)/4`.
pub fn from_correlators(e: [f64; 4]) -> EmpiricalModel {
    from_entries(|c, x, y| Prob::Float((1. + (x * y) as f64 * e[c]) / 4.))
}

/// As [`from_correlators`] with exact correlators.
pub fn from_exact_correlators(e: [Prob; 4]) -> EmpiricalModel {
    from_entries(|c, x, y| {
        let xy = Prob::ratio(x * y, 1);
        Prob::ratio(1, 4).add(&Prob::ratio(1, 4).mul(&xy).mul(&e[c]))
    })
}

/// The maximally violating quantum box: correlators `±1/√2`.
pub fn tsirelson_box() -> EmpiricalModel {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    from_correlators([r, r, r, -r])
}

/// The deterministic model with fixed values for `a, a', b, b'`.
pub fn deterministic(values: [i64; 4]) -> EmpiricalModel {
    let [a, a2, b, b2] = values;
    let pairs = [(a, b), (a, b2), (a2, b), (a2, b2)];
    from_entries(|c, x, y| if (x, y) == pairs[c] { Prob::one() } else { Prob::zero() })
}

/// All 16 deterministic models, `+1` before `−1`, `a` most significant.
pub fn all_deterministic() -> Vec<([i64; 4], EmpiricalModel)> {
    (0..16)
        .map(|k| {
            let v = [0, 1, 2, 3].map(|i| if k >> (3 - i) & 1 == 0 { 1 } else { -1 });
            (v, deterministic(v))
        })
        .collect()
}
