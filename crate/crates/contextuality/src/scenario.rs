use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ContextualityError, Result};

/// Observables with finite outcome sets, and a cover by contexts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioRepr", into = "ScenarioRepr")]
pub struct MeasurementScenario {
    observables: BTreeMap<String, Vec<String>>,
    contexts: Vec<Vec<String>>,
    /// Per context: outcome-set sizes in context order.
    radices: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct ScenarioRepr {
    observables: BTreeMap<String, Vec<OutcomeRepr>>,
    contexts: Vec<Vec<String>>,
}

/// Outcomes may be written as strings or JSON numbers; they are kept as text.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OutcomeRepr {
    Text(String),
    Number(serde_json::Number),
}

impl TryFrom<ScenarioRepr> for MeasurementScenario {
    type Error = ContextualityError;
    fn try_from(r: ScenarioRepr) -> Result<Self> {
        let observables = r
            .observables
            .into_iter()
            .map(|(k, v)| {
                let outs = v
                    .into_iter()
                    .map(|o| match o {
                        OutcomeRepr::Text(s) => s,
                        OutcomeRepr::Number(n) => n.to_string(),
                    })
                    .collect();
                (k, outs)
            })
            .collect();
        MeasurementScenario::new(observables, r.contexts)
    }
}

impl From<MeasurementScenario> for ScenarioRepr {
    fn from(s: MeasurementScenario) -> Self {
        ScenarioRepr {
            observables: s
                .observables
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().map(OutcomeRepr::Text).collect()))
                .collect(),
            contexts: s.contexts,
        }
    }
}

impl MeasurementScenario {
    pub fn new(observables: BTreeMap<String, Vec<String>>, contexts: Vec<Vec<String>>) -> Result<Self> {
        for (o, outs) in &observables {
            if outs.is_empty() {
                return Err(ContextualityError::EmptyOutcomes(o.clone()));
            }
            for (i, x) in outs.iter().enumerate() {
                if x.contains(',') {
                    return Err(ContextualityError::BadOutcome(x.clone()));
                }
                if outs[..i].contains(x) {
                    return Err(ContextualityError::DuplicateOutcome {
                        observable: o.clone(),
                        outcome: x.clone(),
                    });
                }
            }
        }
        for (i, c) in contexts.iter().enumerate() {
            if c.is_empty() {
                return Err(ContextualityError::EmptyContext(i));
            }
            for (k, o) in c.iter().enumerate() {
                if !observables.contains_key(o) {
                    return Err(ContextualityError::UnknownObservable {
                        context: i,
                        observable: o.clone(),
                    });
                }
                if c[..k].contains(o) {
                    return Err(ContextualityError::RepeatedInContext {
                        context: i,
                        observable: o.clone(),
                    });
                }
            }
        }
        for o in observables.keys() {
            if !contexts.iter().any(|c| c.contains(o)) {
                return Err(ContextualityError::Uncovered(o.clone()));
            }
        }
        let radices = contexts
            .iter()
            .map(|c| c.iter().map(|o| observables[o].len()).collect())
            .collect();
        Ok(MeasurementScenario {
            observables,
            contexts,
            radices,
        })
    }

    /// Convenience constructor from string slices.
    pub fn from_parts(observables: &[(&str, &[&str])], contexts: &[&[&str]]) -> Result<Self> {
        MeasurementScenario::new(
            observables
                .iter()
                .map(|(o, outs)| (o.to_string(), outs.iter().map(|s| s.to_string()).collect()))
                .collect(),
            contexts.iter().map(|c| c.iter().map(|s| s.to_string()).collect()).collect(),
        )
    }

    pub fn observables(&self) -> &BTreeMap<String, Vec<String>> {
        &self.observables
    }

    pub fn observable_ids(&self) -> impl Iterator<Item = &String> {
        self.observables.keys()
    }

    pub fn outcomes(&self, observable: &str) -> Option<&[String]> {
        self.observables.get(observable).map(Vec::as_slice)
    }

    pub fn contexts(&self) -> &[Vec<String>] {
        &self.contexts
    }

    /// Number of joint outcome tuples of context `c`.
    pub fn tuple_count(&self, c: usize) -> usize {
        self.radices[c].iter().product()
    }

    /// Outcome indices (context order) of tuple number `t`; first observable most significant.
    pub fn tuple_digits(&self, c: usize, mut t: usize) -> Vec<usize> {
        let r = &self.radices[c];
        let mut d = vec![0; r.len()];
        for k in (0..r.len()).rev() {
            d[k] = t % r[k];
            t /= r[k];
        }
        d
    }

    pub fn tuple_index(&self, c: usize, digits: &[usize]) -> usize {
        digits.iter().zip(&self.radices[c]).fold(0, |acc, (&d, &n)| acc * n + d)
    }

    pub fn tuple_key(&self, c: usize, t: usize) -> String {
        self.tuple_digits(c, t)
            .iter()
            .zip(&self.contexts[c])
            .map(|(&d, o)| self.observables[o][d].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Inverse of [`tuple_key`](Self::tuple_key).
    pub fn parse_tuple_key(&self, c: usize, key: &str) -> Result<usize> {
        let bad = |reason: String| ContextualityError::BadTupleKey {
            context: c,
            key: key.to_string(),
            reason,
        };
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        let ctx = &self.contexts[c];
        if parts.len() != ctx.len() {
            return Err(bad(format!("expected {} outcomes, got {}", ctx.len(), parts.len())));
        }
        let mut digits = Vec::with_capacity(parts.len());
        for (p, o) in parts.iter().zip(ctx) {
            let outs = &self.observables[o];
            let d = outs
                .iter()
                .position(|x| x == p)
                .or_else(|| {
                    // `+1` and `1` name the same numeric outcome
                    let want: f64 = p.parse().ok()?;
                    outs.iter().position(|x| x.parse::<f64>().ok() == Some(want))
                })
                .ok_or_else(|| bad(format!("`{p}` is not an outcome of `{o}`")))?;
            digits.push(d);
        }
        Ok(self.tuple_index(c, &digits))
    }

    /// Product of outcome-set sizes over all observables.
    pub fn assignment_count(&self) -> u128 {
        self.observables
            .values()
            .map(|v| v.len() as u128)
            .try_fold(1u128, |acc, n| acc.checked_mul(n))
            .unwrap_or(u128::MAX)
    }

    pub(crate) fn observable_index(&self, o: &str) -> usize {
        self.observables.keys().position(|k| k == o).expect("validated observable")
    }
}
