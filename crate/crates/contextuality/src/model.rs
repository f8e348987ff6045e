use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{ContextualityError, Result};
use crate::prob::Prob;
use crate::scenario::MeasurementScenario;

pub const NORMALIZATION_TOL: f64 = 1e-10;

/// One distribution per context over its joint outcome tuples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelRepr", into = "ModelRepr")]
pub struct EmpiricalModel {
    scenario: MeasurementScenario,
    tables: Vec<Vec<Prob>>,
}

#[derive(Serialize, Deserialize)]
struct ModelRepr {
    scenario: MeasurementScenario,
    tables: BTreeMap<String, BTreeMap<String, serde_json::Value>>,
}

impl TryFrom<ModelRepr> for EmpiricalModel {
    type Error = ContextualityError;
    fn try_from(r: ModelRepr) -> Result<Self> {
        let s = r.scenario;
        let mut tables: Vec<Option<Vec<Prob>>> = vec![None; s.contexts().len()];
        for (k, entries) in r.tables {
            let c = k
                .parse::<usize>()
                .ok()
                .filter(|&c| c < tables.len())
                .ok_or_else(|| ContextualityError::ExtraTable(k.clone()))?;
            let mut t = vec![Prob::zero(); s.tuple_count(c)];
            let mut seen = vec![false; t.len()];
            for (key, v) in entries {
                let i = s.parse_tuple_key(c, &key)?;
                if seen[i] {
                    return Err(ContextualityError::BadTupleKey {
                        context: c,
                        key,
                        reason: "tuple given twice".into(),
                    });
                }
                seen[i] = true;
                t[i] = Prob::from_json(&v).map_err(|_| ContextualityError::BadProbability {
                    context: c,
                    key: key.clone(),
                    value: v.to_string(),
                })?;
            }
            tables[c] = Some(t);
        }
        let tables = tables
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or(ContextualityError::MissingTable(i)))
            .collect::<Result<_>>()?;
        EmpiricalModel::new(s, tables)
    }
}

impl From<EmpiricalModel> for ModelRepr {
    fn from(m: EmpiricalModel) -> Self {
        let tables = m
            .tables
            .iter()
            .enumerate()
            .map(|(c, t)| {
                let entries = t
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (m.scenario.tuple_key(c, i), serde_json::to_value(p).expect("probability")))
                    .collect();
                (c.to_string(), entries)
            })
            .collect();
        ModelRepr {
            scenario: m.scenario,
            tables,
        }
    }
}

impl EmpiricalModel {
    /// Tables are indexed by tuple number (see [`MeasurementScenario::tuple_digits`]).
    /// Exact tables must sum to exactly 1; others to within 1e-10.
    pub fn new(scenario: MeasurementScenario, tables: Vec<Vec<Prob>>) -> Result<Self> {
        if tables.len() != scenario.contexts().len() {
            return Err(ContextualityError::MissingTable(tables.len().min(scenario.contexts().len())));
        }
        for (c, t) in tables.iter().enumerate() {
            if t.len() != scenario.tuple_count(c) {
                return Err(ContextualityError::BadTupleKey {
                    context: c,
                    key: String::new(),
                    reason: format!("expected {} entries, got {}", scenario.tuple_count(c), t.len()),
                });
            }
            let mut sum = Prob::zero();
            for (i, p) in t.iter().enumerate() {
                if p.is_negative() || !p.to_f64().is_finite() {
                    return Err(ContextualityError::NegativeProbability {
                        context: c,
                        key: scenario.tuple_key(c, i),
                    });
                }
                sum = sum.add(p);
            }
            let ok = match &sum {
                Prob::Exact(r) => r.is_one(),
                Prob::Float(x) => (x - 1.).abs() <= NORMALIZATION_TOL,
            };
            if !ok {
                return Err(ContextualityError::NotNormalized {
                    context: c,
                    sum: sum.to_string(),
                });
            }
        }
        Ok(EmpiricalModel { scenario, tables })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn tables(&self) -> &[Vec<Prob>] {
        &self.tables
    }

    pub fn table(&self, c: usize) -> &[Prob] {
        &self.tables[c]
    }

    /// True when every entry is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.tables.iter().flatten().all(Prob::is_exact)
    }

    /// Probability of the tuple written as a key such as `"1,-1"`.
    pub fn probability(&self, c: usize, key: &str) -> Result<&Prob> {
        let i = self.scenario.parse_tuple_key(c, key)?;
        Ok(&self.tables[c][i])
    }

    /// Marginal distribution of `observable` in context `c` (outcome order of the scenario).
    pub fn marginal(&self, c: usize, observable: &str) -> Option<Vec<Prob>> {
        let k = self.scenario.contexts()[c].iter().position(|o| o == observable)?;
        let n = self.scenario.outcomes(observable)?.len();
        let mut m = vec![Prob::zero(); n];
        for (t, p) in self.tables[c].iter().enumerate() {
            let d = self.scenario.tuple_digits(c, t)[k];
            m[d] = m[d].add(p);
        }
        Some(m)
    }
}
