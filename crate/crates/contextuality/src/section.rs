use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::disturbance::{check_no_disturbance, NoDisturbanceReport, DISTURBANCE_TOL};
use crate::error::{ContextualityError, Result};
use crate::lp::{minimize, Columns, Scalar, Solution};
use crate::model::EmpiricalModel;
use crate::prob::Prob;
use crate::scenario::MeasurementScenario;

pub const DEFAULT_MAX_ASSIGNMENTS: u128 = 1_000_000;
pub const FEASIBILITY_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    /// Exact when every table entry is rational, floating otherwise.
    #[default]
    Auto,
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    pub arithmetic: Arithmetic,
    pub max_assignments: u128,
    pub tolerance: f64,
}

impl Default for SolveOptions {
    /// The assignment cap honours `QFRAME_MAX_ASSIGNMENTS` when set.
    fn default() -> Self {
        let cap = std::env::var("QFRAME_MAX_ASSIGNMENTS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_ASSIGNMENTS);
        SolveOptions {
            arithmetic: Arithmetic::Auto,
            max_assignments: cap,
            tolerance: FEASIBILITY_TOL,
        }
    }
}

/// A value for every observable.
pub type GlobalAssignment = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedAssignment {
    pub assignment: GlobalAssignment,
    pub weight: Prob,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualEntry {
    /// `None` for the normalisation row.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple: Option<String>,
    pub value: Prob,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SectionCertificate {
    /// A global distribution whose marginals are the model.
    Distribution { weights: Vec<WeightedAssignment> },
    /// `z` with `z·A_g ≥ 0` for every global assignment `g` and `z·p < 0`.
    Farkas { dual: Vec<DualEntry>, margin: Prob },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalSectionReport {
    pub feasible: bool,
    pub arithmetic: Arithmetic,
    /// Set when the model fails no-disturbance; the verdict is still computed.
    pub signaling: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub certificate: SectionCertificate,
}

/// Constraint columns: one per global assignment, rows are
/// `(context, tuple)` pairs followed by an optional normalisation row.
struct AssignmentColumns<'a> {
    scenario: &'a MeasurementScenario,
    radix: Vec<usize>,
    context_obs: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    normalization: Option<usize>,
    count: usize,
}

impl<'a> AssignmentColumns<'a> {
    fn new(scenario: &'a MeasurementScenario, normalization: bool, cap: u128) -> Result<Self> {
        let needed = scenario.assignment_count();
        if needed > cap {
            return Err(ContextualityError::TooLarge { needed, cap });
        }
        let radix: Vec<usize> = scenario.observables().values().map(Vec::len).collect();
        let context_obs = scenario
            .contexts()
            .iter()
            .map(|c| c.iter().map(|o| scenario.observable_index(o)).collect())
            .collect();
        let mut offsets = Vec::new();
        let mut acc = 0;
        for c in 0..scenario.contexts().len() {
            offsets.push(acc);
            acc += scenario.tuple_count(c);
        }
        Ok(AssignmentColumns {
            scenario,
            radix,
            context_obs,
            offsets,
            normalization: normalization.then_some(acc),
            count: needed as usize,
        })
    }

    fn rows(&self) -> usize {
        self.offsets.last().map_or(0, |&o| o + self.scenario.tuple_count(self.offsets.len() - 1))
            + self.normalization.is_some() as usize
    }

    fn digits(&self, mut j: usize) -> Vec<usize> {
        let mut d = vec![0; self.radix.len()];
        for k in (0..self.radix.len()).rev() {
            d[k] = j % self.radix[k];
            j /= self.radix[k];
        }
        d
    }

    fn assignment(&self, j: usize) -> GlobalAssignment {
        self.digits(j)
            .iter()
            .zip(self.scenario.observables())
            .map(|(&d, (o, outs))| (o.clone(), outs[d].clone()))
            .collect()
    }

    fn row_label(&self, r: usize) -> (Option<usize>, Option<String>) {
        if Some(r) == self.normalization {
            return (None, None);
        }
        let c = self.offsets.iter().rposition(|&o| o <= r).expect("row in range");
        (Some(c), Some(self.scenario.tuple_key(c, r - self.offsets[c])))
    }
}

impl Columns for AssignmentColumns<'_> {
    fn count(&self) -> usize {
        self.count
    }

    fn rows_of(&self, j: usize, out: &mut Vec<usize>) {
        let d = self.digits(j);
        for (c, obs) in self.context_obs.iter().enumerate() {
            let digits: Vec<usize> = obs.iter().map(|&k| d[k]).collect();
            out.push(self.offsets[c] + self.scenario.tuple_index(c, &digits));
        }
        if let Some(r) = self.normalization {
            out.push(r);
        }
    }
}

fn rhs(m: &EmpiricalModel, normalization: bool) -> Vec<Prob> {
    let mut b: Vec<Prob> = m.tables().iter().flatten().cloned().collect();
    if normalization {
        b.push(Prob::one());
    }
    b
}

fn resolve(m: &EmpiricalModel, a: Arithmetic) -> Result<Arithmetic> {
    match a {
        Arithmetic::Auto if m.is_exact() => Ok(Arithmetic::Exact),
        Arithmetic::Auto => Ok(Arithmetic::Float),
        Arithmetic::Exact if !m.is_exact() => Err(ContextualityError::NotExact),
        other => Ok(other),
    }
}

fn exact_rhs(b: &[Prob]) -> Vec<BigRational> {
    b.iter().map(|p| p.as_exact().expect("exact model").clone()).collect()
}

/// Decides whether a global distribution over assignments reproduces every
/// context table, with a self-checking certificate either way.
pub fn has_global_section(m: &EmpiricalModel, opts: &SolveOptions) -> Result<GlobalSectionReport> {
    let arithmetic = resolve(m, opts.arithmetic)?;
    let cols = AssignmentColumns::new(m.scenario(), true, opts.max_assignments)?;
    let b = rhs(m, true);
    let nd = check_no_disturbance(m, DISTURBANCE_TOL);
    let (feasible, certificate) = match arithmetic {
        Arithmetic::Exact => {
            let b = exact_rhs(&b);
            let sol = minimize(&cols, &b, &<BigRational as Zero>::zero(), &BigRational::from_integer(1.into()), false, MAX_ITERATIONS)?;
            section_certificate(&cols, &sol, sol.objective.is_zero(), &b, Prob::Exact)
        }
        _ => {
            let b: Vec<f64> = b.iter().map(Prob::to_f64).collect();
            let sol = minimize(&cols, &b, &0., &1., false, MAX_ITERATIONS)?;
            section_certificate(&cols, &sol, sol.objective <= opts.tolerance, &b, |x: f64| Prob::Float(x))
        }
    };
    Ok(GlobalSectionReport {
        feasible,
        arithmetic,
        signaling: !nd.passes,
        note: (!nd.passes).then(|| "signaling: section question ill-posed".to_string()),
        certificate,
    })
}

fn section_certificate<S: Scalar>(
    cols: &AssignmentColumns,
    sol: &Solution<S>,
    feasible: bool,
    b: &[S],
    wrap: impl Fn(S) -> Prob,
) -> (bool, SectionCertificate) {
    if feasible {
        let weights = sol
            .structural_values()
            .into_iter()
            .map(|(j, w)| WeightedAssignment {
                assignment: cols.assignment(j),
                weight: wrap(w),
            })
            .collect();
        return (true, SectionCertificate::Distribution { weights });
    }
    // Phase I optimality gives y·A_j ≤ 0 and y·b > 0; z = −y, scaled to max |z_i| = 1
    let mut z: Vec<S> = sol.duals.iter().map(|v| S::zero().sub(v)).collect();
    let scale = z
        .iter()
        .map(|v| if v.neg() { S::zero().sub(v) } else { v.clone() })
        .fold(S::zero(), |a, v| if a.lt(&v) { v } else { a });
    if scale.pos() {
        z = z.iter().map(|v| v.div(&scale)).collect();
    }
    let margin = z.iter().zip(b).fold(S::zero(), |acc, (zi, bi)| acc.add(&zi.mul(bi)));
    let dual = z
        .into_iter()
        .enumerate()
        .map(|(r, v)| {
            let (context, tuple) = cols.row_label(r);
            DualEntry {
                context,
                tuple,
                value: wrap(v),
            }
        })
        .collect();
    (false, SectionCertificate::Farkas { dual, margin: wrap(margin) })
}

/// Re-checks a certificate against the model: marginals for a distribution,
/// separation over every global assignment for a Farkas vector.
pub fn verify_section_certificate(m: &EmpiricalModel, cert: &SectionCertificate, tol: f64) -> std::result::Result<(), String> {
    let s = m.scenario();
    let cols = AssignmentColumns::new(s, true, u128::MAX).map_err(|e| e.to_string())?;
    match cert {
        SectionCertificate::Distribution { weights } => {
            let mut total = Prob::zero();
            let mut tables: Vec<Vec<Prob>> = (0..s.contexts().len()).map(|c| vec![Prob::zero(); s.tuple_count(c)]).collect();
            for w in weights {
                if w.weight.is_negative() {
                    return Err("negative weight".into());
                }
                total = total.add(&w.weight);
                for (c, ctx) in s.contexts().iter().enumerate() {
                    let digits: Vec<usize> = ctx
                        .iter()
                        .map(|o| {
                            let v = w.assignment.get(o).ok_or(format!("assignment misses `{o}`"))?;
                            s.outcomes(o).unwrap().iter().position(|x| x == v).ok_or(format!("bad outcome `{v}`"))
                        })
                        .collect::<std::result::Result<_, String>>()?;
                    let t = s.tuple_index(c, &digits);
                    tables[c][t] = tables[c][t].add(&w.weight);
                }
            }
            if !close(&total, &Prob::one(), tol) {
                return Err(format!("weights sum to {total}"));
            }
            for (c, t) in tables.iter().enumerate() {
                for (i, p) in t.iter().enumerate() {
                    if !close(p, &m.table(c)[i], tol) {
                        return Err(format!("context {c} tuple {} has {p}, model has {}", s.tuple_key(c, i), m.table(c)[i]));
                    }
                }
            }
            Ok(())
        }
        SectionCertificate::Farkas { dual, .. } => {
            if dual.len() != cols.rows() {
                return Err(format!("expected {} dual entries, got {}", cols.rows(), dual.len()));
            }
            let z: Vec<&Prob> = dual.iter().map(|d| &d.value).collect();
            let b = rhs(m, true);
            let margin = z.iter().zip(&b).fold(Prob::zero(), |acc, (zi, bi)| acc.add(&zi.mul(bi)));
            let strict = match &margin {
                Prob::Exact(r) => r.is_negative(),
                Prob::Float(x) => *x < -tol,
            };
            if !strict {
                return Err(format!("z·p = {margin} is not negative"));
            }
            let mut rows = Vec::new();
            for j in 0..cols.count() {
                rows.clear();
                cols.rows_of(j, &mut rows);
                let v = rows.iter().fold(Prob::zero(), |acc, &r| acc.add(z[r]));
                let ok = match &v {
                    Prob::Exact(r) => !r.is_negative(),
                    Prob::Float(x) => *x >= -tol,
                };
                if !ok {
                    return Err(format!("z·A is {v} on assignment {:?}", cols.assignment(j)));
                }
            }
            Ok(())
        }
    }
}

fn close(a: &Prob, b: &Prob, tol: f64) -> bool {
    match (a, b) {
        (Prob::Exact(x), Prob::Exact(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() <= tol,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextualFraction {
    /// `1 −` the largest noncontextual weight.
    pub value: Prob,
    pub noncontextual_weight: Prob,
    pub arithmetic: Arithmetic,
    /// The optimal subnormalised noncontextual part.
    pub part: Vec<WeightedAssignment>,
}

/// Largest `Σλ` with `Σ_g λ_g [g|c = s] ≤ p_c(s)`; the fraction is `1 − Σλ`.
pub fn contextual_fraction(m: &EmpiricalModel, opts: &SolveOptions) -> Result<ContextualFraction> {
    let arithmetic = resolve(m, opts.arithmetic)?;
    let cols = AssignmentColumns::new(m.scenario(), false, opts.max_assignments)?;
    let b = rhs(m, false);
    match arithmetic {
        Arithmetic::Exact => {
            let b = exact_rhs(&b);
            let minus_one = BigRational::from_integer((-1).into());
            let sol = minimize(&cols, &b, &minus_one, &<BigRational as Zero>::zero(), true, MAX_ITERATIONS)?;
            let w = -sol.objective.clone();
            Ok(ContextualFraction {
                value: Prob::Exact(BigRational::from_integer(1.into()) - &w),
                noncontextual_weight: Prob::Exact(w),
                arithmetic,
                part: parts(&cols, &sol, Prob::Exact),
            })
        }
        _ => {
            let b: Vec<f64> = b.iter().map(Prob::to_f64).collect();
            let sol = minimize(&cols, &b, &-1., &0., true, MAX_ITERATIONS)?;
            let w = (-sol.objective).clamp(0., 1.);
            Ok(ContextualFraction {
                value: Prob::Float((1. - w).clamp(0., 1.)),
                noncontextual_weight: Prob::Float(w),
                arithmetic,
                part: parts(&cols, &sol, |x: f64| Prob::Float(x)),
            })
        }
    }
}

fn parts<S: Scalar>(cols: &AssignmentColumns, sol: &Solution<S>, wrap: impl Fn(S) -> Prob) -> Vec<WeightedAssignment> {
    sol.structural_values()
        .into_iter()
        .map(|(j, w)| WeightedAssignment {
            assignment: cols.assignment(j),
            weight: wrap(w),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextualityReport {
    pub no_disturbance: NoDisturbanceReport,
    pub noncontextual: bool,
    pub section: GlobalSectionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contextual_fraction: Option<ContextualFraction>,
}

/// No-disturbance, global section and (optionally) contextual fraction together.
pub fn analyze(m: &EmpiricalModel, opts: &SolveOptions, with_fraction: bool) -> Result<ContextualityReport> {
    let no_disturbance = check_no_disturbance(m, DISTURBANCE_TOL);
    let section = has_global_section(m, opts)?;
    let contextual_fraction = if with_fraction {
        Some(contextual_fraction(m, opts)?)
    } else {
        None
    };
    Ok(ContextualityReport {
        no_disturbance,
        noncontextual: section.feasible,
        section,
        contextual_fraction,
    })
}

/// Marginalises a distribution over global assignments into an empirical model.
pub fn model_from_global(scenario: &MeasurementScenario, weights: &[WeightedAssignment]) -> Result<EmpiricalModel> {
    let mut tables: Vec<Vec<Prob>> = (0..scenario.contexts().len())
        .map(|c| vec![Prob::zero(); scenario.tuple_count(c)])
        .collect();
    for w in weights {
        for (c, ctx) in scenario.contexts().iter().enumerate() {
            let mut digits = Vec::with_capacity(ctx.len());
            for o in ctx {
                let v = w.assignment.get(o).ok_or_else(|| ContextualityError::UnknownObservable {
                    context: c,
                    observable: o.clone(),
                })?;
                let d = scenario
                    .outcomes(o)
                    .and_then(|outs| outs.iter().position(|x| x == v))
                    .ok_or_else(|| ContextualityError::BadTupleKey {
                        context: c,
                        key: v.clone(),
                        reason: format!("not an outcome of `{o}`"),
                    })?;
                digits.push(d);
            }
            let t = scenario.tuple_index(c, &digits);
            tables[c][t] = tables[c][t].add(&w.weight);
        }
    }
    EmpiricalModel::new(scenario.clone(), tables)
}
