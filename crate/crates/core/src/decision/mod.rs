//! Verdicts on eventual non-negativity and positivity of `Σ w_i A_iⁿ`.
//!
//! Every entry of the sum is an exponential sum whose sign is analysed
//! exactly; analytic verdicts are then cross-checked against exact
//! simulation up to a guard horizon.

pub mod sign;
pub mod simulate;

pub use sign::{decide_ultimate_sign, SignAnalyzer, DEFAULT_GUARD};
pub use simulate::{entry_value, simulate_prefix, violation_at, violation_indices, violations, PowerSums, Violation};

use crate::algebraic::field::FieldElement;
use crate::algebraic::modulus::modulus_classes_of;
use crate::algebraic::roots::RootSet;
use crate::exact::rational::{format_rational, Rational};
use crate::exact::QMatrix;
use crate::expsum::ExponentialSum;
use crate::perturbation::{algorithm1_reduce, choose_epsilons, decompose_all, EpsilonMode, PerturbationError};
use crate::reductions::WeightedMatrixSet;
use crate::spectral::{classify, eigendecompose, eigenspace_blocks, minimal_poly, EigenDecomposition, SpectralClass};
use num_traits::Zero;
use serde_json::{json, Value};
use simulate::violates;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    NonNegative,
    Positive,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::NonNegative => "nonneg",
            Property::Positive => "pos",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Property, String> {
        match s {
            "nonneg" => Ok(Property::NonNegative),
            "pos" => Ok(Property::Positive),
            _ => Err(format!("unknown property {s:?} (expected nonneg or pos)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Auto,
    Direct,
    Perturb,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Auto => "auto",
            Route::Direct => "direct",
            Route::Perturb => "perturb",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> Result<Route, String> {
        match s {
            "auto" => Ok(Route::Auto),
            "direct" => Ok(Route::Direct),
            "perturb" => Ok(Route::Perturb),
            _ => Err(format!("unknown route {s:?} (expected auto, direct or perturb)")),
        }
    }
}

/// Residue class `n ≡ residue (mod modulus)`, `n ≥ 1`; `entry` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClass {
    pub modulus: u64,
    pub residue: u64,
    pub entry: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The value at index `n` violates the property.
    Index { n: u64, entry: Option<(usize, usize)>, value: Rational },
    /// The property fails infinitely often within this class.
    Residue { modulus: u64, residue: u64, entry: Option<(usize, usize)> },
}

impl Witness {
    fn index(&self) -> Option<u64> {
        match self {
            Witness::Index { n, .. } => Some(*n),
            Witness::Residue { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The property holds for every `n ≥ threshold`.
    Yes { threshold: u64 },
    No { witness: Witness },
    Unknown { reason: String, undecided: Vec<ResidueClass> },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Yes { .. } => "yes",
            Verdict::No { .. } => "no",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    /// Whether two verdicts contradict each other (one yes, one no).
    pub fn conflicts_with(&self, other: &Verdict) -> bool {
        (self.is_yes() && other.is_no()) || (self.is_no() && other.is_yes())
    }

    /// The verdict fields of the JSON report.
    pub fn json_fields(&self) -> serde_json::Map<String, Value> {
        let entry_json = |e: &Option<(usize, usize)>| e.map(|(p, q)| json!([p, q]));
        let mut m = serde_json::Map::new();
        m.insert("verdict".into(), json!(self.name()));
        match self {
            Verdict::Yes { threshold } => {
                m.insert("threshold".into(), json!(threshold));
            }
            Verdict::No { witness } => {
                let w = match witness {
                    Witness::Index { n, entry, value } => json!({
                        "kind": "index",
                        "n": n,
                        "entry": entry_json(entry),
                        "value": format_rational(value),
                    }),
                    Witness::Residue { modulus, residue, entry } => json!({
                        "kind": "residue",
                        "modulus": modulus,
                        "residue": residue,
                        "entry": entry_json(entry),
                    }),
                };
                m.insert("witness".into(), w);
            }
            Verdict::Unknown { reason, undecided } => {
                m.insert("reason".into(), json!(reason));
                let classes: Vec<Value> = undecided
                    .iter()
                    .map(|c| json!({"modulus": c.modulus, "residue": c.residue, "entry": entry_json(&c.entry)}))
                    .collect();
                m.insert("undecided_classes".into(), Value::Array(classes));
            }
        }
        m
    }
}

#[derive(Debug, Error)]
pub enum DecisionError {
    #[error("matrix {index} is not diagonalizable: its minimal polynomial has the repeated factor {factor}")]
    Defective { index: usize, factor: String },
    #[error("matrix {0} is not square")]
    NotSquare(usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Perturbation(#[from] PerturbationError),
}

#[derive(Clone, Debug)]
pub struct DecisionReport {
    pub property: Property,
    pub verdict: Verdict,
    pub route: Route,
    pub guard_horizon: u64,
    /// Whether the perturbation route was also run and agreed.
    pub routes_compared: bool,
}

impl DecisionReport {
    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        m.insert("property".into(), json!(self.property.name()));
        m.extend(self.verdict.json_fields());
        m.insert("route".into(), json!(self.route.name()));
        m.insert("guard_horizon".into(), json!(self.guard_horizon));
        m.insert("cross_check".into(), json!("passed"));
        Value::Object(m)
    }
}

fn check_diagonalizable(set: &WeightedMatrixSet) -> Result<(), DecisionError> {
    for (i, (_, a)) in set.pairs().iter().enumerate() {
        match classify(a) {
            Ok(SpectralClass::Defective) => {
                let mp = minimal_poly(a);
                let factor = mp.gcd(&mp.derivative()).monic();
                return Err(DecisionError::Defective { index: i + 1, factor: factor.to_string() });
            }
            Ok(_) => {}
            Err(_) => return Err(DecisionError::NotSquare(i + 1)),
        }
    }
    Ok(())
}

/// `Σ_i w_i · (entry (p, q) of A_iⁿ)` for every entry.
fn entry_sums(weighted: &[(Rational, EigenDecomposition)], k: usize) -> Vec<((usize, usize), ExponentialSum)> {
    let mut out = Vec::with_capacity(k * k);
    for p in 0..k {
        for q in 0..k {
            let s = weighted
                .iter()
                .fold(ExponentialSum::zero(), |acc, (w, d)| acc.add(&d.entry_sum(p, q).scale(w)));
            out.push(((p + 1, q + 1), s));
        }
    }
    out
}

/// The conjunction of per-entry verdicts.
fn combine(verdicts: Vec<Verdict>) -> Verdict {
    let mut best_no: Option<Witness> = None;
    let mut threshold = 1;
    let mut reason = None;
    let mut undecided = Vec::new();
    for v in verdicts {
        match v {
            Verdict::No { witness } => {
                let better = match (&best_no, witness.index()) {
                    (None, _) => true,
                    (Some(w), Some(n)) => w.index().map_or(true, |m| n < m),
                    (Some(_), None) => false,
                };
                if better {
                    best_no = Some(witness);
                }
            }
            Verdict::Yes { threshold: t } => threshold = threshold.max(t),
            Verdict::Unknown { reason: r, undecided: u } => {
                reason.get_or_insert(r);
                undecided.extend(u);
            }
        }
    }
    if let Some(witness) = best_no {
        return Verdict::No { witness };
    }
    match reason {
        Some(reason) => Verdict::Unknown { reason, undecided },
        None => Verdict::Yes { threshold },
    }
}

fn analyze_entries(sums: &[((usize, usize), ExponentialSum)], prop: Property, guard: u64) -> Verdict {
    let mut analyzer = SignAnalyzer::new(guard);
    combine(sums.iter().map(|(e, s)| analyzer.analyze(s, prop, Some(*e))).collect())
}

fn decide_direct(set: &WeightedMatrixSet, prop: Property, guard: u64) -> Result<Verdict, DecisionError> {
    let decs = decompose_all(set)?;
    let weighted: Vec<_> = set.pairs().iter().map(|(w, _)| w.clone()).zip(decs).collect();
    Ok(analyze_entries(&entry_sums(&weighted, set.dim()), prop, guard))
}

/// Through the reduction to simple matrices: the reduced sum is the original
/// times a positive scalar sequence, so signs agree at every `n`.
fn decide_perturbed(set: &WeightedMatrixSet, prop: Property, guard: u64) -> Result<Verdict, DecisionError> {
    let decs = decompose_all(set)?;
    let plan = choose_epsilons(set, &decs, EpsilonMode::Exact)?;
    let reduction = algorithm1_reduce(set, &decs, &plan)?;
    let mut weighted = Vec::with_capacity(reduction.pairs.len());
    for p in &reduction.pairs {
        let d = eigendecompose(&p.matrix).map_err(PerturbationError::from)?;
        weighted.push((p.weight.clone(), d));
    }
    Ok(analyze_entries(&entry_sums(&weighted, set.dim()), prop, guard))
}

/// Small enough that `auto` also runs the perturbation route.
fn small_input(set: &WeightedMatrixSet) -> bool {
    set.dim() <= 4 && set.len() <= 3
}

/// Checks an analytic verdict against exact simulation, and rewrites index
/// witnesses with the exact value of the original sum.
fn guard_check(set: &WeightedMatrixSet, prop: Property, verdict: Verdict, guard: u64) -> Result<Verdict, DecisionError> {
    match verdict {
        Verdict::Yes { threshold } => {
            let end = threshold.saturating_add(guard).min(guard.saturating_mul(4)).max(guard);
            for (n, m) in PowerSums::new(set).take(end as usize) {
                if n < threshold {
                    continue;
                }
                for v in m.entries() {
                    if violates(v, prop) {
                        return Err(DecisionError::Internal(format!(
                            "verdict yes from n = {threshold} but simulation violates at n = {n}"
                        )));
                    }
                }
            }
            Ok(Verdict::Yes { threshold })
        }
        Verdict::No { witness: Witness::Index { n, entry, .. } } => {
            let e = entry.expect("matrix witnesses name an entry");
            let value = entry_value(set, n, e);
            if !violates(&value, prop) {
                return Err(DecisionError::Internal(format!(
                    "witness n = {n} at entry {e:?} does not violate (value {})",
                    format_rational(&value)
                )));
            }
            Ok(Verdict::No { witness: Witness::Index { n, entry, value } })
        }
        v => Ok(v),
    }
}

pub fn decide(set: &WeightedMatrixSet, prop: Property, route: Route, guard: u64) -> Result<DecisionReport, DecisionError> {
    check_diagonalizable(set)?;
    let guard = guard.max(1);
    let mut routes_compared = false;
    let verdict = match route {
        Route::Direct => decide_direct(set, prop, guard)?,
        Route::Perturb => decide_perturbed(set, prop, guard)?,
        Route::Auto => {
            let v = decide_direct(set, prop, guard)?;
            if small_input(set) {
                let w = decide_perturbed(set, prop, guard)?;
                if v.conflicts_with(&w) {
                    return Err(DecisionError::Internal(format!(
                        "direct route says {} but perturbation route says {}",
                        v.name(),
                        w.name()
                    )));
                }
                routes_compared = true;
            }
            v
        }
    };
    let verdict = guard_check(set, prop, verdict, guard)?;
    Ok(DecisionReport { property: prop, verdict, route, guard_horizon: guard, routes_compared })
}

/// Sign of a nonzero real value given by an embedded field element.
fn embedded_sign(c: &FieldElement) -> Ordering {
    if c.is_zero_at_embedding() {
        return Ordering::Equal;
    }
    let mut bits = 16;
    loop {
        let z = c.enclosure(bits);
        if z.re.lo > Rational::zero() {
            return Ordering::Greater;
        }
        if z.re.hi < Rational::zero() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

fn uniform_sign(values: &[FieldElement]) -> bool {
    let signs: Vec<Ordering> = values.iter().map(embedded_sign).collect();
    signs.iter().all(|&s| s == Ordering::Greater) || signs.iter().all(|&s| s == Ordering::Less)
}

/// Eventual positivity of a single matrix: the spectral radius must be a
/// simple, strictly dominant eigenvalue whose left and right eigenvectors can
/// be taken entrywise positive.
pub fn ep_mat(a: &QMatrix, guard: u64) -> Result<Verdict, DecisionError> {
    if !a.is_square() {
        return Err(DecisionError::NotSquare(1));
    }
    let set = WeightedMatrixSet::new(vec![(Rational::from_integer(1.into()), a.clone())]).expect("square matrix");
    let no = |guard: u64| {
        let witness = match simulate_prefix(&set, guard, Property::Positive) {
            Some(v) => Witness::Index { n: v.n, entry: Some(v.entry), value: v.value },
            None => Witness::Residue { modulus: 1, residue: 0, entry: None },
        };
        Ok(Verdict::No { witness })
    };
    let cp = a.char_poly().map_err(|_| DecisionError::NotSquare(1))?;
    let simple_part = cp.squarefree_decomposition().into_iter().next().expect("nonconstant char poly");
    let rs = RootSet::new(&cp.squarefree_part());
    let classes = modulus_classes_of(&rs);
    let top = &classes[0];
    if top.roots.len() != 1 || top.modulus_squared.is_zero() {
        return no(guard);
    }
    let i = top.roots[0];
    if !rs.is_real(i) || rs.enclosure(i, 16).re.hi < Rational::zero() || !rs.is_root_of(i, &simple_part) {
        return no(guard);
    }
    // the dominant root is the largest real root of its eigenvector block
    let block = eigenspace_blocks(a, &simple_part, 1)
        .into_iter()
        .find(|b| rs.is_root_of(i, &b.modulus))
        .expect("dominant root lies in some block");
    let j = (0..block.roots.len()).rev().find(|&j| block.roots.is_real(j)).expect("real root");
    let embed = |v: &Vec<crate::exact::QPoly>| -> Vec<FieldElement> {
        v.iter().map(|e| FieldElement::embedded(&block.roots, j, e)).collect()
    };
    if !uniform_sign(&embed(&block.cols[0])) || !uniform_sign(&embed(&block.rows[0])) {
        return no(guard);
    }
    if classify(a) != Ok(SpectralClass::Defective) {
        let report = decide(&set, Property::Positive, Route::Direct, guard)?;
        return match report.verdict {
            Verdict::Yes { threshold } => Ok(Verdict::Yes { threshold }),
            v => Err(DecisionError::Internal(format!("dominant eigenvector test says yes, analysis says {}", v.name()))),
        };
    }
    // Defective elsewhere: the dominant term still wins, with the threshold
    // read off the guard horizon.
    let last = violation_indices(&set, guard, Property::Positive).last().copied();
    Ok(Verdict::Yes { threshold: last.map_or(1, |n| n + 1) })
}
