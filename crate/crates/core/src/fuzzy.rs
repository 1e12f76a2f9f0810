//! Fuzzification and max–min inference without a defuzzification stage.
//!
//! A [`RuleBase`] maps crisp inputs to one [`AggregatedMembership`] per output
//! variable. The aggregated function is kept lazy (firing strengths plus the
//! consequent curves) and evaluated on demand, so downstream consumers can
//! sample it on whatever grid they need without loss.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaussian or sigmoid membership curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum MembershipFunction {
    /// `exp(-(x - center)^2 / (2 sigma^2))`
    Gaussian { center: f64, sigma: f64 },
    /// `1 / (1 + exp(-slope (x - inflection)))`; increasing iff `slope > 0`.
    Sigmoid { slope: f64, inflection: f64 },
}

impl MembershipFunction {
    pub const fn gaussian(center: f64, sigma: f64) -> Self {
        MembershipFunction::Gaussian { center, sigma }
    }

    pub const fn sigmoid(slope: f64, inflection: f64) -> Self {
        MembershipFunction::Sigmoid { slope, inflection }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MembershipFunction::Gaussian { center, sigma } => {
                if !center.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
                    return Err(Error::invalid(format!(
                        "gaussian needs finite center and sigma > 0 (center={center}, sigma={sigma})"
                    )));
                }
            }
            MembershipFunction::Sigmoid { slope, inflection } => {
                if !slope.is_finite() || !inflection.is_finite() {
                    return Err(Error::invalid(format!(
                        "sigmoid needs finite parameters (slope={slope}, inflection={inflection})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Membership degree of `x`, checked.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if !x.is_finite() {
            return Err(Error::invalid(format!("membership input must be finite, got {x}")));
        }
        Ok(self.degree(x))
    }

    /// Unchecked evaluation for already-validated curves.
    #[inline]
    pub(crate) fn degree(&self, x: f64) -> f64 {
        match *self {
            MembershipFunction::Gaussian { center, sigma } => {
                let d = x - center;
                (-(d * d) / (2.0 * sigma * sigma)).exp()
            }
            MembershipFunction::Sigmoid { slope, inflection } => {
                1.0 / (1.0 + (-slope * (x - inflection)).exp())
            }
        }
    }
}

/// Evaluates a membership function at `x`.
pub fn eval_mf(mf: &MembershipFunction, x: f64) -> Result<f64> {
    mf.eval(x)
}

/// Closed interval `[lo, hi]` a linguistic variable is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Universe {
    lo: f64,
    hi: f64,
}

impl Universe {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid(format!("degenerate universe [{lo}, {hi}]")));
        }
        Ok(Universe { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lo..=self.hi).contains(&x)
    }
}

impl TryFrom<[f64; 2]> for Universe {
    type Error = Error;

    fn try_from([lo, hi]: [f64; 2]) -> Result<Self> {
        Universe::new(lo, hi)
    }
}

impl From<Universe> for [f64; 2] {
    fn from(u: Universe) -> Self {
        [u.lo, u.hi]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinguisticVariable {
    pub name: String,
    pub universe: Universe,
    pub terms: IndexMap<String, MembershipFunction>,
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        universe: Universe,
        terms: impl IntoIterator<Item = (&'static str, MembershipFunction)>,
    ) -> Self {
        LinguisticVariable {
            name: name.into(),
            universe,
            terms: terms.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn term(&self, label: &str) -> Result<&MembershipFunction> {
        self.terms.get(label).ok_or_else(|| {
            Error::config(format!("variable `{}` has no term `{label}`", self.name))
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::config(format!("variable `{}` declares no terms", self.name)));
        }
        for (label, mf) in &self.terms {
            mf.validate()
                .map_err(|e| Error::config(format!("{}.{label}: {e}", self.name)))?;
        }
        Ok(())
    }
}

/// `if <antecedent> then <consequent>`; variables absent from the antecedent
/// are don't-cares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    #[serde(rename = "if")]
    pub antecedent: IndexMap<String, String>,
    #[serde(rename = "then")]
    pub consequent: IndexMap<String, String>,
}

impl Rule {
    pub fn new<'a>(
        antecedent: impl IntoIterator<Item = (&'a str, &'a str)>,
        consequent: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Self {
        let own = |(k, v): (&str, &str)| (k.to_string(), v.to_string());
        Rule {
            antecedent: antecedent.into_iter().map(own).collect(),
            consequent: consequent.into_iter().map(own).collect(),
        }
    }
}

/// Source of crisp input values keyed by variable name.
pub trait CrispInputs {
    fn crisp(&self, variable: &str) -> Option<f64>;
}

impl CrispInputs for BTreeMap<String, f64> {
    fn crisp(&self, variable: &str) -> Option<f64> {
        self.get(variable).copied()
    }
}

impl CrispInputs for HashMap<String, f64> {
    fn crisp(&self, variable: &str) -> Option<f64> {
        self.get(variable).copied()
    }
}

impl CrispInputs for [(&str, f64)] {
    fn crisp(&self, variable: &str) -> Option<f64> {
        self.iter().find(|(k, _)| *k == variable).map(|&(_, v)| v)
    }
}

impl<const N: usize> CrispInputs for [(&str, f64); N] {
    fn crisp(&self, variable: &str) -> Option<f64> {
        self.as_slice().crisp(variable)
    }
}

fn crisp_value<I: CrispInputs + ?Sized>(inputs: &I, variable: &str) -> Result<f64> {
    let x = inputs
        .crisp(variable)
        .ok_or_else(|| Error::invalid(format!("missing crisp input for `{variable}`")))?;
    if !x.is_finite() {
        return Err(Error::invalid(format!("input `{variable}` is not finite ({x})")));
    }
    Ok(x)
}

/// Firing strength of one rule: the minimum antecedent membership, skipping
/// don't-care variables. Inputs are clamped to their variable's universe.
pub fn firing_strength<I: CrispInputs + ?Sized>(
    rule: &Rule,
    inputs: &I,
    vars: &IndexMap<String, LinguisticVariable>,
) -> Result<f64> {
    let mut strength = 1.0_f64;
    for (var_name, label) in &rule.antecedent {
        let var = vars
            .get(var_name)
            .ok_or_else(|| Error::config(format!("rule references unknown variable `{var_name}`")))?;
        let mf = var.term(label)?;
        let x = var.universe.clamp(crisp_value(inputs, var_name)?);
        strength = strength.min(mf.degree(x));
    }
    Ok(strength)
}

#[derive(Clone, Debug)]
struct CompiledRule {
    // (input index, term index)
    antecedent: Vec<(usize, usize)>,
    // term index per output variable
    consequent: Vec<usize>,
}

/// Validated rule set over declared input and output variables.
#[derive(Clone, Debug)]
pub struct RuleBase {
    inputs: Vec<LinguisticVariable>,
    outputs: Vec<LinguisticVariable>,
    rules: Vec<Rule>,
    compiled: Vec<CompiledRule>,
}

fn index_term(var: &LinguisticVariable, label: &str) -> Result<usize> {
    var.terms
        .get_index_of(label)
        .ok_or_else(|| Error::config(format!("variable `{}` has no term `{label}`", var.name)))
}

impl RuleBase {
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        outputs: Vec<LinguisticVariable>,
        rules: Vec<Rule>,
    ) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::config("rule base declares no output variables"));
        }
        for v in inputs.iter().chain(&outputs) {
            v.validate()?;
        }
        let mut compiled = Vec::with_capacity(rules.len());
        for (k, rule) in rules.iter().enumerate() {
            let ctx = |e: Error| Error::config(format!("rule {}: {e}", k + 1));
            let mut antecedent = Vec::with_capacity(rule.antecedent.len());
            for (var_name, label) in &rule.antecedent {
                let i = inputs
                    .iter()
                    .position(|v| &v.name == var_name)
                    .ok_or_else(|| ctx(Error::config(format!("unknown input `{var_name}`"))))?;
                antecedent.push((i, index_term(&inputs[i], label).map_err(ctx)?));
            }
            if let Some(extra) = rule
                .consequent
                .keys()
                .find(|name| !outputs.iter().any(|o| &o.name == *name))
            {
                return Err(ctx(Error::config(format!("unknown output `{extra}`"))));
            }
            let mut consequent = Vec::with_capacity(outputs.len());
            for out in &outputs {
                let label = rule.consequent.get(&out.name).ok_or_else(|| {
                    ctx(Error::config(format!("consequent misses output `{}`", out.name)))
                })?;
                consequent.push(index_term(out, label).map_err(ctx)?);
            }
            compiled.push(CompiledRule { antecedent, consequent });
        }
        Ok(RuleBase { inputs, outputs, rules, compiled })
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[LinguisticVariable] {
        &self.outputs
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Input variables keyed by name, as expected by [`firing_strength`].
    pub fn input_map(&self) -> IndexMap<String, LinguisticVariable> {
        self.inputs.iter().map(|v| (v.name.clone(), v.clone())).collect()
    }

    /// Firing strength of every rule, in rule order.
    pub fn firing_strengths<I: CrispInputs + ?Sized>(&self, inputs: &I) -> Result<Vec<f64>> {
        // Only the variables some rule actually reads must be present.
        let mut degrees: Vec<Option<Vec<f64>>> = vec![None; self.inputs.len()];
        for rule in &self.compiled {
            for &(i, _) in &rule.antecedent {
                if degrees[i].is_none() {
                    let var = &self.inputs[i];
                    let x = var.universe.clamp(crisp_value(inputs, &var.name)?);
                    degrees[i] = Some(var.terms.values().map(|mf| mf.degree(x)).collect());
                }
            }
        }
        Ok(self
            .compiled
            .iter()
            .map(|rule| {
                rule.antecedent.iter().fold(1.0_f64, |h, &(i, t)| {
                    // populated above for every referenced input
                    h.min(degrees[i].as_ref().map_or(1.0, |d| d[t]))
                })
            })
            .collect())
    }
}

/// Runs max–min inference and returns one aggregated membership per output
/// variable, keyed by variable name in declaration order.
pub fn evaluate_rulebase<I: CrispInputs + ?Sized>(
    rb: &RuleBase,
    inputs: &I,
) -> Result<IndexMap<String, AggregatedMembership>> {
    let strengths = rb.firing_strengths(inputs)?;
    Ok(rb
        .outputs
        .iter()
        .enumerate()
        .map(|(o, var)| {
            let fired = rb
                .compiled
                .iter()
                .zip(&strengths)
                .map(|(rule, &h)| (h, rule.consequent[o]));
            (var.name.clone(), AggregatedMembership::from_terms(var, fired))
        })
        .collect())
}

/// Un-defuzzified output of a rule base for one output variable:
/// `y ↦ max_k min(H_k, μ_k(y))`.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregatedMembership {
    variable: String,
    universe: Universe,
    clipped: Vec<(f64, MembershipFunction)>,
    // Rules sharing a consequent collapse to min(max H, μ); exact under IEEE min/max.
    merged: Vec<(f64, MembershipFunction)>,
}

impl AggregatedMembership {
    /// Builds the aggregate from explicit `(strength, consequent)` pairs.
    pub fn new(
        variable: impl Into<String>,
        universe: Universe,
        clipped: Vec<(f64, MembershipFunction)>,
    ) -> Result<Self> {
        let mut merged: Vec<(f64, MembershipFunction)> = Vec::new();
        for &(h, mf) in &clipped {
            if !(0.0..=1.0).contains(&h) {
                return Err(Error::invalid(format!("firing strength {h} outside [0, 1]")));
            }
            mf.validate()?;
            match merged.iter_mut().find(|(_, m)| *m == mf) {
                Some(slot) => slot.0 = slot.0.max(h),
                None => merged.push((h, mf)),
            }
        }
        merged.retain(|&(h, _)| h > 0.0);
        Ok(AggregatedMembership { variable: variable.into(), universe, clipped, merged })
    }

    fn from_terms(var: &LinguisticVariable, fired: impl Iterator<Item = (f64, usize)>) -> Self {
        let mut best = vec![0.0_f64; var.terms.len()];
        let mut clipped = Vec::new();
        for (h, t) in fired {
            best[t] = best[t].max(h);
            clipped.push((h, var.terms[t]));
        }
        let merged = best
            .iter()
            .zip(var.terms.values())
            .filter(|(&h, _)| h > 0.0)
            .map(|(&h, &mf)| (h, mf))
            .collect();
        AggregatedMembership {
            variable: var.name.clone(),
            universe: var.universe,
            clipped,
            merged,
        }
    }

    /// Identically-zero aggregate, e.g. for a behavior that is switched off.
    pub fn zero(variable: impl Into<String>, universe: Universe) -> Self {
        AggregatedMembership {
            variable: variable.into(),
            universe,
            clipped: Vec::new(),
            merged: Vec::new(),
        }
    }

    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        self.merged
            .iter()
            .fold(0.0_f64, |acc, (h, mf)| acc.max(h.min(mf.degree(y))))
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// One `(firing strength, consequent)` pair per rule, in rule order.
    pub fn pairs(&self) -> &[(f64, MembershipFunction)] {
        &self.clipped
    }

    /// Largest firing strength over all rules; an upper bound of [`Self::eval`].
    pub fn max_strength(&self) -> f64 {
        self.clipped.iter().fold(0.0, |acc, &(h, _)| acc.max(h))
    }

    pub fn is_inactive(&self) -> bool {
        self.merged.is_empty()
    }
}
