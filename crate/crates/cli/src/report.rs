//! JSON report shapes. Every rational is a `"p/q"` string; field order is
//! declaration order.

use std::collections::BTreeMap;

use almost_core::{rational, Allocation, Coalition, Rational};
use serde::Serialize;

pub fn q(v: &Rational) -> String {
    rational::format(v)
}

pub fn shares(x: &Allocation) -> Vec<String> {
    x.shares().iter().map(q).collect()
}

/// Rounded values keyed by field name, only with `--decimal`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Approximate(BTreeMap<String, f64>);

impl Approximate {
    pub fn add(&mut self, key: &str, v: &Rational) {
        self.0.insert(key.to_string(), rational::approx_f64(v));
    }

    pub fn add_opt(&mut self, key: &str, v: Option<&Rational>) {
        if let Some(v) = v {
            self.add(key, v);
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceInfo {
    pub name: Option<String>,
    pub format: &'static str,
    pub agents: usize,
    pub monotonized: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub holds: bool,
    /// Coalition keys of the smallest counterexample.
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Structure {
    pub subadditive: Check,
    pub submodular: Check,
    pub monotone: Check,
    /// `c(N ∖ {k}) ≤ c(N)` for every `k`; the witness is the first failing agent.
    pub last_monotone: Check,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonnegSection {
    pub optimum: String,
    pub allocation: Vec<String>,
    /// `(1 + 1/(n−1))·c(N)`, reported when the last-monotone condition holds.
    pub bound: Option<String>,
    pub bound_tight: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub command: &'static str,
    pub instance: InstanceInfo,
    pub structure: Structure,
    pub grand_cost: String,
    pub core_nonempty: bool,
    pub core_element: Option<Vec<String>>,
    pub ac_opt: String,
    pub ac_allocation: Vec<String>,
    pub ac_opt_nonneg: String,
    pub ac_nonneg_allocation: Vec<String>,
    pub eps_strong: String,
    pub strong_witness: Vec<String>,
    pub eps_weak: String,
    pub weak_witness: Vec<String>,
    pub eps_mult: Option<String>,
    pub mult_witness: Option<Vec<String>>,
    pub gamma: Option<String>,
    pub gamma_witness: Option<Vec<String>>,
    pub delta_cos: String,
    pub cos_witness: Vec<String>,
    pub delta_ec: String,
    pub ec_allocation: Vec<String>,
    pub ec_subsidy: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonneg: Option<NonnegSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximate: Option<Approximate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub agent: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    /// 1-based agents in insertion order.
    pub insertion_order: Vec<usize>,
    pub tree_edges: Vec<(usize, usize)>,
    pub pre_update_shares: Vec<String>,
    pub last_agent: usize,
    pub candidates: Vec<Candidate>,
    pub argmin_k: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub coalition: String,
    pub amount: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxReport {
    pub command: &'static str,
    pub instance: InstanceInfo,
    pub tie_break: &'static str,
    pub allocation: Vec<String>,
    pub value: String,
    pub trace: Trace,
    /// Exact nonnegative optimum, computed when `n` is within `--limit`.
    pub optimum: Option<String>,
    pub optimum_allocation: Option<Vec<String>>,
    pub ratio: Option<String>,
    /// With `--monotonize`: a coalition whose monotonized cost the output
    /// exceeds, or `null`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotonized_violation: Option<Option<ViolationReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximate: Option<Approximate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GhReport {
    pub command: &'static str,
    pub instance: InstanceInfo,
    pub allocation: Vec<String>,
    pub value: String,
    pub in_core: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximate: Option<Approximate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableEntry {
    pub coalition: String,
    pub cost: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub command: &'static str,
    pub instance: InstanceInfo,
    /// Nonempty coalitions in bitmask order.
    pub table: Vec<TableEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparateReport {
    pub command: &'static str,
    pub instance: InstanceInfo,
    pub point: Vec<String>,
    pub nonneg: bool,
    /// `member`, `violated` or `negative_share`.
    pub result: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coalition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amount: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agent: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    /// Direct enumeration of every proper coalition gives the same verdict.
    pub brute_force_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub index: u64,
    pub model: &'static str,
    pub n: usize,
    pub value: String,
    pub optimum: String,
    pub ratio: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_approx: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub count: u64,
    pub min: String,
    pub mean: String,
    pub max: String,
    pub worst_index: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximate: Option<Approximate>,
}

pub fn keys(pair: &(Coalition, Coalition)) -> Vec<String> {
    vec![pair.0.to_key(), pair.1.to_key()]
}

impl PartialEq for Approximate {
    fn eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a.0 == b.0 && a.1.to_bits() == b.1.to_bits())
    }
}
