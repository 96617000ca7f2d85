use almost_core::generate::{random_graph, WeightModel};
use almost_core::mst::{algorithm1_with, granot_huberman};
use almost_core::rational::{frac, int};
use almost_core::relaxations::{almost_core_optimum, full_report};
use almost_core::separation::{
    brute_force_almost_core, separate_almost_core, separate_almost_core_nonneg, BruteForceOracle,
};
use almost_core::{
    catalog, rational, Allocation, Coalition, Game, GraphInstance, Rational, SeparationResult,
    TieBreak, Verdict, ENUMERATION_LIMIT,
};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::instance::Instance;
use crate::report::*;

fn info(inst: &Instance, monotonized: bool) -> InstanceInfo {
    InstanceInfo {
        name: inst.name.clone(),
        format: inst.format_name(),
        agents: inst.n,
        monotonized,
    }
}

fn game_of(inst: &Instance, monotonize: bool) -> Result<Game> {
    let g = inst.game()?;
    Ok(if monotonize { g.monotonized()? } else { g })
}

fn require_graph(inst: &Instance) -> Result<&GraphInstance> {
    inst.graph()
        .ok_or_else(|| CliError::Usage("this command needs an mst instance".into()))
}

fn check(v: Verdict<(Coalition, Coalition)>) -> Check {
    Check {
        holds: v.holds(),
        witness: v.witness().map(keys),
    }
}

pub fn analyze(inst: &Instance, monotonize: bool, nonneg: bool, decimal: bool) -> Result<AnalyzeReport> {
    let game = game_of(inst, monotonize)?.to_explicit()?;
    let r = full_report(&game)?;
    let last = game.satisfies_last_monotone();
    let structure = Structure {
        subadditive: check(game.is_subadditive()?),
        submodular: check(game.is_submodular()?),
        monotone: check(game.is_monotone()?),
        last_monotone: Check {
            holds: last.holds(),
            witness: last.witness().map(|k| vec![(k + 1).to_string()]),
        },
    };
    let nonneg_section = nonneg.then(|| {
        let bound = (last.holds() && r.n >= 2)
            .then(|| (Rational::one() + frac(1, r.n as i64 - 1)) * &r.grand_cost);
        NonnegSection {
            optimum: q(&r.ac_opt_nonneg),
            allocation: shares(&r.ac_nonneg_allocation),
            bound_tight: bound.as_ref().map(|b| *b == r.ac_opt_nonneg),
            bound: bound.as_ref().map(q),
        }
    });
    let approximate = decimal.then(|| {
        let mut a = Approximate::default();
        a.add("grand_cost", &r.grand_cost);
        a.add("ac_opt", &r.ac_opt);
        a.add("ac_opt_nonneg", &r.ac_opt_nonneg);
        a.add("eps_strong", &r.eps_strong);
        a.add("eps_weak", &r.eps_weak);
        a.add_opt("eps_mult", r.eps_mult.as_ref());
        a.add_opt("gamma", r.gamma_approx.as_ref());
        a.add("delta_cos", &r.cos_delta);
        a.add("delta_ec", &r.ext_core_delta);
        a
    });
    Ok(AnalyzeReport {
        command: "analyze",
        instance: info(inst, monotonize),
        structure,
        grand_cost: q(&r.grand_cost),
        core_nonempty: r.core_nonempty,
        core_element: r.core_element.as_ref().map(shares),
        ac_opt: q(&r.ac_opt),
        ac_allocation: shares(&r.ac_allocation),
        ac_opt_nonneg: q(&r.ac_opt_nonneg),
        ac_nonneg_allocation: shares(&r.ac_nonneg_allocation),
        eps_strong: q(&r.eps_strong),
        strong_witness: shares(&r.strong_witness),
        eps_weak: q(&r.eps_weak),
        weak_witness: shares(&r.weak_witness),
        eps_mult: r.eps_mult.as_ref().map(q),
        mult_witness: r.mult_witness.as_ref().map(shares),
        gamma: r.gamma_approx.as_ref().map(q),
        gamma_witness: r.gamma_witness.as_ref().map(shares),
        delta_cos: q(&r.cos_delta),
        cos_witness: shares(&r.cos_witness),
        delta_ec: q(&r.ext_core_delta),
        ec_allocation: shares(&r.ext_core_witness.0),
        ec_subsidy: shares(&r.ext_core_witness.1),
        nonneg: nonneg_section,
        approximate,
    })
}

/// `opt / value`, with `0/0` read as 1.
pub fn ratio(optimum: &Rational, value: &Rational) -> Option<Rational> {
    if value.is_zero() {
        optimum.is_zero().then(Rational::one)
    } else {
        Some(optimum / value)
    }
}

pub fn mst_approx(
    inst: &Instance,
    monotonize: bool,
    limit: usize,
    tie: TieBreak,
    decimal: bool,
) -> Result<ApproxReport> {
    let graph = require_graph(inst)?;
    let (x, trace) = algorithm1_with(graph, tie)?;
    let value = x.total();
    let exact = if inst.n <= limit.min(ENUMERATION_LIMIT) {
        Some(almost_core_optimum(&Game::mst(graph.clone()), true)?)
    } else {
        None
    };
    let r = exact.as_ref().and_then(|(opt, _)| ratio(opt, &value));
    let monotonized_violation = if monotonize {
        let mono = Game::mst_monotonized(graph)?;
        Some(mono.first_violation(&x, false)?.map(|s| ViolationReport {
            coalition: s.to_key(),
            amount: q(&(x.sum_over(s) - mono.evaluate(s).expect("coalition in range"))),
        }))
    } else {
        None
    };
    let approximate = decimal.then(|| {
        let mut a = Approximate::default();
        a.add("value", &value);
        a.add_opt("optimum", exact.as_ref().map(|e| &e.0));
        a.add_opt("ratio", r.as_ref());
        a
    });
    Ok(ApproxReport {
        command: "mst approx",
        instance: info(inst, false),
        tie_break: match tie {
            TieBreak::LowestIndex => "lowest",
            TieBreak::HighestIndex => "highest",
        },
        allocation: shares(&x),
        value: q(&value),
        trace: Trace {
            insertion_order: trace.insertion_order.iter().map(|a| a + 1).collect(),
            tree_edges: trace.tree_edges.clone(),
            pre_update_shares: shares(&trace.pre_update_shares),
            last_agent: trace.last_agent + 1,
            candidates: trace
                .candidates
                .iter()
                .map(|(k, v)| Candidate {
                    agent: k + 1,
                    value: q(v),
                })
                .collect(),
            argmin_k: trace.argmin_k + 1,
        },
        optimum: exact.as_ref().map(|e| q(&e.0)),
        optimum_allocation: exact.as_ref().map(|e| shares(&e.1)),
        ratio: r.as_ref().map(q),
        monotonized_violation,
        approximate,
    })
}

pub fn mst_gh(inst: &Instance, decimal: bool) -> Result<GhReport> {
    let graph = require_graph(inst)?;
    let x = granot_huberman(graph);
    let game = Game::mst(graph.clone());
    let in_core = x.total() == game.grand_value() && game.first_violation(&x, true)?.is_none();
    let approximate = decimal.then(|| {
        let mut a = Approximate::default();
        a.add("value", &x.total());
        a
    });
    Ok(GhReport {
        command: "mst gh",
        instance: info(inst, false),
        value: q(&x.total()),
        allocation: shares(&x),
        in_core,
        approximate,
    })
}

fn table_of(inst: &Instance, monotonize: bool) -> Result<Vec<Rational>> {
    let graph = require_graph(inst)?;
    Ok(if monotonize {
        almost_core::mst::monotonized_table(graph)?
    } else {
        almost_core::mst::cost_table(graph)?
    })
}

pub fn mst_table(inst: &Instance, monotonize: bool) -> Result<TableReport> {
    let t = table_of(inst, monotonize)?;
    Ok(TableReport {
        command: "mst table",
        instance: info(inst, monotonize),
        table: Coalition::nonempty(inst.n)
            .map(|s| TableEntry {
                coalition: s.to_key(),
                cost: q(&t[s.bits() as usize]),
            })
            .collect(),
    })
}

/// The characteristic table as an explicit instance file.
pub fn mst_table_instance(inst: &Instance, monotonize: bool) -> Result<Instance> {
    let t = table_of(inst, monotonize)?;
    Ok(Instance::from_table(inst.name.clone(), inst.n, t))
}

pub fn parse_point(text: &str) -> Result<Allocation> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let shares = parts
        .iter()
        .map(|p| rational::parse(p))
        .collect::<almost_core::Result<Vec<_>>>()?;
    Ok(Allocation::new(shares))
}

fn same_verdict(a: &SeparationResult, b: &SeparationResult) -> bool {
    std::mem::discriminant(a) == std::mem::discriminant(b)
}

pub fn separate(inst: &Instance, point: &Allocation, nonneg: bool, monotonize: bool) -> Result<SeparateReport> {
    let game = game_of(inst, monotonize)?;
    if point.len() != game.n() {
        return Err(almost_core::Error::Dimension {
            expected: game.n(),
            got: point.len(),
        }
        .into());
    }
    let oracle = BruteForceOracle::new(&game)?;
    let result = if nonneg {
        separate_almost_core_nonneg(point, &oracle, &game)?
    } else {
        separate_almost_core(point, &oracle, &game.grand_value())?
    };
    let direct = brute_force_almost_core(&game, point, nonneg)?;
    let mut report = SeparateReport {
        command: "separate",
        instance: info(inst, monotonize),
        point: shares(point),
        nonneg,
        result: "member",
        coalition: None,
        amount: None,
        agent: None,
        value: None,
        brute_force_agrees: same_verdict(&result, &direct),
    };
    match result {
        SeparationResult::Member => {}
        SeparationResult::Violated(v) => {
            report.result = "violated";
            report.coalition = Some(v.coalition.to_key());
            report.amount = Some(q(&v.amount));
        }
        SeparationResult::NegativeShare { agent, value } => {
            report.result = "negative_share";
            report.agent = Some(agent + 1);
            report.value = Some(q(&value));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchModel {
    Uniform,
    Euclidean,
    Path,
    /// The tight family for the factor 2, with `ε = 2^−(i+1)` for instance `i`.
    Tight,
}

impl BenchModel {
    pub fn name(self) -> &'static str {
        match self {
            BenchModel::Uniform => "uniform",
            BenchModel::Euclidean => "euclidean",
            BenchModel::Path => "path",
            BenchModel::Tight => "tight",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub seed: u64,
    pub count: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub model: BenchModel,
    pub decimal: bool,
}

/// `"k"`, `"a..b"` or `"a..=b"`, both ends inclusive.
pub fn parse_range(text: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Usage(format!("invalid agent range \"{text}\", expected k or a..b"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let k = num(text)?;
            (k, k)
        }
    };
    if lo < 2 || lo > hi {
        return Err(CliError::Usage(format!(
            "agent range \"{text}\" must satisfy 2 <= a <= b"
        )));
    }
    Ok((lo, hi))
}

fn bench_instance(cfg: &BenchConfig, index: u64) -> Result<GraphInstance> {
    if cfg.model == BenchModel::Tight {
        let eps = num_traits::pow(frac(1, 2), index as usize + 1);
        return Ok(catalog::tight_bound_graph(eps));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let n = rng.gen_range(cfg.n_min..=cfg.n_max);
    let model = match cfg.model {
        BenchModel::Uniform => WeightModel::Uniform { max: 20 },
        BenchModel::Euclidean => WeightModel::EuclideanSquared { side: 10 },
        BenchModel::Path => WeightModel::NearPath { max: 20 },
        BenchModel::Tight => unreachable!(),
    };
    Ok(random_graph(&mut rng, n, model)?)
}

pub fn bench_record(cfg: &BenchConfig, index: u64) -> Result<(BenchRecord, Rational)> {
    let graph = bench_instance(cfg, index)?;
    let (x, _) = algorithm1_with(&graph, TieBreak::LowestIndex)?;
    let value = x.total();
    let n = graph.n();
    let (optimum, _) = almost_core_optimum(&Game::mst(graph), true)?;
    let r = ratio(&optimum, &value).unwrap_or_else(|| int(-1));
    if r < int(1) || r > int(2) {
        return Err(CliError::RatioOutOfRange {
            index,
            ratio: q(&r),
        });
    }
    let record = BenchRecord {
        index,
        model: cfg.model.name(),
        n,
        value: q(&value),
        optimum: q(&optimum),
        ratio: q(&r),
        ratio_approx: cfg.decimal.then(|| rational::approx_f64(&r)),
    };
    Ok((record, r))
}

/// Runs the benchmark, handing records to `sink` in index order. Instances
/// are evaluated in parallel a chunk at a time.
pub fn bench(cfg: &BenchConfig, mut sink: impl FnMut(&BenchRecord) -> Result<()>) -> Result<BenchSummary> {
    if cfg.model != BenchModel::Tight && cfg.n_max > ENUMERATION_LIMIT {
        return Err(almost_core::Error::LimitExceeded {
            what: "bench",
            n: cfg.n_max,
            limit: ENUMERATION_LIMIT,
        }
        .into());
    }
    if cfg.count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    const CHUNK: u64 = 64;
    let mut ratios: Vec<Rational> = Vec::with_capacity(cfg.count as usize);
    let mut start = 0;
    while start < cfg.count {
        let end = (start + CHUNK).min(cfg.count);
        let chunk: Vec<Result<(BenchRecord, Rational)>> =
            (start..end).into_par_iter().map(|i| bench_record(cfg, i)).collect();
        for item in chunk {
            let (record, r) = item?;
            sink(&record)?;
            ratios.push(r);
        }
        start = end;
    }
    let (worst, max) = ratios
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("count is positive");
    let min = ratios.iter().min().expect("count is positive");
    let mean = ratios.iter().sum::<Rational>() / int(ratios.len() as i64);
    let approximate = cfg.decimal.then(|| {
        let mut a = Approximate::default();
        a.add("min", min);
        a.add("mean", &mean);
        a.add("max", max);
        a
    });
    Ok(BenchSummary {
        count: cfg.count,
        min: q(min),
        mean: q(&mean),
        max: q(max),
        worst_index: worst as u64,
        approximate,
    })
}
