//! Replicated runs, parameter sweeps, and paired self-regulation
//! comparisons.

use crate::config::{ConfigError, SimConfig};
use crate::dynamics::step;
use crate::fitness::fitness_by_name;
use crate::metrics::{self, RunResult};
use crate::model::new_world;
use crate::rng::{cell_seed, RunRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Env var capping worker threads for sweeps and paired comparisons.
pub const THREADS_ENV: &str = "EVOC_THREADS";

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
        {
            builder = builder.num_threads(n);
        }
        builder.build().expect("thread pool")
    })
}

/// Map `f` over `0..n` in parallel; output order is by index, so results
/// do not depend on scheduling or thread count.
fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    pool().install(|| (0..n).into_par_iter().map(f).collect())
}

/// Run one full simulation: build the world, then `iterations` synchronous
/// steps, recording metrics for every iteration including 0.
pub fn run_sim(config: &SimConfig, seed: u64) -> Result<RunResult, ConfigError> {
    config.validate()?;
    let fitness = fitness_by_name(config)?;
    let mut rng = RunRng::new(seed);
    let mut world = new_world(config, fitness.as_ref(), &mut rng);
    let mut series = Vec::with_capacity(config.iterations + 1);
    series.push(metrics::iteration_metrics(&world));
    for _ in 0..config.iterations {
        let (next, m) = step(&world, config, fitness.as_ref(), &mut rng);
        world = next;
        series.push(m);
    }
    Ok(RunResult { config: config.clone(), seed, series })
}

/// Mean, sample standard deviation (n-1 denominator), standard error, and
/// 95% normal CI half-width of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    pub stderr: f64,
    pub ci95: f64,
}

pub fn stats_mean_std_ci(values: &[f64]) -> Stats {
    assert!(!values.is_empty());
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    let stderr = std / n.sqrt();
    Stats { mean, std, stderr, ci95: 1.96 * stderr }
}

/// Spearman rank correlation. Ties get the average of their rank range.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = ranks(xs);
    let ry = ranks(ys);
    pearson(&rx, &ry)
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg_rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx).powi(2);
        vy += (y - my).powi(2);
    }
    if vx == 0.0 || vy == 0.0 {
        0.0
    } else {
        cov / (vx * vy).sqrt()
    }
}

/// Summary over a set of independent runs of one configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplicateAggregate {
    pub replicates: usize,
    pub final_fitness: Stats,
    /// How many runs reached the fitness threshold at all.
    pub reached_count: usize,
    /// Stats of time-to-threshold over the runs that reached it.
    pub time_to_threshold: Option<Stats>,
    pub peak_diversity: Stats,
    pub peak_iteration: Stats,
    /// Per-iteration stats of mean fitness across runs.
    pub mean_fitness_curve: Vec<Stats>,
    /// Per-iteration stats of diversity across runs.
    pub diversity_curve: Vec<Stats>,
}

pub fn aggregate_runs(runs: &[RunResult]) -> ReplicateAggregate {
    assert!(!runs.is_empty());
    let config = &runs[0].config;
    let f_max = fitness_by_name(config).expect("validated config").max_fitness();

    let finals: Vec<f64> = runs.iter().map(|r| r.final_metrics().mean_fitness).collect();
    let ttts: Vec<Option<u64>> = runs
        .iter()
        .map(|r| metrics::time_to_threshold(&r.series, config.threshold_fraction, f_max))
        .collect();
    let reached: Vec<f64> = ttts.iter().flatten().map(|&t| t as f64).collect();
    let peaks: Vec<(u64, usize)> = runs.iter().map(|r| metrics::peak_diversity(&r.series)).collect();
    let peak_divs: Vec<f64> = peaks.iter().map(|&(_, d)| d as f64).collect();
    let peak_iters: Vec<f64> = peaks.iter().map(|&(i, _)| i as f64).collect();

    let len = runs[0].series.len();
    let curve = |pick: &dyn Fn(&RunResult, usize) -> f64| -> Vec<Stats> {
        (0..len)
            .map(|i| {
                let vals: Vec<f64> = runs.iter().map(|r| pick(r, i)).collect();
                stats_mean_std_ci(&vals)
            })
            .collect()
    };

    ReplicateAggregate {
        replicates: runs.len(),
        final_fitness: stats_mean_std_ci(&finals),
        reached_count: reached.len(),
        time_to_threshold: if reached.is_empty() { None } else { Some(stats_mean_std_ci(&reached)) },
        peak_diversity: stats_mean_std_ci(&peak_divs),
        peak_iteration: stats_mean_std_ci(&peak_iters),
        mean_fitness_curve: curve(&|r, i| r.series[i].mean_fitness),
        diversity_curve: curve(&|r, i| r.series[i].diversity as f64),
    }
}

/// Run the same config over the given seeds, in parallel. Aggregation
/// follows seed order, so the result is independent of scheduling.
pub fn run_replicates(config: &SimConfig, seeds: &[u64]) -> Result<ReplicateAggregate, ConfigError> {
    assert!(!seeds.is_empty());
    config.validate()?;
    let runs: Vec<RunResult> = par_map(seeds.len(), |i| {
        run_sim(config, seeds[i]).expect("config validated before fan-out")
    });
    Ok(aggregate_runs(&runs))
}

/// One (C, p) cell of a sweep.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepCell {
    pub c: f64,
    pub p: f64,
    pub replicates: usize,
    pub final_fitness: Stats,
    pub reached_fraction: f64,
    pub time_to_threshold: Option<Stats>,
    pub peak_diversity: Stats,
    pub peak_iteration: Stats,
}

fn cell_from_aggregate(c: f64, p: f64, agg: ReplicateAggregate) -> SweepCell {
    SweepCell {
        c,
        p,
        replicates: agg.replicates,
        final_fitness: agg.final_fitness,
        reached_fraction: agg.reached_count as f64 / agg.replicates as f64,
        time_to_threshold: agg.time_to_threshold,
        peak_diversity: agg.peak_diversity,
        peak_iteration: agg.peak_iteration,
    }
}

/// Full (C, p) grid sweep. Cells are emitted in row-major (C, p) order and
/// every replicate seed derives from (base seed, C index, p index, replicate
/// index) via the documented mixer, so any cell can be recomputed alone.
pub fn sweep(
    base: &SimConfig,
    c_grid: &[f64],
    p_grid: &[f64],
    replicates: usize,
) -> Result<Vec<SweepCell>, ConfigError> {
    assert!(!c_grid.is_empty() && !p_grid.is_empty() && replicates >= 1);
    let mut cells = Vec::with_capacity(c_grid.len() * p_grid.len());
    for (ci, &c) in c_grid.iter().enumerate() {
        for (pi, &p) in p_grid.iter().enumerate() {
            let cfg = SimConfig { creator_fraction: c, creator_p_invent: p, ..base.clone() };
            let seeds: Vec<u64> = (0..replicates)
                .map(|r| cell_seed(base.seed, ci as u64, pi as u64, r as u64))
                .collect();
            let agg = run_replicates(&cfg, &seeds)?;
            cells.push(cell_from_aggregate(c, p, agg));
        }
    }
    Ok(cells)
}

/// Sweep over p only, with every agent a creator (C forced to 1).
pub fn homogeneous_ratio_experiment(
    base: &SimConfig,
    p_grid: &[f64],
    replicates: usize,
) -> Result<Vec<SweepCell>, ConfigError> {
    let forced = SimConfig { creator_fraction: 1.0, ..base.clone() };
    sweep(&forced, &[1.0], p_grid, replicates)
}

/// One paired run: identical seed and config, with self-regulation on in
/// one arm and off in the other.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairedSrResult {
    pub seed: u64,
    pub final_mean_fitness_sr: f64,
    pub final_mean_fitness_nosr: f64,
    pub peak_div_sr: usize,
    pub peak_div_nosr: usize,
    pub peak_iter_sr: u64,
    pub peak_iter_nosr: u64,
    /// frac_p_low + frac_p_high in the SR arm's final iteration.
    pub final_seg_index_sr: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SrSummary {
    pub pairs: usize,
    /// Fraction of pairs where the SR arm's final mean fitness is strictly higher.
    pub win_rate: f64,
    pub mean_fitness_diff: f64,
    pub mean_peak_iter_diff: f64,
    pub mean_peak_div_diff: f64,
    pub mean_final_seg_index_sr: f64,
}

/// Paired comparison: for each seed, run with SR enabled and disabled and
/// compare final fitness, diversity peaks, and final segregation.
pub fn sr_compare(
    base: &SimConfig,
    seeds: &[u64],
) -> Result<(Vec<PairedSrResult>, SrSummary), ConfigError> {
    assert!(!seeds.is_empty());
    let sr_cfg = SimConfig { sr_enabled: true, ..base.clone() };
    let ctl_cfg = SimConfig { sr_enabled: false, ..base.clone() };
    sr_cfg.validate()?;

    let pairs: Vec<PairedSrResult> = par_map(seeds.len(), |i| {
        let seed = seeds[i];
        let sr = run_sim(&sr_cfg, seed).expect("validated");
        let ctl = run_sim(&ctl_cfg, seed).expect("validated");
        let (pi_sr, pd_sr) = metrics::peak_diversity(&sr.series);
        let (pi_ctl, pd_ctl) = metrics::peak_diversity(&ctl.series);
        let fin = sr.final_metrics();
        PairedSrResult {
            seed,
            final_mean_fitness_sr: fin.mean_fitness,
            final_mean_fitness_nosr: ctl.final_metrics().mean_fitness,
            peak_div_sr: pd_sr,
            peak_div_nosr: pd_ctl,
            peak_iter_sr: pi_sr,
            peak_iter_nosr: pi_ctl,
            final_seg_index_sr: fin.frac_p_low + fin.frac_p_high,
        }
    });

    let n = pairs.len() as f64;
    let wins = pairs
        .iter()
        .filter(|p| p.final_mean_fitness_sr > p.final_mean_fitness_nosr)
        .count();
    let summary = SrSummary {
        pairs: pairs.len(),
        win_rate: wins as f64 / n,
        mean_fitness_diff: pairs
            .iter()
            .map(|p| p.final_mean_fitness_sr - p.final_mean_fitness_nosr)
            .sum::<f64>()
            / n,
        mean_peak_iter_diff: pairs
            .iter()
            .map(|p| p.peak_iter_sr as f64 - p.peak_iter_nosr as f64)
            .sum::<f64>()
            / n,
        mean_peak_div_diff: pairs
            .iter()
            .map(|p| p.peak_div_sr as f64 - p.peak_div_nosr as f64)
            .sum::<f64>()
            / n,
        mean_final_seg_index_sr: pairs.iter().map(|p| p.final_seg_index_sr).sum::<f64>() / n,
    };
    Ok((pairs, summary))
}

/// Seeds for paired comparisons and standalone replicate sets, derived from
/// the base seed with the same mixer the sweep uses.
pub fn derive_seeds(base_seed: u64, count: usize) -> Vec<u64> {
    (0..count).map(|r| cell_seed(base_seed, 0, 0, r as u64)).collect()
}
