//! CSV and metadata emission with locale-independent, byte-stable
//! formatting: `.` decimal separator, `\n` line endings, reals fixed to
//! six decimal places.

use crate::config::SimConfig;
use crate::experiments::{PairedSrResult, SrSummary, SweepCell};
use crate::metrics::RunResult;
use serde::Serialize;

pub fn fmt_real(v: f64) -> String {
    format!("{v:.6}")
}

pub const TIMESERIES_HEADER: &str =
    "iteration,mean_fitness,max_fitness,diversity,mean_p_invent,frac_p_low,frac_p_high";

pub fn timeseries_csv(result: &RunResult) -> String {
    let mut out = String::from(TIMESERIES_HEADER);
    out.push('\n');
    for m in &result.series {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            m.iteration,
            fmt_real(m.mean_fitness),
            fmt_real(m.max_fitness),
            m.diversity,
            fmt_real(m.mean_p_invent),
            fmt_real(m.frac_p_low),
            fmt_real(m.frac_p_high),
        ));
    }
    out
}

pub const SWEEP_HEADER: &str = "C,p,replicates,mean_final_fitness,stderr_final_fitness,\
reached_fraction,mean_time_to_threshold,mean_peak_diversity,mean_peak_iteration";

pub fn sweep_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for c in cells {
        // mean_time_to_threshold is empty when no replicate reached it
        let ttt = c
            .time_to_threshold
            .map(|s| fmt_real(s.mean))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt_real(c.c),
            fmt_real(c.p),
            c.replicates,
            fmt_real(c.final_fitness.mean),
            fmt_real(c.final_fitness.stderr),
            fmt_real(c.reached_fraction),
            ttt,
            fmt_real(c.peak_diversity.mean),
            fmt_real(c.peak_iteration.mean),
        ));
    }
    out
}

pub const SR_PAIRS_HEADER: &str = "seed,final_mean_fitness_sr,final_mean_fitness_nosr,\
peak_div_sr,peak_div_nosr,peak_iter_sr,peak_iter_nosr,final_seg_index_sr";

pub fn sr_pairs_csv(pairs: &[PairedSrResult]) -> String {
    let mut out = String::from(SR_PAIRS_HEADER);
    out.push('\n');
    for p in pairs {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            p.seed,
            fmt_real(p.final_mean_fitness_sr),
            fmt_real(p.final_mean_fitness_nosr),
            p.peak_div_sr,
            p.peak_div_nosr,
            p.peak_iter_sr,
            p.peak_iter_nosr,
            fmt_real(p.final_seg_index_sr),
        ));
    }
    out
}

pub const SR_SUMMARY_HEADER: &str = "pairs,win_rate,mean_fitness_diff,mean_peak_iter_diff,\
mean_peak_div_diff,mean_final_seg_index_sr";

pub fn sr_summary_csv(s: &SrSummary) -> String {
    format!(
        "{}\n{},{},{},{},{},{}\n",
        SR_SUMMARY_HEADER,
        s.pairs,
        fmt_real(s.win_rate),
        fmt_real(s.mean_fitness_diff),
        fmt_real(s.mean_peak_iter_diff),
        fmt_real(s.mean_peak_div_diff),
        fmt_real(s.mean_final_seg_index_sr),
    )
}

#[derive(Serialize)]
pub struct RunMeta<'a> {
    pub config: &'a SimConfig,
    pub seed: u64,
}

pub fn run_meta_json(config: &SimConfig, seed: u64) -> String {
    let mut s = serde_json::to_string_pretty(&RunMeta { config, seed }).expect("serializable");
    s.push('\n');
    s
}
