use serde::Serialize;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::fio::DetRange;
use crate::io::{write_magnitude_csv, write_spectrum_csv};
use crate::lattice::SampledField;
use crate::numeric::median;
use crate::weights::ChainReport;
use crate::young::Delta2;

use super::config::ExperimentConfig;

#[derive(Clone, Debug, Serialize)]
pub struct MemberRatio {
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Ratios at one grid size. Members with vanishing right-hand side are
/// skipped and counted.
#[derive(Clone, Debug, Serialize)]
pub struct Stats {
    pub n: usize,
    pub members: Vec<MemberRatio>,
    pub skipped: usize,
    pub max: f64,
    pub median: f64,
}

impl Stats {
    pub fn from_pairs(n: usize, pairs: &[(f64, f64)]) -> Stats {
        let mut members = Vec::new();
        let mut skipped = 0;
        for (index, &(lhs, rhs)) in pairs.iter().enumerate() {
            if rhs == 0.0 {
                skipped += 1;
                continue;
            }
            members.push(MemberRatio { index, lhs, rhs, ratio: lhs / rhs });
        }
        let ratios: Vec<f64> = members.iter().map(|m| m.ratio).collect();
        let max = ratios.iter().fold(0.0, |a: f64, &r| if r.is_nan() { f64::NAN } else { a.max(r) });
        Stats { n, members, skipped, max, median: median(&ratios) }
    }

    pub fn min(&self) -> f64 {
        self.members.iter().map(|m| m.ratio).fold(f64::INFINITY, f64::min)
    }
}

/// One bound, evaluated at `n` and at the refined size.
#[derive(Clone, Debug, Serialize)]
pub struct Series {
    pub name: String,
    pub base: Stats,
    pub refined: Stats,
    /// `max(refined)/max(base)`; 1 when both are 0.
    pub growth: f64,
    pub growth_flag: bool,
}

impl Series {
    pub fn new(name: &str, base: Stats, refined: Stats, factor: f64) -> Series {
        let growth = if base.max == 0.0 && refined.max == 0.0 { 1.0 } else { refined.max / base.max };
        let growth_flag = !(growth <= factor);
        Series { name: name.into(), base, refined, growth, growth_flag }
    }

    pub fn finite(&self) -> bool {
        self.base.max.is_finite() && self.refined.max.is_finite()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainCheck {
    pub base: ChainReport,
    /// Same chain on a box twice as large.
    pub doubled: ChainReport,
    pub growth: f64,
    pub violated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DetCheck {
    pub which: String,
    pub range: DetRange,
    pub floor: f64,
    pub degenerate: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Hypothesis {
    /// Dilation indices `(q_Φ, p_Φ)` near the origin, when defined.
    pub young_indices: Option<(f64, f64)>,
    pub delta2: Option<Delta2>,
    pub conjugate_delta2: Option<Delta2>,
    pub det: Option<DetCheck>,
    pub weight_chain: Option<ChainCheck>,
    /// Largest sampled `|φ''|` entry, a proxy for the phase regularity
    /// condition.
    pub phase_hessian_max: Option<f64>,
    pub notes: Vec<String>,
    /// The Young function lies outside the index range of the estimate;
    /// reported, not failed.
    pub outside: bool,
    /// A weight or phase hypothesis fails on the sample.
    pub violated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Flags {
    pub refinement_growth: bool,
    pub hypothesis_violation: bool,
    pub nonfinite: bool,
    pub outside_hypothesis: bool,
    /// Any of the first three.
    pub instability: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub young: serde_json::Value,
    pub series: Vec<Series>,
    pub checks: Vec<Check>,
    pub hypothesis: Hypothesis,
    pub flags: Flags,
    /// Fields for phase-space plots; not part of the JSON report.
    #[serde(skip)]
    pub plots: Vec<(String, SampledField)>,
    #[serde(skip)]
    pub spectra: Vec<(String, Vec<f64>)>,
}

impl BoundReport {
    pub fn new(
        config: &ExperimentConfig,
        young: serde_json::Value,
        series: Vec<Series>,
        checks: Vec<Check>,
        hypothesis: Hypothesis,
    ) -> BoundReport {
        let refinement_growth = series.iter().any(|s| s.growth_flag);
        let nonfinite = series.iter().any(|s| !s.finite());
        let flags = Flags {
            refinement_growth,
            hypothesis_violation: hypothesis.violated,
            nonfinite,
            outside_hypothesis: hypothesis.outside,
            instability: refinement_growth || hypothesis.violated || nonfinite,
        };
        BoundReport {
            experiment: config.experiment.name().into(),
            config: config.clone(),
            young,
            series,
            checks,
            hypothesis,
            flags,
            plots: Vec::new(),
            spectra: Vec::new(),
        }
    }

    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn check(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.value)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// `report.json`, `summary.csv`, one magnitude CSV per plot field and
    /// one spectrum CSV per spectrum.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), self.to_json()?)?;
        let mut w = csv::Writer::from_path(dir.join("summary.csv"))?;
        w.write_record(["experiment", "series", "n", "members", "skipped", "max_ratio", "median_ratio", "growth", "flag"])?;
        for s in &self.series {
            for st in [&s.base, &s.refined] {
                w.write_record([
                    self.experiment.clone(),
                    s.name.clone(),
                    st.n.to_string(),
                    st.members.len().to_string(),
                    st.skipped.to_string(),
                    st.max.to_string(),
                    st.median.to_string(),
                    s.growth.to_string(),
                    s.growth_flag.to_string(),
                ])?;
            }
        }
        w.flush()?;
        for (name, f) in &self.plots {
            write_magnitude_csv(&dir.join(format!("{name}.csv")), f)?;
        }
        for (name, v) in &self.spectra {
            write_spectrum_csv(&dir.join(format!("{name}.csv")), v)?;
        }
        Ok(())
    }
}
