//! Analysis documents for `analyze`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use serde::Deserialize;
use srgkit::feedback::{nyquist_stability, robust_feedback, tau_grid, Verdict, DEFAULT_TAU_POINTS};
use srgkit::geom::region_invert;
use srgkit::srg::{cascade_srg, class_srg, lti_srg, lti_srg_exact, static_srg, OperatorClass, StaticKind};
use srgkit::{parse_tf, FreqGrid, Region, SrgError};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSpec {
    pub regions: BTreeMap<String, Builder>,
    pub interconnection: Interconnection,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum Builder {
    Class { class: OperatorClass },
    Lti {
        tf: String,
        #[serde(default)]
        exact: bool,
    },
    Static { shape: StaticKind },
    Cascade { gammas: Vec<f64> },
    /// Inline region document.
    Json { region: serde_json::Value },
    /// Image of another named region under `z ↦ 1/conj(z)`.
    Invert { of: String },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Interconnection {
    /// Unity negative feedback around `loop`.
    Nyquist {
        #[serde(rename = "loop")]
        loop_region: String,
    },
    RobustFeedback { h1: String, h2: String },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    pub omega: Option<OmegaGrid>,
    pub tau: Option<TauGrid>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaGrid {
    pub wmin: f64,
    pub wmax: f64,
    pub points: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauGrid {
    pub points: Option<usize>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub verdict: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl AnalysisSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| SrgError::Serialization(e.to_string()).into())
    }

    pub fn freq_grid(&self) -> Result<FreqGrid> {
        Ok(match &self.grids.omega {
            Some(g) => FreqGrid::new(g.wmin, g.wmax, g.points)?,
            None => FreqGrid::default(),
        })
    }

    pub fn taus(&self) -> Result<Vec<f64>> {
        let t = match &self.grids.tau {
            None => tau_grid(DEFAULT_TAU_POINTS),
            Some(TauGrid { values: Some(v), .. }) => v.clone(),
            Some(TauGrid { points: Some(n), .. }) => tau_grid(*n),
            Some(_) => tau_grid(DEFAULT_TAU_POINTS),
        };
        if t.is_empty() {
            return Err(SrgError::InvalidParameter("tau grid is empty".into()).into());
        }
        Ok(t)
    }

    pub fn region(&self, name: &str) -> Result<Region> {
        self.build(name, 0)
    }

    fn build(&self, name: &str, depth: usize) -> Result<Region> {
        if depth > self.regions.len() {
            bail!(SrgError::InvalidParameter(format!("region '{name}' refers to itself")));
        }
        let b = self
            .regions
            .get(name)
            .ok_or_else(|| SrgError::InvalidParameter(format!("unknown region '{name}'")))?;
        Ok(match b {
            Builder::Class { class } => class_srg(*class)?,
            Builder::Lti { tf, exact } => {
                let tf = parse_tf(tf)?;
                if *exact {
                    lti_srg_exact(&tf, &self.freq_grid()?)?
                } else {
                    lti_srg(&tf, &self.freq_grid()?)?
                }
            }
            Builder::Static { shape } => static_srg(*shape)?,
            Builder::Cascade { gammas } => cascade_srg(gammas)?,
            Builder::Json { region } => Region::from_json(&region.to_string())?,
            Builder::Invert { of } => region_invert(&self.build(of, depth + 1)?),
        })
    }

    /// Regions named by the interconnection, in order.
    pub fn operands(&self) -> Result<Vec<(String, Region)>> {
        let names = match &self.interconnection {
            Interconnection::Nyquist { loop_region } => vec![loop_region.clone()],
            Interconnection::RobustFeedback { h1, h2 } => vec![h1.clone(), h2.clone()],
        };
        names.into_iter().map(|n| self.region(&n).map(|r| (n, r))).collect()
    }

    pub fn run(&self) -> Result<(Verdict, Vec<(String, Region)>)> {
        let ops = self.operands()?;
        let taus = self.taus()?;
        let v = match &self.interconnection {
            Interconnection::Nyquist { .. } => nyquist_stability(&ops[0].1, &taus)?,
            Interconnection::RobustFeedback { .. } => robust_feedback(&ops[0].1, &ops[1].1, &taus)?,
        };
        Ok((v, ops))
    }
}

/// Output paths in a spec are relative to the spec's directory.
pub fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}
