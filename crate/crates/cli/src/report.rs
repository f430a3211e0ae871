//! The `qps-report/1` JSON document.
//!
//! Keys appear in declaration order. Points are written as coordinate
//! vectors, never as internal indices. Optional sections are omitted when
//! absent.

use std::collections::BTreeMap;

use serde::Serialize;

use qps_core::census::{CensusResult, SpaceParams};
use qps_core::forms::PolarKind;
use qps_core::gf::Elem;
use qps_core::pg::{PointSet, ProjSpace};
use qps_core::spectra::{self, ConditionReport};
use qps_core::surgery::{NamedFlat, SurgeryRecord};
use qps_core::Result;

pub const FORMAT: &str = "qps-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumEntry {
    pub size: u64,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Nucleus {
    pub exists: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Elem>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Conditions {
    pub a: bool,
    pub b: bool,
    pub b_prime: bool,
    pub c: bool,
    pub c_prime: bool,
    pub d: bool,
    pub d_prime: bool,
}

impl From<&ConditionReport> for Conditions {
    fn from(r: &ConditionReport) -> Self {
        Conditions { a: r.a, b: r.b, b_prime: r.b_prime, c: r.c, c_prime: r.c_prime, d: r.d, d_prime: r.d_prime }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Surgery {
    pub construction: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperplane: Option<Vec<Elem>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<Vec<Elem>>,
    pub flats: Vec<NamedFlat>,
    pub removed: Vec<Vec<Elem>>,
    pub added: Vec<Vec<Elem>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub name: String,
    pub space: SpaceParams,
    pub total_candidates: u64,
    pub breakdown: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub checks: BTreeMap<String, bool>,
    pub witnesses: BTreeMap<String, Vec<Vec<Vec<Elem>>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub format: &'static str,
    pub space: SpaceParams,
    pub size: u64,
    pub spectrum: Vec<SpectrumEntry>,
    pub verdict: String,
    pub hyperplane_types: BTreeMap<String, u64>,
    pub nucleus: Nucleus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<Conditions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub surgery: Option<Surgery>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<Census>,
}

pub fn coordinates(space: &ProjSpace, s: &PointSet) -> Vec<Vec<Elem>> {
    s.iter().map(|p| space.point(p).to_vec()).collect()
}

impl Report {
    /// Spectrum, verdict against `kind`, hyperplane types and nucleus of `s`.
    pub fn for_set(space: &ProjSpace, s: &PointSet, kind: PolarKind) -> Result<Report> {
        let sp = spectra::spectrum(space, s);
        let class = spectra::classify(space, s, kind)?;
        let verdict = if class.quasi_polar {
            format!("quasi-{}", kind.family)
        } else {
            format!("not-quasi-{}", kind.family)
        };
        let nucleus = spectra::find_line_nucleus(space, s);
        Ok(Report {
            format: FORMAT,
            space: SpaceParams { m: space.dim(), q: space.q() },
            size: s.count() as u64,
            spectrum: sp.histogram.iter().map(|(&size, &count)| SpectrumEntry { size, count }).collect(),
            verdict,
            hyperplane_types: class.type_counts().into_iter().map(|(t, c)| (t.label().to_string(), c)).collect(),
            nucleus: Nucleus { exists: nucleus.is_some(), point: nucleus.map(|n| space.point(n).to_vec()) },
            conditions: None,
            surgery: None,
            census: None,
        })
    }

    pub fn is_quasi_polar(&self) -> bool {
        self.verdict.starts_with("quasi-")
    }

    pub fn with_surgery(mut self, space: &ProjSpace, rec: &SurgeryRecord) -> Self {
        self.surgery = Some(Surgery {
            construction: rec.construction.clone(),
            hyperplane: rec.hyperplane.clone(),
            vertex: rec.vertex.clone(),
            flats: rec.flats.clone(),
            removed: coordinates(space, &rec.removed),
            added: coordinates(space, &rec.added),
        });
        self
    }

    pub fn with_census(mut self, space: &ProjSpace, res: &CensusResult) -> Self {
        self.census = Some(Census {
            name: res.name.clone(),
            space: res.space,
            total_candidates: res.total_candidates,
            breakdown: res.breakdown.clone(),
            checks: res.checks.clone(),
            witnesses: res
                .witnesses
                .iter()
                .map(|(k, sets)| (k.clone(), sets.iter().map(|s| coordinates(space, s)).collect()))
                .collect(),
        });
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes") + "\n"
    }
}

/// `label,count` lines for a census breakdown.
pub fn census_csv(res: &CensusResult) -> String {
    let mut out = String::from("label,count\n");
    for (label, count) in &res.breakdown {
        let quoted = if label.contains([',', '"']) { format!("\"{}\"", label.replace('"', "\"\"")) } else { label.clone() };
        out.push_str(&format!("{quoted},{count}\n"));
    }
    out
}
