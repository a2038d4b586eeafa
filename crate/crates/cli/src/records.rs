//! On-disk JSON records and their validation against a fan.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use torick_core::{Character, Coeff, Divisor, Fan, FixedPointBundleData, LaurentPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanRecord {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanRecord {
    pub fn to_fan(&self) -> Result<Fan> {
        Ok(Fan::new(
            self.rank,
            self.rays.clone(),
            self.max_cones.clone(),
        )?)
    }
}

impl From<&Fan> for FanRecord {
    fn from(fan: &Fan) -> Self {
        FanRecord {
            rank: fan.rank(),
            rays: fan.rays().to_vec(),
            max_cones: fan.cones().iter().map(|c| c.rays().to_vec()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorRecord {
    pub coeffs: Vec<i64>,
}

impl DivisorRecord {
    pub fn to_divisor(&self, fan: &Fan) -> Result<Divisor> {
        if self.coeffs.len() != fan.rays().len() {
            bail!(
                "field `coeffs`: expected {} entries (one per ray), found {}",
                fan.rays().len(),
                self.coeffs.len()
            );
        }
        Ok(Divisor::new(self.coeffs.clone()))
    }
}

impl From<&Divisor> for DivisorRecord {
    fn from(d: &Divisor) -> Self {
        DivisorRecord {
            coeffs: d.coeffs().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub c: Coeff,
    pub m: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PexpConeRecord {
    pub cone: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PexpRecord {
    pub cones: Vec<PexpConeRecord>,
}

/// Each maximal cone must appear exactly once.
fn cone_slots<I: IntoIterator<Item = usize>>(fan: &Fan, indices: I) -> Result<Vec<usize>> {
    let n = fan.cones().len();
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    for (i, cone) in indices.into_iter().enumerate() {
        if cone >= n {
            bail!("field `cones[{i}].cone`: index {cone} out of range (fan has {n} maximal cones)");
        }
        if !seen.insert(cone) {
            bail!("field `cones[{i}].cone`: cone {cone} listed twice");
        }
        order.push(cone);
    }
    if seen.len() != n {
        let missing: Vec<usize> = (0..n).filter(|c| !seen.contains(c)).collect();
        bail!("field `cones`: missing entries for cones {missing:?}");
    }
    Ok(order)
}

impl PexpRecord {
    /// Cone values in cone order.
    pub fn to_values(&self, fan: &Fan) -> Result<Vec<LaurentPolynomial>> {
        let order = cone_slots(fan, self.cones.iter().map(|c| c.cone))?;
        let mut values = vec![LaurentPolynomial::zero(fan.rank()); order.len()];
        for (i, (rec, &slot)) in self.cones.iter().zip(&order).enumerate() {
            for (j, t) in rec.terms.iter().enumerate() {
                if t.m.len() != fan.rank() {
                    bail!(
                        "field `cones[{i}].terms[{j}].m`: expected {} entries, found {}",
                        fan.rank(),
                        t.m.len()
                    );
                }
            }
            values[slot] = LaurentPolynomial::from_terms(
                fan.rank(),
                rec.terms.iter().map(|t| (t.c, Character::new(t.m.clone()))),
            )?;
        }
        Ok(values)
    }

    pub fn from_values(values: &[LaurentPolynomial]) -> Self {
        PexpRecord {
            cones: values
                .iter()
                .enumerate()
                .map(|(cone, p)| PexpConeRecord {
                    cone,
                    terms: p
                        .terms()
                        .map(|(m, c)| TermRecord {
                            c,
                            m: m.entries().to_vec(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleConeRecord {
    pub cone: usize,
    pub weights: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleRecord {
    pub rank: usize,
    pub cones: Vec<BundleConeRecord>,
}

impl BundleRecord {
    pub fn to_data(&self, fan: &Fan) -> Result<FixedPointBundleData> {
        let order = cone_slots(fan, self.cones.iter().map(|c| c.cone))?;
        let mut weights = vec![Vec::new(); order.len()];
        for (i, (rec, &slot)) in self.cones.iter().zip(&order).enumerate() {
            if rec.weights.len() != self.rank {
                bail!(
                    "field `cones[{i}].weights`: expected {} characters (bundle rank), found {}",
                    self.rank,
                    rec.weights.len()
                );
            }
            for (j, w) in rec.weights.iter().enumerate() {
                if w.len() != fan.rank() {
                    bail!(
                        "field `cones[{i}].weights[{j}]`: expected {} entries, found {}",
                        fan.rank(),
                        w.len()
                    );
                }
            }
            weights[slot] = rec.weights.iter().cloned().map(Character::new).collect();
        }
        Ok(FixedPointBundleData::new(self.rank, weights)?)
    }
}

impl From<&FixedPointBundleData> for BundleRecord {
    fn from(data: &FixedPointBundleData) -> Self {
        BundleRecord {
            rank: data.rank(),
            cones: data
                .weights()
                .iter()
                .enumerate()
                .map(|(cone, ws)| BundleConeRecord {
                    cone,
                    weights: ws.iter().map(|w| w.entries().to_vec()).collect(),
                })
                .collect(),
        }
    }
}

/// Parses JSON text, reporting the field path and position on failure.
pub fn parse_record<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut *de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            anyhow!("{}", e.inner())
        } else {
            anyhow!("field `{path}`: {}", e.inner())
        }
    })?;
    de.end().map_err(|e| anyhow!("{e}"))?;
    Ok(value)
}

fn read_record<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_record(&text).with_context(|| format!("{}", path.display()))
}

/// Paths given on the command line.
#[derive(Debug, Clone, Default)]
pub struct InputPaths {
    pub fan: Option<PathBuf>,
    pub divisor: Option<PathBuf>,
    pub pexp: Option<PathBuf>,
    pub bundle: Option<PathBuf>,
}

/// Validated inputs, cross-referenced against the fan's ray and cone order.
#[derive(Debug, Clone)]
pub struct WorkspaceFiles {
    pub fan: Fan,
    pub divisor: Option<Divisor>,
    pub pexp: Option<Vec<LaurentPolynomial>>,
    pub bundle: Option<FixedPointBundleData>,
}

pub fn parse_inputs(paths: &InputPaths) -> Result<WorkspaceFiles> {
    let fan_path = paths
        .fan
        .as_ref()
        .ok_or_else(|| anyhow!("missing required --fan"))?;
    let fan_rec: FanRecord = read_record(fan_path)?;
    let fan = fan_rec
        .to_fan()
        .with_context(|| format!("{}: invalid fan", fan_path.display()))?;

    let divisor = match &paths.divisor {
        Some(p) => {
            let rec: DivisorRecord = read_record(p)?;
            Some(
                rec.to_divisor(&fan)
                    .with_context(|| p.display().to_string())?,
            )
        }
        None => None,
    };
    let pexp = match &paths.pexp {
        Some(p) => {
            let rec: PexpRecord = read_record(p)?;
            Some(
                rec.to_values(&fan)
                    .with_context(|| p.display().to_string())?,
            )
        }
        None => None,
    };
    let bundle = match &paths.bundle {
        Some(p) => {
            let rec: BundleRecord = read_record(p)?;
            Some(rec.to_data(&fan).with_context(|| p.display().to_string())?)
        }
        None => None,
    };
    Ok(WorkspaceFiles {
        fan,
        divisor,
        pexp,
        bundle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use torick_core::catalog;

    #[test]
    fn minimal_fan_record() {
        let rec: FanRecord =
            parse_record(r#"{"rank":1,"rays":[[1],[-1]],"max_cones":[[0],[1]]}"#).unwrap();
        let fan = rec.to_fan().unwrap();
        assert_eq!(fan.rank(), 1);
        assert_eq!(fan.cones().len(), 2);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let err =
            parse_record::<FanRecord>("{\"rank\":2,\n\"rays\":[[1,0],[0,\"x\"]],\"max_cones\":[]}")
                .unwrap_err()
                .to_string();
        assert!(err.contains("line 2"), "{err}");
        assert!(err.contains("rays[1][1]"), "{err}");

        let err = parse_record::<FanRecord>("{\"rank\":2,\"rays\":[[1,0]")
            .unwrap_err()
            .to_string();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse_record::<DivisorRecord>(r#"{"coeffs":[1],"extra":0}"#).is_err());
    }

    #[test]
    fn pexp_cone_coverage() {
        let fan = catalog::p1();
        let rec: PexpRecord = parse_record(
            r#"{"cones":[{"cone":1,"terms":[{"c":1,"m":[1]}]},{"cone":0,"terms":[{"c":1,"m":[0]}]}]}"#,
        )
        .unwrap();
        let values = rec.to_values(&fan).unwrap();
        assert_eq!(values[1], LaurentPolynomial::exp(Character::from([1])));

        let dup: PexpRecord =
            parse_record(r#"{"cones":[{"cone":0,"terms":[]},{"cone":0,"terms":[]}]}"#).unwrap();
        assert!(dup
            .to_values(&fan)
            .unwrap_err()
            .to_string()
            .contains("listed twice"));

        let short: PexpRecord = parse_record(r#"{"cones":[{"cone":0,"terms":[]}]}"#).unwrap();
        assert!(short
            .to_values(&fan)
            .unwrap_err()
            .to_string()
            .contains("missing"));
    }

    #[test]
    fn bundle_rank_checked() {
        let fan = catalog::p1();
        let rec: BundleRecord = parse_record(
            r#"{"rank":2,"cones":[{"cone":0,"weights":[[0],[0]]},{"cone":1,"weights":[[0]]}]}"#,
        )
        .unwrap();
        let err = rec.to_data(&fan).unwrap_err().to_string();
        assert!(err.contains("cones[1].weights"), "{err}");
    }
}
