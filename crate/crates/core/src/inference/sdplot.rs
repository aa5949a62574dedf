use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Denominator used to standardize the differences `delta = O - E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdNorm {
    /// Largest `|delta|` across models at the same support point.
    #[default]
    PerSupportPoint,
    /// Largest `|delta|` of the same model across support points.
    PerModel,
    /// Largest `|delta|` over all models and support points.
    Global,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdPoint {
    pub support: u64,
    pub model: String,
    pub observed: u64,
    pub expected: f64,
    pub delta: f64,
    pub delta_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdPlotData {
    pub support: Vec<u64>,
    pub models: Vec<String>,
    pub norm: SdNorm,
    /// Ordered by support point, then by model.
    pub points: Vec<SdPoint>,
}

impl SdPlotData {
    pub fn point(&self, support: u64, model: &str) -> Option<&SdPoint> {
        self.points.iter().find(|p| p.support == support && p.model == model)
    }

    /// Writes `support,model,observed,expected,delta,delta_std` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for p in &self.points {
            w.serialize(p).map_err(|e| Error::Data(e.to_string()))?;
        }
        w.flush().map_err(|e| Error::Data(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}

fn ratio(delta: f64, denom: f64) -> f64 {
    if denom > 0.0 { delta / denom } else { 0.0 }
}

/// Differences between observed and each model's expected frequencies over
/// the support points `0..observed.len()`, scaled into `[-1, 1]`.
pub fn standardized_differences(
    observed: &[u64],
    expected: &[(String, Vec<f64>)],
    norm: SdNorm,
) -> Result<SdPlotData> {
    if expected.is_empty() {
        return Err(Error::InvalidParameter("no models to compare".into()));
    }
    if let Some((name, e)) = expected.iter().find(|(_, e)| e.len() != observed.len()) {
        return Err(Error::InvalidParameter(format!(
            "model {name} has {} cells, observed has {}",
            e.len(),
            observed.len()
        )));
    }
    let deltas: Vec<Vec<f64>> = expected
        .iter()
        .map(|(_, e)| observed.iter().zip(e).map(|(&o, &x)| o as f64 - x).collect())
        .collect();
    let per_model: Vec<f64> = deltas.iter().map(|d| d.iter().fold(0.0f64, |m, x| m.max(x.abs()))).collect();
    let per_point: Vec<f64> = (0..observed.len())
        .map(|k| deltas.iter().fold(0.0f64, |m, d| m.max(d[k].abs())))
        .collect();
    let global = per_model.iter().fold(0.0f64, |m, &x| m.max(x));

    let mut points = Vec::with_capacity(observed.len() * expected.len());
    for k in 0..observed.len() {
        for (j, (name, e)) in expected.iter().enumerate() {
            let delta = deltas[j][k];
            let denom = match norm {
                SdNorm::PerSupportPoint => per_point[k],
                SdNorm::PerModel => per_model[j],
                SdNorm::Global => global,
            };
            points.push(SdPoint {
                support: k as u64,
                model: name.clone(),
                observed: observed[k],
                expected: e[k],
                delta,
                delta_std: ratio(delta, denom),
            });
        }
    }
    Ok(SdPlotData {
        support: (0..observed.len() as u64).collect(),
        models: expected.iter().map(|(n, _)| n.clone()).collect(),
        norm,
        points,
    })
}
