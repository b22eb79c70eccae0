//! Sampled scalar functions of the geodesic radius.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A scalar function of the radius sampled on a strictly increasing grid.
///
/// Serializes to JSON as `{label, grid, values}` and to CSV with the header
/// `r,value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub label: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(label: impl Into<String>, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidProfile(format!(
                "grid has {} points but {} values were given",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("grid is not strictly increasing".into()));
        }
        let interior = values.len().saturating_sub(1);
        if let Some(i) = (1..interior).find(|&i| !values[i].is_finite()) {
            return Err(Error::InvalidProfile(format!(
                "non-finite value at interior point r = {}",
                grid[i]
            )));
        }
        Ok(RadialProfile { label: label.into(), grid, values })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }

    /// Value at the grid point closest to `r`.
    pub fn nearest(&self, r: f64) -> Option<(f64, f64)> {
        self.iter().min_by(|a, b| (a.0 - r).abs().total_cmp(&(b.0 - r).abs()))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["r", "value"])?;
        for (r, v) in self.iter() {
            w.write_record([format_float(r), format_float(v)])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn read_csv<R: std::io::Read>(label: impl Into<String>, reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "r" || &headers[1] != "value" {
            return Err(Error::InvalidProfile("expected header `r,value`".into()));
        }
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidProfile(format!("bad number `{s}`: {e}")))
            };
            grid.push(parse(&rec[0])?);
            values.push(parse(&rec[1])?);
        }
        RadialProfile::new(label, grid, values)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: RadialProfile = serde_json::from_str(s)?;
        RadialProfile::new(p.label, p.grid, p.values)
    }
}

/// Shortest decimal representation that round-trips.
pub(crate) fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// Uniform grid with `size` points on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, size: usize) -> Vec<f64> {
    match size {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (size - 1) as f64;
            let mut g: Vec<f64> = (0..size).map(|i| a + h * i as f64).collect();
            g[size - 1] = b;
            g
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_monotone_grid() {
        let err = RadialProfile::new("x", vec![0.0, 1.0, 1.0], vec![1.0, 2.0, 3.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidProfile(_)));
    }

    #[test]
    fn rejects_length_mismatch() {
        assert!(RadialProfile::new("x", vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn endpoint_values_may_be_infinite() {
        let p = RadialProfile::new("h", vec![0.0, 0.5, 1.0], vec![f64::INFINITY, 2.0, 1.0]);
        assert!(p.is_ok());
        let p = RadialProfile::new("h", vec![0.0, 0.5, 1.0], vec![1.0, f64::NAN, 1.0]);
        assert!(p.is_err());
    }

    #[test]
    fn csv_has_expected_header() {
        let p = RadialProfile::new("omega", vec![0.0, 0.5], vec![1.0, 0.25]).unwrap();
        let s = p.to_csv_string().unwrap();
        assert_eq!(s, "r,value\n0.0,1.0\n0.5,0.25\n");
        let back = RadialProfile::read_csv("omega", s.as_bytes()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn json_schema() {
        let p = RadialProfile::new("omega", vec![0.0, 0.5], vec![1.0, 0.25]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json().unwrap()).unwrap();
        assert_eq!(v["label"], "omega");
        assert_eq!(v["grid"][1], 0.5);
        assert_eq!(v["values"][1], 0.25);
        assert_eq!(RadialProfile::from_json(&p.to_json().unwrap()).unwrap(), p);
    }

    #[test]
    fn uniform_grid_hits_endpoints() {
        let g = uniform_grid(0.0, std::f64::consts::PI, 7);
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[6], std::f64::consts::PI);
    }
}
