//! Sampled one-dimensional functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
pub enum Samples {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Samples {
    pub fn len(&self) -> usize {
        match self {
            Samples::Real(v) => v.len(),
            Samples::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub label: String,
    pub samples: Samples,
}

/// A strictly increasing abscissa with one or more sample columns of equal length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    abscissa_label: String,
    abscissa: Vec<f64>,
    columns: Vec<Column>,
}

impl Curve {
    pub fn new(abscissa_label: impl Into<String>, abscissa: Vec<f64>) -> Result<Self> {
        check_increasing(&abscissa)?;
        Ok(Self {
            abscissa_label: abscissa_label.into(),
            abscissa,
            columns: Vec::new(),
        })
    }

    pub fn with_real(mut self, label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        self.push(label.into(), Samples::Real(values))?;
        Ok(self)
    }

    pub fn with_complex(
        mut self,
        label: impl Into<String>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        self.push(label.into(), Samples::Complex(values))?;
        Ok(self)
    }

    fn push(&mut self, label: String, samples: Samples) -> Result<()> {
        if samples.len() != self.abscissa.len() {
            return Err(Error::Grid(format!(
                "column '{label}' has {} samples, abscissa has {}",
                samples.len(),
                self.abscissa.len()
            )));
        }
        self.columns.push(Column { label, samples });
        Ok(())
    }

    pub fn abscissa_label(&self) -> &str {
        &self.abscissa_label
    }

    pub fn abscissa(&self) -> &[f64] {
        &self.abscissa
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    /// Real column by label.
    pub fn real(&self, label: &str) -> Option<&[f64]> {
        self.columns.iter().find_map(|c| match &c.samples {
            Samples::Real(v) if c.label == label => Some(v.as_slice()),
            _ => None,
        })
    }

    pub fn complex(&self, label: &str) -> Option<&[Complex64]> {
        self.columns.iter().find_map(|c| match &c.samples {
            Samples::Complex(v) if c.label == label => Some(v.as_slice()),
            _ => None,
        })
    }
}

pub(crate) fn check_increasing(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::Grid("grid contains non-finite values".into()));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::Grid(format!(
            "grid is not strictly increasing ({} followed by {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `count` equally spaced points from `start` to `stop`, both included.
pub fn linspace(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite()) {
        return Err(Error::Grid("grid bounds must be finite".into()));
    }
    match count {
        0 => Err(Error::Grid("grid needs at least one point".into())),
        1 => Ok(vec![start]),
        _ => {
            if stop <= start {
                return Err(Error::Grid(format!(
                    "grid stop {stop} must exceed start {start}"
                )));
            }
            let step = (stop - start) / (count - 1) as f64;
            let mut v: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
            v[count - 1] = stop;
            Ok(v)
        }
    }
}

/// Indices of strict interior local maxima.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_includes_endpoints() {
        let g = linspace(-10.0, 10.0, 5).unwrap();
        assert_eq!(g, vec![-10.0, -5.0, 0.0, 5.0, 10.0]);
        assert_eq!(linspace(2.0, 2.0, 1).unwrap(), vec![2.0]);
        assert!(linspace(1.0, 0.0, 3).is_err());
        assert!(linspace(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn curve_validates_lengths_and_order() {
        assert!(Curve::new("x", vec![0.0, 0.0]).is_err());
        let c = Curve::new("x", vec![0.0, 1.0]).unwrap();
        assert!(c.clone().with_real("y", vec![1.0]).is_err());
        let c = c.with_real("y", vec![1.0, 2.0]).unwrap();
        assert_eq!(c.real("y"), Some(&[1.0, 2.0][..]));
        assert_eq!(c.real("z"), None);
    }

    #[test]
    fn maxima_are_strict_and_interior() {
        assert_eq!(local_maxima(&[0.0, 1.0, 0.0, 2.0, 2.0, 1.0, 3.0]), vec![1]);
    }
}
