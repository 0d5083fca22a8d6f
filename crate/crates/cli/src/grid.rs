//! `start:stop:count` grid flags.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// An inclusive, evenly spaced grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, count }
    }

    pub fn points(&self) -> leaky_core::Result<Vec<f64>> {
        leaky_core::linspace(self.start, self.stop, self.count)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("expected start:stop:count, got '{s}'"));
        };
        let num = |v: &str, what: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| format!("{what} '{v}' is not a number"))
        };
        let count = count
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("count '{count}' is not a non-negative integer"))?;
        let grid = GridSpec::new(num(start, "start")?, num(stop, "stop")?, count);
        grid.points().map_err(|e| e.to_string())?;
        Ok(grid)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

impl Serialize for GridSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
