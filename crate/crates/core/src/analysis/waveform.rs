use crate::netlist::Probe;
use crate::scalar::Scalar;
use crate::solver::{ProbeError, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    Time,
    Frequency,
}

/// Ordered series of solutions over time or frequency.
#[derive(Debug, Clone)]
pub struct Waveform<T> {
    pub kind: Abscissa,
    /// Strictly increasing.
    pub abscissa: Vec<f64>,
    pub points: Vec<Solution<T>>,
}

impl<T: Scalar> Waveform<T> {
    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }

    /// Value of `probe` at every point.
    pub fn column(&self, probe: &Probe) -> Result<Vec<T>, ProbeError> {
        self.points.iter().map(|s| s.probe(probe)).collect()
    }
}
