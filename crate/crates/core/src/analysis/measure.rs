use num_complex::Complex64;

use super::{AnalysisError, Waveform};
use crate::netlist::Probe;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gain {
    /// AC: ratio of phasors.
    Phasor(Complex64),
    /// Transient: ratio of peak-to-peak amplitudes.
    Amplitude(f64),
}

impl Gain {
    pub fn magnitude(self) -> f64 {
        match self {
            Gain::Phasor(c) => c.norm(),
            Gain::Amplitude(a) => a.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// -3 dB frequency in hertz.
    At(f64),
    /// The response never dropped 3 dB inside the sweep.
    BeyondSweep,
}

/// Sample types a gain can be measured on.
pub trait WaveSample: Scalar {
    /// `at` is a frequency for AC waves and the signal period for transient
    /// waves.
    fn gain(wave: &Waveform<Self>, out: &Probe, input: &Probe, at: f64) -> Result<Gain, AnalysisError>;
}

impl WaveSample for Complex64 {
    fn gain(wave: &Waveform<Self>, out: &Probe, input: &Probe, at: f64) -> Result<Gain, AnalysisError> {
        if wave.is_empty() {
            return Err(AnalysisError::InsufficientData("empty sweep".into()));
        }
        let k = nearest_log(&wave.abscissa, at);
        let o = wave.points[k].probe(out)?;
        let i = wave.points[k].probe(input)?;
        if out == input {
            return Ok(Gain::Phasor(Complex64::ONE));
        }
        if i.norm() == 0.0 {
            return Err(AnalysisError::InsufficientData(format!(
                "{input} is zero at {} Hz",
                wave.abscissa[k]
            )));
        }
        Ok(Gain::Phasor(o / i))
    }
}

impl WaveSample for f64 {
    fn gain(wave: &Waveform<Self>, out: &Probe, input: &Probe, period: f64) -> Result<Gain, AnalysisError> {
        let end = *wave.abscissa.last().unwrap_or(&0.0);
        // one settling period plus one measured period
        if period.is_nan() || period <= 0.0 || end < 2.0 * period * (1.0 - 1e-9) {
            return Err(AnalysisError::InsufficientData(format!(
                "need two full periods of {period} s, waveform ends at {end} s"
            )));
        }
        let start = end - period * (1.0 + 1e-9);
        let window: Vec<usize> = (0..wave.len()).filter(|&k| wave.abscissa[k] >= start).collect();
        if window.len() < 3 {
            return Err(AnalysisError::InsufficientData(
                "too few samples in the final period".into(),
            ));
        }
        let p2p = |probe: &Probe| -> Result<f64, AnalysisError> {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for &k in &window {
                let v = wave.points[k].probe(probe)?;
                lo = lo.min(v);
                hi = hi.max(v);
            }
            Ok(hi - lo)
        };
        let o = p2p(out)?;
        let i = p2p(input)?;
        if out == input {
            return Ok(Gain::Amplitude(1.0));
        }
        if i == 0.0 {
            return Err(AnalysisError::InsufficientData(format!("{input} has no swing")));
        }
        Ok(Gain::Amplitude(o / i))
    }
}

fn nearest_log(xs: &[f64], at: f64) -> usize {
    let target = at.max(f64::MIN_POSITIVE).ln();
    (0..xs.len())
        .min_by(|&a, &b| {
            let da = (xs[a].ln() - target).abs();
            let db = (xs[b].ln() - target).abs();
            da.total_cmp(&db)
        })
        .unwrap_or(0)
}

/// Gain `out / input`: the phasor ratio at the sweep point nearest `at`
/// (AC) or the peak-to-peak ratio over the final period of length `at`
/// (transient).
pub fn measure_gain<T: WaveSample>(
    wave: &Waveform<T>,
    out: &Probe,
    input: &Probe,
    at: f64,
) -> Result<Gain, AnalysisError> {
    T::gain(wave, out, input, at)
}

/// First frequency where `|probe / reference|` falls to `1/sqrt(2)` of its
/// value at the lowest sweep point, interpolated linearly in log frequency.
pub fn measure_bandwidth(
    wave: &Waveform<Complex64>,
    probe: &Probe,
    reference: &Probe,
) -> Result<Bandwidth, AnalysisError> {
    let out = wave.column(probe)?;
    let refs = wave.column(reference)?;
    let gains: Vec<f64> = out.iter().zip(&refs).map(|(o, r)| (o / r).norm()).collect();
    let Some(&g0) = gains.first() else {
        return Ok(Bandwidth::BeyondSweep);
    };
    let target = g0 / 2f64.sqrt();
    for k in 1..gains.len() {
        if gains[k] <= target {
            let (g1, g2) = (gains[k - 1], gains[k]);
            let (l1, l2) = (wave.abscissa[k - 1].log10(), wave.abscissa[k].log10());
            let frac = if g1 == g2 { 0.0 } else { (g1 - target) / (g1 - g2) };
            return Ok(Bandwidth::At(10f64.powf(l1 + frac * (l2 - l1))));
        }
    }
    Ok(Bandwidth::BeyondSweep)
}
