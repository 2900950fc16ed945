use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("bias current and thermal voltage must be positive (got I={current}, Vt={vt})")]
pub struct BiasError {
    pub current: f64,
    pub vt: f64,
}

fn check(current: f64, vt: f64) -> Result<(), BiasError> {
    if current > 0.0 && vt > 0.0 {
        Ok(())
    } else {
        Err(BiasError { current, vt })
    }
}

/// X-port resistance of a translinear CCCII: `Rx = Vt / (2 Ib)`.
///
/// Its transconductance 1/Rx is four times that of a bipolar OTA biased
/// with the same current (see [`ota_gm`]).
pub fn cccii_input_resistance(ib: f64, vt: f64) -> Result<f64, BiasError> {
    check(ib, vt)?;
    Ok(vt / (2.0 * ib))
}

/// Bipolar OTA transconductance `gm = I / (2 Vt)`.
pub fn ota_gm(current: f64, vt: f64) -> Result<f64, BiasError> {
    check(current, vt)?;
    Ok(current / (2.0 * vt))
}
