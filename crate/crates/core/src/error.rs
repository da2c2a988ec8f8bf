use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter {name}: {reason}")]
    Parameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("state outside the domain: {0}")]
    Domain(&'static str),

    #[error("equilibrium undefined: rho is zero")]
    EquilibriumUndefined,

    #[error("period undefined: radicand {radicand} is not positive")]
    PeriodUndefined { radicand: f64 },

    #[error("long-run coefficients undefined: 1 - sum(ar) = {denominator} (unit root)")]
    LongRunUndefined { denominator: f64 },

    #[error("invalid integrator configuration: {0}")]
    Config(&'static str),

    #[error("first-integral drift {drift:e} exceeds tolerance {tolerance:e} at t = {time}")]
    DriftExceeded {
        time: f64,
        drift: f64,
        tolerance: f64,
    },

    #[error("state left the positive quadrant at t = {time} (u = {u}, v = {v})")]
    LeftQuadrant { time: f64, u: f64, v: f64 },

    #[error("adaptive step size underflow at t = {time}")]
    StepUnderflow { time: f64 },

    #[error("non-finite state at t = {time}")]
    NonFinite { time: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(&'static str),

    #[error("singular design: regressor is constant")]
    SingularDesign,

    #[error("dataset row {row}, column {column}: {reason}")]
    Dataset {
        row: String,
        column: String,
        reason: String,
    },

    #[error("no Harvie-scale employment estimate exists for the US")]
    MissingHarvieUs,
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            reason: "must be finite",
        })
    }
}
