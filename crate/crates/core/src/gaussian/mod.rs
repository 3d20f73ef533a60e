//! Gaussian relay broadcast channels: closed-form rate constraints,
//! grid-traced regions and a covariance-matrix oracle for the mutual
//! informations behind them.
//!
//! Channel model: Y3 = X + Z3, Yk = X + X3 + Zk for k = 1, 2, with
//! E[X²] ≤ P, E[X3²] ≤ Pr and Zi ~ N(0, σi²).

mod oracle;
mod regions;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::info::DegradationType;

pub use oracle::{closed_form_values, gaussian_mi_oracle, type2_relay_coherence, GaussianAux};
pub use regions::{
    bhaskaran_constraints, bhaskaran_region, polygon_corners, type1_constraints, type1_region,
    type2_constraints, type2_region, type3_constraints, type3_region, unit_grid, Type1Caps,
    DEFAULT_GRID_1D, DEFAULT_GRID_4D,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("C(x) needs x >= 0, got {0}")]
    NegativeArgument(f64),
    #[error("{name} must be positive and finite, got {value}")]
    InvalidParam { name: &'static str, value: f64 },
    #[error("auxiliary parameter {name} = {value} outside [0, 1]")]
    AuxOutOfRange { name: &'static str, value: f64 },
    #[error("noise variances (s1={s1}, s2={s2}, s3={s3}) do not give a {expected} channel")]
    WrongType {
        expected: DegradationType,
        s1: f64,
        s2: f64,
        s3: f64,
    },
    #[error("degenerate auxiliary: {0}")]
    DegenerateAux(String),
    #[error("grid needs at least 2 points per axis, got {0}")]
    BadGrid(usize),
}

/// C(x) = ½ log2(1 + x).
pub fn c_fn(x: f64) -> Result<f64, GaussianError> {
    if x.is_nan() || x < 0.0 {
        return Err(GaussianError::NegativeArgument(x));
    }
    Ok(cap(x))
}

/// C(x) for arguments already known to be nonnegative up to rounding.
pub(crate) fn cap(x: f64) -> f64 {
    0.5 * x.max(0.0).ln_1p() / std::f64::consts::LN_2
}

pub(crate) fn sqrt0(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub p: f64,
    pub pr: f64,
    pub sigma1sq: f64,
    pub sigma2sq: f64,
    pub sigma3sq: f64,
}

impl GaussianParams {
    pub fn new(p: f64, pr: f64, sigma1sq: f64, sigma2sq: f64, sigma3sq: f64) -> Result<Self, GaussianError> {
        for (name, value) in [
            ("P", p),
            ("Pr", pr),
            ("sigma1sq", sigma1sq),
            ("sigma2sq", sigma2sq),
            ("sigma3sq", sigma3sq),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(GaussianError::InvalidParam { name, value });
            }
        }
        Ok(Self {
            p,
            pr,
            sigma1sq,
            sigma2sq,
            sigma3sq,
        })
    }

    /// Whether the noise ordering admits the physically degraded
    /// decomposition of the given type (ties allowed).
    pub fn admits(&self, ty: DegradationType) -> bool {
        let (s1, s2, s3) = (self.sigma1sq, self.sigma2sq, self.sigma3sq);
        match ty {
            DegradationType::TypeI => s3 <= s1 && s1 <= s2,
            DegradationType::TypeII => s1 <= s3 && s3 <= s2,
            DegradationType::TypeIII => s1 <= s2 && s2 <= s3,
            DegradationType::None => true,
        }
    }

    pub(crate) fn require(&self, ty: DegradationType) -> Result<(), GaussianError> {
        if self.admits(ty) {
            Ok(())
        } else {
            Err(GaussianError::WrongType {
                expected: ty,
                s1: self.sigma1sq,
                s2: self.sigma2sq,
                s3: self.sigma3sq,
            })
        }
    }
}

/// First type (in order I, II, III) whose noise ordering holds.
pub fn classify_gaussian_type(p: &GaussianParams) -> DegradationType {
    [DegradationType::TypeI, DegradationType::TypeII, DegradationType::TypeIII]
        .into_iter()
        .find(|&t| p.admits(t))
        .unwrap_or(DegradationType::None)
}

fn unit(name: &'static str, value: f64) -> Result<f64, GaussianError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(GaussianError::AuxOutOfRange { name, value })
    }
}

/// Power split of the Type-I scheme. θ is the share of P on the private
/// layer, θr the share of Pr on the fresh relay component, and α, β
/// correlation coefficients of those layers with the relay signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Type1Aux {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub theta_r: f64,
}

impl Type1Aux {
    pub fn new(alpha: f64, beta: f64, theta: f64, theta_r: f64) -> Result<Self, GaussianError> {
        Ok(Self {
            alpha: unit("alpha", alpha)?,
            beta: unit("beta", beta)?,
            theta: unit("theta", theta)?,
            theta_r: unit("theta_r", theta_r)?,
        })
    }
}

/// Type-II split: αP on the satellite, (β − α)P on fresh cloud power, the
/// rest coherent with the relay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Type2Aux {
    pub alpha: f64,
    pub beta: f64,
}

impl Type2Aux {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, GaussianError> {
        let alpha = unit("alpha", alpha)?;
        let beta = unit("beta", beta)?;
        if beta < alpha {
            return Err(GaussianError::AuxOutOfRange { name: "beta", value: beta });
        }
        Ok(Self { alpha, beta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn c_fn_examples() {
        assert_eq!(c_fn(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(c_fn(1.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c_fn(3.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(matches!(c_fn(-0.1), Err(GaussianError::NegativeArgument(_))));
    }

    #[test]
    fn gaussian_classification() {
        let t = |s1, s2, s3| classify_gaussian_type(&GaussianParams::new(1.0, 1.0, s1, s2, s3).unwrap());
        assert_eq!(t(0.5, 1.0, 0.2), DegradationType::TypeI);
        assert_eq!(t(0.5, 1.0, 0.7), DegradationType::TypeII);
        assert_eq!(t(0.25, 1.0, 2.0), DegradationType::TypeIII);
        assert_eq!(t(1.0, 1.0, 1.0), DegradationType::TypeI);
        assert_eq!(t(2.0, 1.0, 0.5), DegradationType::None);
        assert!(GaussianParams::new(1.0, 0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn aux_ranges() {
        assert!(Type1Aux::new(0.0, 1.0, 0.5, 1.0).is_ok());
        assert!(Type1Aux::new(1.2, 0.0, 0.0, 0.0).is_err());
        assert!(Type2Aux::new(0.6, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn c_fn_chain_rule(x in 0.0f64..100.0, y in 0.0f64..100.0) {
            let lhs = c_fn(x).unwrap() + c_fn(y / (1.0 + x)).unwrap();
            prop_assert!((lhs - c_fn(x + y).unwrap()).abs() <= 1e-12);
        }

        #[test]
        fn c_fn_monotone(x in 0.0f64..100.0, d in 0.0f64..10.0) {
            prop_assert!(c_fn(x + d).unwrap() >= c_fn(x).unwrap());
        }
    }
}
