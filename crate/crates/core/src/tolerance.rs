//! Numerical tolerances shared by validation and analysis routines.
//!
//! Defaults can be overridden through the environment:
//! `DYNAMAP_TOL_EQ`, `DYNAMAP_TOL_HERM` and `DYNAMAP_TOL_PSD`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ENV_TOL_EQ: &str = "DYNAMAP_TOL_EQ";
pub const ENV_TOL_HERM: &str = "DYNAMAP_TOL_HERM";
pub const ENV_TOL_PSD: &str = "DYNAMAP_TOL_PSD";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest Frobenius norm of `A - A†` accepted as Hermitian.
    pub herm: f64,
    /// Equality tolerance for traces, unitarity and reconstruction residuals.
    pub eq: f64,
    /// Eigenvalue floor: a matrix is treated as PSD when every eigenvalue is `>= -psd`.
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            eq: 1e-10,
            psd: 1e-9,
        }
    }
}

impl Tolerances {
    /// Defaults with any environment overrides applied.
    pub fn from_env() -> Result<Self> {
        Self::default().with_overrides(|key| std::env::var(key).ok())
    }

    /// Apply overrides from an arbitrary key lookup (the environment, a config map, ...).
    pub fn with_overrides<F>(mut self, lookup: F) -> Result<Self>
    where
        F: Fn(&str) -> Option<String>,
    {
        for (key, slot) in [
            (ENV_TOL_EQ, &mut self.eq),
            (ENV_TOL_HERM, &mut self.herm),
            (ENV_TOL_PSD, &mut self.psd),
        ] {
            if let Some(raw) = lookup(key) {
                let value: f64 = raw.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("{key}={raw:?} is not a number"))
                })?;
                if !(value.is_finite() && value >= 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "{key} must be a finite non-negative number, got {raw:?}"
                    )));
                }
                *slot = value;
            }
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_only_touch_named_keys() {
        let tol = Tolerances::default()
            .with_overrides(|k| (k == ENV_TOL_EQ).then(|| "1e-30".to_string()))
            .unwrap();
        assert_eq!(tol.eq, 1e-30);
        assert_eq!(tol.herm, 1e-10);
        assert_eq!(tol.psd, 1e-9);
    }

    #[test]
    fn rejects_garbage() {
        let err = Tolerances::default().with_overrides(|_| Some("abc".into()));
        assert!(err.is_err());
        let err = Tolerances::default().with_overrides(|_| Some("-1".into()));
        assert!(err.is_err());
    }
}
