//! Unit conventions.
//!
//! Everything is expressed with ħ = m = 1 and a positive field, eB > 0. The
//! magnetic length `l` is the only free scale: eB/c = 1/l², ω_c = 1/l², and
//! the reduced vector potential a = (e/ħc)A has curl 1/l².

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    l: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units { l: 1.0 }
    }
}

impl Units {
    pub fn new(magnetic_length: f64) -> Result<Self> {
        if magnetic_length.is_finite() && magnetic_length > 0.0 {
            Ok(Units { l: magnetic_length })
        } else {
            Err(Error::InvalidLength(magnetic_length))
        }
    }

    /// Magnetic length l = √(ħc/eB).
    #[inline]
    pub fn l(&self) -> f64 {
        self.l
    }

    #[inline]
    pub fn l2(&self) -> f64 {
        self.l * self.l
    }

    /// Cyclotron frequency eB/mc.
    #[inline]
    pub fn omega_c(&self) -> f64 {
        1.0 / self.l2()
    }

    /// eB/c, which equals the curl of the reduced vector potential.
    #[inline]
    pub fn field(&self) -> f64 {
        1.0 / self.l2()
    }

    #[inline]
    pub fn hbar(&self) -> f64 {
        1.0
    }

    #[inline]
    pub fn mass(&self) -> f64 {
        1.0
    }

    /// Energy ħω_c(N + 1/2) of Landau level `n`.
    pub fn landau_energy(&self, n: usize) -> f64 {
        self.omega_c() * (n as f64 + 0.5)
    }
}
