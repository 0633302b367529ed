//! Two-qutrit resource states and white noise.

use crate::error::{Error, Result};
use crate::linalg::{validate_density, Complex64, Ket9, Matrix9, EPS};

/// `γ = (√11 − √3) / 2`, the amplitude that maximises the CHSH-3 value.
pub fn nme_optimal_gamma() -> f64 {
    (11f64.sqrt() - 3f64.sqrt()) / 2.0
}

/// Pure state of Alice's and Bob's qutrits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQutritPure {
    ket: Ket9,
}

impl TwoQutritPure {
    pub fn new(ket: Ket9) -> Result<Self> {
        if !ket.is_normalized(EPS) {
            return Err(Error::NotNormalized(ket.norm()));
        }
        Ok(Self { ket })
    }

    pub fn ket(&self) -> &Ket9 {
        &self.ket
    }

    /// Amplitude of `|a b⟩`.
    pub fn amplitude(&self, alice: usize, bob: usize) -> Complex64 {
        self.ket[3 * alice + bob]
    }

    pub fn projector(&self) -> TwoQutritDensity {
        TwoQutritDensity {
            rho: self.ket.outer(&self.ket),
        }
    }
}

/// Density matrix on the 9-dimensional pair space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQutritDensity {
    rho: Matrix9,
}

impl TwoQutritDensity {
    pub fn new(rho: Matrix9) -> Result<Self> {
        validate_density(&rho, EPS)?;
        Ok(Self { rho })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho: Matrix9::identity().scale((1.0 / 9.0).into()),
        }
    }

    pub fn matrix(&self) -> &Matrix9 {
        &self.rho
    }
}

/// `(|00⟩ + |11⟩ + |22⟩) / √3`.
pub fn ghz() -> TwoQutritPure {
    diagonal_state([1.0, 1.0, 1.0])
}

/// `(|00⟩ + γ|11⟩ + |22⟩) / √(2 + γ²)`.
pub fn nme(gamma: f64) -> Result<TwoQutritPure> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::NonPositiveGamma(gamma));
    }
    Ok(diagonal_state([1.0, gamma, 1.0]))
}

fn diagonal_state(weights: [f64; 3]) -> TwoQutritPure {
    let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    let mut amps = [Complex64::new(0.0, 0.0); 9];
    for (k, w) in weights.iter().enumerate() {
        amps[4 * k] = (w / norm).into();
    }
    TwoQutritPure {
        ket: Ket9::from_amplitudes(amps),
    }
}

/// `F · I/9 + (1 − F) · |ψ⟩⟨ψ|`.
pub fn mix_noise(pure: &TwoQutritPure, noise: f64) -> Result<TwoQutritDensity> {
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::NoiseOutOfRange(noise));
    }
    let white = Matrix9::identity().scale((noise / 9.0).into());
    let signal = pure.ket.outer(&pure.ket).scale((1.0 - noise).into());
    Ok(TwoQutritDensity {
        rho: white + signal,
    })
}
