//! Tritter measurements.
//!
//! A tritter with phases `Θ = (θ₀, θ₁, θ₂)` applies `U_Θ = H̃ · diag(Θ)`, where
//! `H̃ = (ω^{kl}) / √3` is the unitary three-point Fourier matrix. Three
//! detectors behind it read out `Z = diag(1, ω, ω²)`, so the combined
//! measurement is the unitary observable `Z_Θ = U_Θ† Z U_Θ`. Permuting the
//! detectors turns `Z` into `Z†`, which is how a single tritter realises the
//! product of two tritter observables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{omega_pow, zeta_pow, Complex64, CubeRoot, Ket3, Matrix3, EPS};

/// Three unit-modulus phases parameterising a tritter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseTriple([Complex64; 3]);

impl PhaseTriple {
    pub fn new(theta0: Complex64, theta1: Complex64, theta2: Complex64) -> Result<Self> {
        let phases = [theta0, theta1, theta2];
        for (index, p) in phases.iter().enumerate() {
            if (p.norm() - 1.0).abs() > EPS {
                return Err(Error::NonUnitPhase {
                    index,
                    modulus: p.norm(),
                });
            }
        }
        Ok(Self(phases))
    }

    /// Phases `e^{iφⱼ}` from the three phase shifts.
    pub fn from_angles(phi: [f64; 3]) -> Self {
        Self(phi.map(|p| Complex64::from_polar(1.0, p)))
    }

    /// `(1, θ, θ²)`.
    pub fn geometric(theta: Complex64) -> Result<Self> {
        Self::new(1.0.into(), theta, theta * theta)
    }

    /// `(1, ζᵏ, ζ²ᵏ)` with `ζ = e^{2iπ/12}`.
    pub fn zeta_geometric(k: i64) -> Self {
        Self([1.0.into(), zeta_pow(k), zeta_pow(2 * k)])
    }

    /// `(1, 1, 1)`.
    pub fn unit() -> Self {
        Self([1.0.into(); 3])
    }

    pub fn phases(&self) -> [Complex64; 3] {
        self.0
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|p| p.conj()))
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| (a - b).norm() <= eps)
    }
}

impl fmt::Display for PhaseTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(
            f,
            "({:.6}{:+.6}i, {:.6}{:+.6}i, {:.6}{:+.6}i)",
            a.re, a.im, b.re, b.im, c.re, c.im
        )
    }
}

/// Which observable the three detectors read out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DetectorKind {
    /// Detector `k` reports `ω^k`.
    StandardZ,
    /// Detector `k` reports `ω^{-k}`.
    ConjugateZ,
}

impl DetectorKind {
    pub fn outcome(self, detector: usize) -> CubeRoot {
        match self {
            DetectorKind::StandardZ => CubeRoot::from_exponent(detector as i64),
            DetectorKind::ConjugateZ => CubeRoot::from_exponent(-(detector as i64)),
        }
    }

    fn readout(self) -> Matrix3 {
        Matrix3::diagonal([0, 1, 2].map(|k| self.outcome(k).value()))
    }
}

/// A complete trichotomic measurement: tritter phases plus detector readout.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSetting {
    pub phases: PhaseTriple,
    pub detector: DetectorKind,
    pub label: String,
}

impl MeasurementSetting {
    pub fn new(phases: PhaseTriple, detector: DetectorKind, label: impl Into<String>) -> Self {
        Self {
            phases,
            detector,
            label: label.into(),
        }
    }

    pub fn standard(phases: PhaseTriple, label: impl Into<String>) -> Self {
        Self::new(phases, DetectorKind::StandardZ, label)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// Spectral form of a setting's observable.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementContext {
    pub projectors: [Matrix3; 3],
    pub outcomes: [CubeRoot; 3],
}

impl MeasurementContext {
    /// `Σₖ outcomeₖ · projectorₖ`.
    pub fn observable(&self) -> Matrix3 {
        self.projectors
            .iter()
            .zip(&self.outcomes)
            .fold(Matrix3::zeros(), |acc, (p, o)| acc + p.scale(o.value()))
    }

    /// Born probabilities `⟨ψ|Pₖ|ψ⟩` for a single-qutrit state.
    pub fn probabilities(&self, psi: &Ket3) -> [f64; 3] {
        self.projectors.map(|p| psi.inner(&p.apply(psi)).re)
    }
}

/// `H̃ = (ω^{kl}) / √3`.
pub fn fourier_unitary() -> Matrix3 {
    let norm = 1.0 / 3f64.sqrt();
    Matrix3::from_fn(|k, l| omega_pow((k * l) as i64) * norm)
}

/// `U_Θ = H̃ · diag(θ₀, θ₁, θ₂)`.
pub fn tritter_unitary(phases: &PhaseTriple) -> Matrix3 {
    fourier_unitary() * Matrix3::diagonal(phases.phases())
}

/// `U_Θ† Z U_Θ`, or `U_Θ† Z† U_Θ` for a permuted detector.
pub fn observable(setting: &MeasurementSetting) -> Matrix3 {
    let u = tritter_unitary(&setting.phases);
    u.dagger() * setting.detector.readout() * u
}

/// The single tritter realising `Z_Θ · Z_Λ`.
///
/// `Z_Θ Z_Λ = Z_Γ†` with `Γ = (θ₂*λ₁*, θ₀*λ₂*, θ₁*λ₀*)`, so the product is the
/// tritter `Γ` read out with permuted detectors.
pub fn product_setting(first: &PhaseTriple, second: &PhaseTriple) -> MeasurementSetting {
    let [t0, t1, t2] = first.phases();
    let [l0, l1, l2] = second.phases();
    let gamma = PhaseTriple([(t2 * l1).conj(), (t0 * l2).conj(), (t1 * l0).conj()]);
    MeasurementSetting::new(gamma, DetectorKind::ConjugateZ, "")
}

/// Projectors onto the eigenbasis `vₖ = U_Θ† |k⟩` with their outcomes.
pub fn measurement_context(setting: &MeasurementSetting) -> MeasurementContext {
    let u_dag = tritter_unitary(&setting.phases).dagger();
    let projectors = [0, 1, 2].map(|k| {
        let v = u_dag.apply(&Ket3::basis(k));
        v.outer(&v)
    });
    MeasurementContext {
        projectors,
        outcomes: [0, 1, 2].map(|k| setting.detector.outcome(k)),
    }
}
