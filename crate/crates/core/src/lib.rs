//! Simulation and analysis of entangled-qutrit key distribution.
//!
//! - [`linalg`]: fixed-size complex matrices and kets (dimensions 3 and 9).
//! - [`tritter`]: three-port beam-splitter measurements and their observables.
//! - [`states`]: GHZ, non-maximally entangled and noisy two-qutrit states.
//! - [`bell`]: correlators, CHSH-3 and hCHSH-3, local-model bounds.
//! - [`protocol`]: the 3DEB and h3DEB protocols, sifting, key and checks.

pub mod bell;
pub mod error;
pub mod linalg;
pub mod protocol;
pub mod states;
pub mod tritter;

pub use bell::{
    chsh3_optimal_configuration, enumerate_local_models, hchsh3_optimal_configuration,
    violation_report, BellConfiguration, CorrelatorSet, Element, Inequality, InequalityReport,
    JointDistribution, Party,
};
pub use error::{Error, Result};
pub use linalg::{Complex64, CubeRoot, Ket3, Ket9, Matrix3, Matrix9};
pub use protocol::{
    run_protocol, CheckReport, ProtocolConfig, ProtocolOutcome, ProtocolVariant, RoundRecord,
    Session, SettingLabel, SiftClass,
};
pub use states::{ghz, mix_noise, nme, nme_optimal_gamma, TwoQutritDensity, TwoQutritPure};
pub use tritter::{observable, product_setting, DetectorKind, MeasurementSetting, PhaseTriple};
