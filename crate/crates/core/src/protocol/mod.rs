//! Round-by-round simulation of the 3DEB and h3DEB protocols.
//!
//! Each round a fresh noisy GHZ pair is shared, both parties draw a public
//! setting label uniformly and independently, measure, and the pair of labels
//! decides whether the round feeds the key, one of the two check statistics,
//! or is discarded.

mod check;
mod sift;
pub mod transcript;

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use check::{check_binding, estimate_violation, CheckBinding, CheckReport};
pub use sift::{
    alice_setting_3deb, bob_setting_3deb, setting_h3deb, sift_3deb, sift_h3deb, ProtocolVariant,
    SettingLabel, SiftClass, H3DEB_PAIRS,
};

use crate::bell::{JointDistribution, Party};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, CubeRoot, EPS};
use crate::states::{ghz, mix_noise, TwoQutritDensity};
use crate::tritter::MeasurementSetting;

/// One protocol round as both parties record it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub index: u64,
    pub alice_setting: SettingLabel,
    pub bob_setting: SettingLabel,
    pub alice_outcome: CubeRoot,
    pub bob_outcome: CubeRoot,
    pub sift: SiftClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub variant: ProtocolVariant,
    /// White-noise fraction `F` mixed into the shared GHZ pair.
    pub noise: f64,
    pub target_key_length: usize,
    /// Check rounds required in each check class before deciding.
    pub min_check_rounds: u64,
    pub abort_margin: f64,
    pub seed: u64,
}

impl ProtocolConfig {
    pub const DEFAULT_MIN_CHECK_ROUNDS: u64 = 10_000;

    pub fn new(variant: ProtocolVariant, noise: f64, target_key_length: usize, seed: u64) -> Self {
        Self {
            variant,
            noise,
            target_key_length,
            min_check_rounds: Self::DEFAULT_MIN_CHECK_ROUNDS,
            abort_margin: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::NoiseOutOfRange(self.noise));
        }
        if !(self.abort_margin.is_finite() && self.abort_margin >= 0.0) {
            return Err(Error::Config(format!(
                "abort margin must be a non-negative number, got {}",
                self.abort_margin
            )));
        }
        if self.min_check_rounds == 0 {
            return Err(Error::Config("min_check_rounds must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolOutcome {
    pub config: ProtocolConfig,
    pub rounds: Vec<RoundRecord>,
    /// Empty when aborted.
    pub alice_key: Vec<u8>,
    /// Empty when aborted.
    pub bob_key: Vec<u8>,
    /// Check1 then Check2.
    pub checks: Vec<CheckReport>,
    pub aborted: bool,
}

impl ProtocolOutcome {
    /// Fraction of key positions where the two keys agree (1 for an empty key).
    pub fn key_agreement(&self) -> f64 {
        if self.alice_key.is_empty() {
            return 1.0;
        }
        let same = self
            .alice_key
            .iter()
            .zip(&self.bob_key)
            .filter(|(a, b)| a == b)
            .count();
        same as f64 / self.alice_key.len() as f64
    }

    pub fn count(&self, class: SiftClass) -> usize {
        self.rounds.iter().filter(|r| r.sift == class).count()
    }
}

/// Draws one joint detector cell from `dist`.
pub fn sample_joint<R: Rng + ?Sized>(
    dist: &JointDistribution,
    rng: &mut R,
) -> (CubeRoot, CubeRoot) {
    let total: f64 = dist.probabilities.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (cell, &p) in dist.probabilities.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = cell;
        if u < acc {
            return dist.outcomes(cell);
        }
    }
    dist.outcomes(last)
}

/// Samples both parties' outcomes for one shared pair.
pub fn measure_round<R: Rng + ?Sized>(
    rho: &TwoQutritDensity,
    alice: &MeasurementSetting,
    bob: &MeasurementSetting,
    rng: &mut R,
) -> Result<(CubeRoot, CubeRoot)> {
    Ok(sample_joint(&JointDistribution::new(rho, alice, bob)?, rng))
}

/// Key trit of a key-round outcome.
///
/// Key rounds only ever produce pairs with `a·b = 1`, so Bob reads his trit
/// off the conjugate of his outcome.
pub fn key_trit(outcome: CubeRoot, party: Party) -> u8 {
    match party {
        Party::Alice => outcome.exponent(),
        Party::Bob => outcome.conj().exponent(),
    }
}

pub fn key_trit_complex(outcome: Complex64, party: Party) -> Result<u8> {
    Ok(key_trit(CubeRoot::from_complex(outcome, 1e3 * EPS)?, party))
}

/// A running protocol: shared state, RNG streams and cached distributions.
///
/// The seed drives three independent ChaCha8 streams: Alice's setting
/// choices, Bob's setting choices and the measurement outcomes.
pub struct Session {
    variant: ProtocolVariant,
    rho: TwoQutritDensity,
    labels: Vec<SettingLabel>,
    alice_rng: ChaCha8Rng,
    bob_rng: ChaCha8Rng,
    measure_rng: ChaCha8Rng,
    cache: HashMap<(SettingLabel, SettingLabel), JointDistribution>,
    next_index: u64,
}

impl Session {
    pub fn new(variant: ProtocolVariant, noise: f64, seed: u64) -> Result<Self> {
        let stream = |n| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(n);
            rng
        };
        Ok(Self {
            variant,
            rho: mix_noise(&ghz(), noise)?,
            labels: variant.labels(),
            alice_rng: stream(0),
            bob_rng: stream(1),
            measure_rng: stream(2),
            cache: HashMap::new(),
            next_index: 0,
        })
    }

    pub fn variant(&self) -> ProtocolVariant {
        self.variant
    }

    pub fn next_round(&mut self) -> Result<RoundRecord> {
        let n = self.labels.len();
        let alice = self.labels[self.alice_rng.random_range(0..n)];
        let bob = self.labels[self.bob_rng.random_range(0..n)];
        let dist = match self.cache.get(&(alice, bob)) {
            Some(d) => *d,
            None => {
                let d = JointDistribution::new(
                    &self.rho,
                    &self.variant.setting(Party::Alice, alice)?,
                    &self.variant.setting(Party::Bob, bob)?,
                )?;
                self.cache.insert((alice, bob), d);
                d
            }
        };
        let (alice_outcome, bob_outcome) = sample_joint(&dist, &mut self.measure_rng);
        let record = RoundRecord {
            index: self.next_index,
            alice_setting: alice,
            bob_setting: bob,
            alice_outcome,
            bob_outcome,
            sift: self.variant.sift(alice, bob)?,
        };
        self.next_index += 1;
        Ok(record)
    }
}

impl Iterator for Session {
    type Item = Result<RoundRecord>;
    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_round())
    }
}

/// Runs rounds until the key is long enough and both check classes hold at
/// least `min_check_rounds` rounds covering every label pair, then decides.
/// Aborts if either check class fails to violate its inequality.
pub fn run_protocol(config: &ProtocolConfig) -> Result<ProtocolOutcome> {
    config.validate()?;
    let variant = config.variant;
    let mut session = Session::new(variant, config.noise, config.seed)?;
    let pairs_per_class = match variant {
        ProtocolVariant::ThreeDeb => 4,
        ProtocolVariant::HThreeDeb => 9,
    };

    let mut rounds = Vec::new();
    let mut alice_key = Vec::new();
    let mut bob_key = Vec::new();
    let mut checks: [(u64, HashSet<(SettingLabel, SettingLabel)>); 2] = Default::default();
    let done = |key: usize, checks: &[(u64, HashSet<_>); 2]| {
        key >= config.target_key_length
            && checks
                .iter()
                .all(|(n, seen)| *n >= config.min_check_rounds && seen.len() == pairs_per_class)
    };

    while !done(alice_key.len(), &checks) {
        let r = session.next_round()?;
        match r.sift {
            SiftClass::Key => {
                alice_key.push(key_trit(r.alice_outcome, Party::Alice));
                bob_key.push(key_trit(r.bob_outcome, Party::Bob));
            }
            SiftClass::Check1 | SiftClass::Check2 => {
                let slot = &mut checks[(r.sift == SiftClass::Check2) as usize];
                slot.0 += 1;
                slot.1.insert((r.alice_setting, r.bob_setting));
            }
            SiftClass::Discard => {}
        }
        rounds.push(r);
    }

    let mut reports = Vec::with_capacity(2);
    for class in [SiftClass::Check1, SiftClass::Check2] {
        let selected: Vec<RoundRecord> =
            rounds.iter().filter(|r| r.sift == class).copied().collect();
        reports.push(estimate_violation(
            &selected,
            variant,
            class,
            config.abort_margin,
        )?);
    }
    let aborted = reports.iter().any(|c| c.aborted);
    if aborted {
        alice_key.clear();
        bob_key.clear();
    } else {
        alice_key.truncate(config.target_key_length);
        bob_key.truncate(config.target_key_length);
    }
    Ok(ProtocolOutcome {
        config: *config,
        rounds,
        alice_key,
        bob_key,
        checks: reports,
        aborted,
    })
}
