//! Which announced settings feed which inequality element, and the
//! finite-sample violation estimate built from check rounds.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::sift::{ProtocolVariant, SettingLabel, SiftClass};
use super::RoundRecord;
use crate::bell::{
    violation_report, BellConfiguration, BoundElement, CorrelatorSet, Element, InequalityReport,
    Party, Relabel,
};
use crate::error::{Error, Result};
use crate::linalg::Complex64;

/// A check class's inequality configuration plus the public label behind
/// each bound element (aligned with `configuration.first` / `.second`).
#[derive(Clone, Debug, PartialEq)]
pub struct CheckBinding {
    pub class: SiftClass,
    pub configuration: BellConfiguration,
    pub first_labels: Vec<SettingLabel>,
    pub second_labels: Vec<SettingLabel>,
}

impl CheckBinding {
    /// Announced (alice, bob) labels for the correlator of `first[i]`, `second[j]`.
    pub fn announced(&self, i: usize, j: usize) -> (SettingLabel, SettingLabel) {
        match self.configuration.first_party {
            Party::Alice => (self.first_labels[i], self.second_labels[j]),
            Party::Bob => (self.second_labels[j], self.first_labels[i]),
        }
    }
}

type Slot = (Element, SettingLabel, Relabel);

fn binding(
    variant: ProtocolVariant,
    class: SiftClass,
    first_party: Party,
    first: &[Slot],
    second: &[Slot],
) -> CheckBinding {
    let bound = |party: Party, slots: &[Slot]| -> Vec<BoundElement> {
        slots
            .iter()
            .map(|&(element, label, relabel)| {
                let setting = variant
                    .setting(party, label)
                    .expect("registry labels belong to the variant");
                BoundElement::new(element, setting).relabelled(relabel)
            })
            .collect()
    };
    let configuration = BellConfiguration::new(
        variant.inequality(),
        first_party,
        bound(first_party, first),
        bound(first_party.other(), second),
    )
    .expect("registry covers the inequality");
    CheckBinding {
        class,
        configuration,
        first_labels: first.iter().map(|s| s.1).collect(),
        second_labels: second.iter().map(|s| s.1).collect(),
    }
}

/// Registry of check bindings.
///
/// Each entry attains the noiseless optimum of its inequality on GHZ
/// (`(6+4√3)/9` for CHSH-3, ≈1.693 for hCHSH-3). Where the announced bases are
/// a reordering of the optimal ones, outcomes are relabelled by a cube root
/// or conjugated (a detector permutation).
pub fn check_binding(variant: ProtocolVariant, class: SiftClass) -> Result<CheckBinding> {
    use Element::*;
    use SettingLabel::{Pair, Single};
    let id = Relabel::IDENTITY;
    let conj = Relabel::new(true, 0);
    Ok(match (variant, class) {
        // B₃ = (1, ω²θ, ωθ²) with θ = ζ: observable ω·Z_θ, so multiply by ω²
        (ProtocolVariant::ThreeDeb, SiftClass::Check1) => binding(
            variant,
            class,
            Party::Alice,
            &[(A1, Single(0), id), (A2, Single(2), id)],
            &[(B1, Single(3), Relabel::new(false, 2)), (B2, Single(1), id)],
        ),
        (ProtocolVariant::ThreeDeb, SiftClass::Check2) => binding(
            variant,
            class,
            Party::Alice,
            &[(A1, Single(1), id), (A2, Single(3), id)],
            &[(B1, Single(0), id), (B2, Single(2), id)],
        ),
        // mirror of Check2: Bob's products take the first-party slots
        (ProtocolVariant::HThreeDeb, SiftClass::Check1) => binding(
            variant,
            class,
            Party::Bob,
            &[
                (A1Sq, Pair(1, 1), conj),
                (A1A2, Pair(1, 3), conj),
                (A2Sq, Pair(3, 3), conj),
            ],
            &[
                (B1Sq, Pair(0, 0), conj),
                (B1B2, Pair(0, 2), conj),
                (B2Sq, Pair(2, 2), conj),
            ],
        ),
        (ProtocolVariant::HThreeDeb, SiftClass::Check2) => binding(
            variant,
            class,
            Party::Alice,
            &[
                (A1Sq, Pair(1, 1), id),
                (A1A2, Pair(1, 3), id),
                (A2Sq, Pair(3, 3), id),
            ],
            &[
                (B1Sq, Pair(0, 0), id),
                (B1B2, Pair(0, 2), id),
                (B2Sq, Pair(2, 2), id),
            ],
        ),
        (_, other) => {
            return Err(Error::Config(format!(
                "{other} rounds carry no check statistic"
            )))
        }
    })
}

/// Violation estimate for one check class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub class: SiftClass,
    pub report: InequalityReport,
    /// Upper bound on the standard deviation of `report.violation_factor`.
    pub standard_error: f64,
    pub samples: u64,
    pub aborted: bool,
}

/// Estimates the inequality from a class's check rounds and decides whether
/// to abort: `abort ⟺ value ≤ bound · (1 + margin)`.
///
/// The standard error bounds each round's contribution `Re(κ·x·y)` by its
/// worst-case variance `|κ|²`, `κ` being the coefficient of that correlator.
pub fn estimate_violation(
    rounds: &[RoundRecord],
    variant: ProtocolVariant,
    class: SiftClass,
    abort_margin: f64,
) -> Result<CheckReport> {
    let binding = check_binding(variant, class)?;
    let cfg = &binding.configuration;

    let mut groups: HashMap<(SettingLabel, SettingLabel), Vec<(usize, usize)>> = HashMap::new();
    for i in 0..cfg.first.len() {
        for j in 0..cfg.second.len() {
            groups
                .entry(binding.announced(i, j))
                .or_default()
                .push((i, j));
        }
    }

    // relabelled products accumulate per element pair, not per label pair
    let mut acc: HashMap<(usize, usize), (Complex64, u64)> = HashMap::new();
    for r in rounds {
        if r.sift != class {
            return Err(Error::WrongSiftClass {
                index: r.index,
                found: r.sift,
                expected: class,
            });
        }
        let key = (r.alice_setting, r.bob_setting);
        let Some(cells) = groups.get(&key) else {
            continue;
        };
        for &(i, j) in cells {
            let (ra, rb) = match cfg.first_party {
                Party::Alice => (cfg.first[i].relabel, cfg.second[j].relabel),
                Party::Bob => (cfg.second[j].relabel, cfg.first[i].relabel),
            };
            let product = (ra.apply(r.alice_outcome) * rb.apply(r.bob_outcome)).value();
            let e = acc.entry((i, j)).or_default();
            e.0 += product;
            e.1 += 1;
        }
    }

    let mut set = CorrelatorSet::new();
    let mut counts = HashMap::new();
    for i in 0..cfg.first.len() {
        for j in 0..cfg.second.len() {
            let (a, b) = (cfg.first[i].element, cfg.second[j].element);
            let (sum, n) = acc
                .get(&(i, j))
                .copied()
                .filter(|&(_, n)| n > 0)
                .ok_or(Error::MissingCorrelator(a, b))?;
            set.insert(a, b, sum / n as f64)?;
            counts.insert((a, b), n);
        }
    }

    let inequality = cfg.inequality;
    let bound = inequality.classical_bound();
    let value = inequality.value(&set)?;
    let variance: f64 = inequality
        .linear_coefficients()
        .iter()
        .map(|(pair, k)| k.norm_sqr() / counts[pair] as f64)
        .sum();
    let report = violation_report(inequality, value, bound)?;
    Ok(CheckReport {
        class,
        report,
        standard_error: variance.sqrt() / bound,
        samples: rounds.len() as u64,
        aborted: value <= bound * (1.0 + abort_margin),
    })
}
