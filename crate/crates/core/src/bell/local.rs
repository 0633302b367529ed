//! Exhaustive deterministic local models.
//!
//! A deterministic local model assigns a fixed outcome in `{1, ω, ω²}` to
//! every element. For hCHSH-3 the product elements must respect
//! `a(X₁X₂) = a(X₁)·a(X₂)` and `a(X²) = a(X)²`; the enumeration walks all
//! `3⁶` element-level assignments and keeps the consistent ones.

use super::{CorrelatorSet, Inequality};
use crate::linalg::CubeRoot;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalModelSummary {
    /// Element-level assignments visited.
    pub assignments: usize,
    /// Assignments satisfying the multiplicative constraints.
    pub consistent: usize,
    /// Largest inequality value over the consistent assignments.
    pub max_value: f64,
    /// How many consistent assignments reach `max_value` (to 1e-9).
    pub attaining: usize,
    /// Largest value when the constraints are ignored.
    pub max_unconstrained: f64,
}

/// `(x, y, z)` is `(a₁², a₁a₂, a₂²)` for some cube roots `a₁, a₂`.
fn multiplicative(x: CubeRoot, y: CubeRoot, z: CubeRoot) -> bool {
    // the unique square root of a cube root x is x² = x*
    let a1 = x.conj();
    let a2 = z.conj();
    a1 * a1 == x && a2 * a2 == z && a1 * a2 == y
}

pub fn enumerate_local_models(inequality: Inequality) -> LocalModelSummary {
    let first = inequality.first_elements();
    let second = inequality.second_elements();
    let n = first.len() + second.len();

    let mut values = Vec::new();
    for assignment in cube_root_tuples(n) {
        let (fa, sb) = assignment.split_at(first.len());
        let ok = match inequality {
            Inequality::Chsh3 => true,
            Inequality::Hchsh3 => {
                multiplicative(fa[0], fa[1], fa[2]) && multiplicative(sb[0], sb[1], sb[2])
            }
        };
        let mut c = CorrelatorSet::new();
        for (&ea, &oa) in first.iter().zip(fa) {
            for (&eb, &ob) in second.iter().zip(sb) {
                c.insert(ea, eb, (oa * ob).value()).expect("unit modulus");
            }
        }
        let v = inequality.value(&c).expect("complete set");
        values.push((ok, v));
    }

    let max_value = values
        .iter()
        .filter(|(ok, _)| *ok)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    LocalModelSummary {
        assignments: values.len(),
        consistent: values.iter().filter(|(ok, _)| *ok).count(),
        max_value,
        attaining: values
            .iter()
            .filter(|(ok, v)| *ok && (v - max_value).abs() < 1e-9)
            .count(),
        max_unconstrained: values
            .iter()
            .map(|(_, v)| *v)
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

/// All `3ⁿ` tuples of cube roots, in lexicographic exponent order.
fn cube_root_tuples(n: usize) -> impl Iterator<Item = Vec<CubeRoot>> {
    (0..3usize.pow(n as u32)).map(move |mut idx| {
        let mut out = vec![CubeRoot::ONE; n];
        for slot in out.iter_mut().rev() {
            *slot = CubeRoot::from_exponent((idx % 3) as i64);
            idx /= 3;
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::Element;

    #[test]
    fn consistency_filter() {
        let w = CubeRoot::from_exponent(1);
        // a1 = w, a2 = 1 → (w², w, 1)
        assert!(multiplicative(w * w, w, CubeRoot::ONE));
        assert!(!multiplicative(w * w, CubeRoot::ONE, CubeRoot::ONE));
        let count = cube_root_tuples(3)
            .filter(|t| multiplicative(t[0], t[1], t[2]))
            .count();
        assert_eq!(count, 9);
    }

    #[test]
    fn element_order_matches_registry() {
        assert_eq!(
            Inequality::Hchsh3.first_elements(),
            &[Element::A1Sq, Element::A1A2, Element::A2Sq]
        );
    }
}
