//! Membership tests for the state and effect polytopes.

use std::fmt;

use crate::catalog::{bipartite_state, deterministic_effect, pure_state};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fiducial::product_effect;
use crate::tensor::{pair, GptTensor, Role};

/// Why a tensor is not a valid state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateViolation {
    WrongRole,
    NotNormalized(Dyadic),
    /// Pairing with the product effect `⊗ b^(effect[k])` is negative.
    Negative {
        effect: Vec<usize>,
        value: Dyadic,
    },
}

impl fmt::Display for StateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateViolation::WrongRole => write!(f, "tensor is an effect, not a state"),
            StateViolation::NotNormalized(v) => write!(f, "pairing with e is {v}, not 1"),
            StateViolation::Negative { effect, value } => {
                let name: Vec<String> = effect.iter().map(|i| format!("b{i}")).collect();
                write!(f, "pairing with {} is {value}", name.join("⊗"))
            }
        }
    }
}

/// Product effects are the only extremal effects, so a normalized tensor is a
/// state iff every product of extremal effects pairs non-negatively with it.
pub fn state_violation(t: &GptTensor) -> Option<StateViolation> {
    if t.role() != Role::State {
        return Some(StateViolation::WrongRole);
    }
    let n = t.n_parties();
    let e = deterministic_effect(n).expect("n >= 1");
    let norm = pair(&e, t).expect("matching shapes");
    if norm != Dyadic::ONE {
        return Some(StateViolation::NotNormalized(norm));
    }
    for code in 0..4usize.pow(n as u32) {
        let indices: Vec<usize> = (0..n).map(|k| (code >> (2 * (n - 1 - k))) & 3).collect();
        let effect = product_effect(&indices).expect("indices in range");
        let value = pair(&effect, t).expect("matching shapes");
        if value.is_negative() {
            return Some(StateViolation::Negative { effect: indices, value });
        }
    }
    None
}

pub fn is_valid_state(t: &GptTensor) -> bool {
    state_violation(t).is_none()
}

/// Effect validity for one or two parties: every extremal state must pair
/// into `[0, 1]`.
pub fn is_valid_effect(t: &GptTensor) -> Result<bool> {
    if t.role() != Role::Effect {
        return Err(Error::RoleMismatch { expected: Role::Effect, found: t.role() });
    }
    let vertices: Vec<GptTensor> = match t.n_parties() {
        1 => (0..4).map(pure_state).collect::<Result<_>>()?,
        2 => (0..24).map(bipartite_state).collect::<Result<_>>()?,
        n => {
            return Err(Error::Unsupported(format!(
                "effect validity needs the extremal states of {n} parties, which are not enumerated"
            )))
        }
    };
    for s in &vertices {
        let p = pair(t, s)?;
        if p.is_negative() || p > Dyadic::ONE {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{extremal_effect, maximally_mixed};

    #[test]
    fn catalog_states_are_valid() {
        for n in 0..4 {
            assert!(is_valid_state(&pure_state(n).unwrap()));
        }
        for n in 0..24 {
            assert!(is_valid_state(&bipartite_state(n).unwrap()), "Omega{n}");
        }
        assert!(is_valid_state(&maximally_mixed(3).unwrap()));
    }

    #[test]
    fn outside_the_polytope() {
        let o16 = bipartite_state(16).unwrap();
        let o17 = bipartite_state(17).unwrap();
        let t = o16.scale(Dyadic::from(2)).sub(&o17).unwrap();
        assert!(matches!(state_violation(&t), Some(StateViolation::Negative { .. })));
        let unnormalized = o16.scale(Dyadic::HALF);
        assert_eq!(state_violation(&unnormalized), Some(StateViolation::NotNormalized(Dyadic::HALF)));
        let effect = extremal_effect(0).unwrap();
        assert_eq!(state_violation(&effect), Some(StateViolation::WrongRole));
    }

    #[test]
    fn effect_checks() {
        let b = |i| extremal_effect(i).unwrap();
        assert!(is_valid_effect(&b(0).tensor_product(&b(3)).unwrap()).unwrap());
        let sum = b(0).tensor_product(&b(0)).unwrap().add(&b(2).tensor_product(&b(2)).unwrap()).unwrap();
        assert!(is_valid_effect(&sum).unwrap());
        assert!(!is_valid_effect(&b(0).scale(Dyadic::from(2))).unwrap());
        let three = crate::catalog::deterministic_effect(3).unwrap();
        assert!(matches!(is_valid_effect(&three), Err(Error::Unsupported(_))));
        assert!(is_valid_effect(&pure_state(0).unwrap()).is_err());
    }
}
