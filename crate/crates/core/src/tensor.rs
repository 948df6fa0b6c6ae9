//! Dense order-N tensors over R^3 for states and effects of N squits.
//!
//! Entries are stored row-major: the local index of party 0 varies slowest.
//! Local index 2 is the normalization coordinate, so the deterministic
//! effect of one site is `(0, 0, 1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Local dimension of one squit.
pub const SITE_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    State,
    Effect,
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Role::State => "state",
            Role::Effect => "effect",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GptTensor {
    n_parties: usize,
    entries: Vec<Dyadic>,
    role: Role,
}

impl GptTensor {
    /// Checked state constructor: rejects the zero tensor and anything that is
    /// not normalized.
    pub fn state(n_parties: usize, entries: Vec<Dyadic>) -> Result<Self> {
        let t = Self::from_raw(n_parties, entries, Role::State)?;
        if t.is_zero() {
            return Err(Error::ZeroTensor);
        }
        let norm = t.normalization();
        if norm != Dyadic::ONE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(t)
    }

    /// Checked effect constructor: rejects the zero tensor.
    pub fn effect(n_parties: usize, entries: Vec<Dyadic>) -> Result<Self> {
        let t = Self::from_raw(n_parties, entries, Role::Effect)?;
        if t.is_zero() {
            return Err(Error::ZeroTensor);
        }
        Ok(t)
    }

    /// Shape-checked constructor with no semantic checks. Linear combinations
    /// of states (differences, unnormalized sums) go through here.
    pub fn from_raw(n_parties: usize, entries: Vec<Dyadic>, role: Role) -> Result<Self> {
        if n_parties == 0 {
            return Err(Error::ZeroParties);
        }
        let expected = dim(n_parties);
        if entries.len() != expected {
            return Err(Error::WrongLength { expected, found: entries.len() });
        }
        Ok(GptTensor { n_parties, entries, role })
    }

    pub(crate) fn from_ints(n_parties: usize, ints: &[i64], halves: u32, role: Role) -> Self {
        let entries = ints.iter().map(|&v| Dyadic::new(v as i128, halves)).collect();
        GptTensor::from_raw(n_parties, entries, role).expect("catalog tensor shape")
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn entries(&self) -> &[Dyadic] {
        &self.entries
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Dyadic::is_zero)
    }

    pub fn get(&self, index: &[usize]) -> Dyadic {
        self.entries[flat_index(index)]
    }

    /// Pairing with the deterministic effect: the entry at `(2, 2, ..., 2)`.
    pub fn normalization(&self) -> Dyadic {
        *self.entries.last().expect("non-empty tensor")
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    fn check_same_shape(&self, other: &GptTensor) -> Result<()> {
        if self.n_parties != other.n_parties {
            return Err(Error::PartyMismatch { left: self.n_parties, right: other.n_parties });
        }
        if self.role != other.role {
            return Err(Error::RoleMismatch { expected: self.role, found: other.role });
        }
        Ok(())
    }

    pub fn add(&self, other: &GptTensor) -> Result<GptTensor> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| *a + *b).collect();
        Ok(GptTensor { n_parties: self.n_parties, entries, role: self.role })
    }

    pub fn sub(&self, other: &GptTensor) -> Result<GptTensor> {
        self.add(&other.scale(-Dyadic::ONE))
    }

    pub fn scale(&self, factor: Dyadic) -> GptTensor {
        GptTensor {
            n_parties: self.n_parties,
            entries: self.entries.iter().map(|v| *v * factor).collect(),
            role: self.role,
        }
    }

    /// `Σ coeff_i * t_i`; all terms must share shape and role.
    pub fn combination(terms: &[(Dyadic, &GptTensor)]) -> Result<GptTensor> {
        let (first, rest) = terms.split_first().ok_or(Error::ZeroParties)?;
        rest.iter().try_fold(first.1.scale(first.0), |acc, (c, t)| acc.add(&t.scale(*c)))
    }

    /// Kronecker product; the result has `self`'s parties first.
    pub fn tensor_product(&self, other: &GptTensor) -> Result<GptTensor> {
        if self.role != other.role {
            return Err(Error::RoleMismatch { expected: self.role, found: other.role });
        }
        let entries = self.entries.iter().flat_map(|a| other.entries.iter().map(move |b| *a * *b)).collect();
        Ok(GptTensor { n_parties: self.n_parties + other.n_parties, entries, role: self.role })
    }

    /// Contract the deterministic effect onto every party in `discard`.
    /// Parties are 0-based. An empty set returns the state unchanged.
    pub fn marginalize(&self, discard: &[usize]) -> Result<GptTensor> {
        for &p in discard {
            if p >= self.n_parties {
                return Err(Error::BadParty { party: p, n_parties: self.n_parties });
            }
        }
        let keep: Vec<usize> = (0..self.n_parties).filter(|p| !discard.contains(p)).collect();
        if keep.is_empty() {
            return Err(Error::DiscardAll);
        }
        let n_keep = keep.len();
        let mut entries = vec![Dyadic::ZERO; dim(n_keep)];
        for (flat, value) in self.entries.iter().enumerate() {
            let idx = unflatten(flat, self.n_parties);
            // (0, 0, 1) on a discarded site selects local index 2
            if discard.iter().any(|&p| idx[p] != 2) {
                continue;
            }
            let kept: Vec<usize> = keep.iter().map(|&p| idx[p]).collect();
            entries[flat_index(&kept)] += *value;
        }
        Ok(GptTensor { n_parties: n_keep, entries, role: self.role })
    }

    /// Multiply the local index of `site` by an integer 3x3 matrix.
    pub(crate) fn apply_site_matrix(&self, site: usize, m: &[[i8; 3]; 3]) -> GptTensor {
        let n = self.n_parties;
        let stride = SITE_DIM.pow((n - 1 - site) as u32);
        let mut out = vec![Dyadic::ZERO; self.entries.len()];
        for (flat, slot) in out.iter_mut().enumerate() {
            let row = (flat / stride) % SITE_DIM;
            let base = flat - row * stride;
            let mut acc = Dyadic::ZERO;
            for (col, &c) in m[row].iter().enumerate() {
                match c {
                    0 => {}
                    1 => acc += self.entries[base + col * stride],
                    -1 => acc += -self.entries[base + col * stride],
                    c => acc += self.entries[base + col * stride] * Dyadic::from(c as i64),
                }
            }
            *slot = acc;
        }
        GptTensor { n_parties: n, entries: out, role: self.role }
    }

    /// Reorder parties: new party `k` holds old party `perm[k]`.
    pub(crate) fn permute_parties(&self, perm: &[usize]) -> GptTensor {
        let n = self.n_parties;
        debug_assert_eq!(perm.len(), n);
        let mut out = vec![Dyadic::ZERO; self.entries.len()];
        for (flat, slot) in out.iter_mut().enumerate() {
            let new_idx = unflatten(flat, n);
            let mut old_idx = vec![0; n];
            for k in 0..n {
                old_idx[perm[k]] = new_idx[k];
            }
            *slot = self.entries[flat_index(&old_idx)];
        }
        GptTensor { n_parties: n, entries: out, role: self.role }
    }

    /// Short human-readable form: a vector for one party, matrix rows for two.
    pub fn pretty(&self) -> String {
        let fmt_row = |row: &[Dyadic]| row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ");
        match self.n_parties {
            1 => format!("({})", fmt_row(&self.entries)),
            2 => self.entries.chunks(SITE_DIM).map(|r| format!("[{}]", fmt_row(r))).collect::<Vec<_>>().join("\n"),
            _ => format!("[{}]", fmt_row(&self.entries)),
        }
    }
}

impl fmt::Debug for GptTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[N={}]{:?}", self.role, self.n_parties, self.entries)
    }
}

/// `3^n`.
pub fn dim(n_parties: usize) -> usize {
    SITE_DIM.pow(n_parties as u32)
}

pub(crate) fn flat_index(index: &[usize]) -> usize {
    index.iter().fold(0, |acc, &i| acc * SITE_DIM + i)
}

pub(crate) fn unflatten(mut flat: usize, n_parties: usize) -> Vec<usize> {
    let mut idx = vec![0; n_parties];
    for slot in idx.iter_mut().rev() {
        *slot = flat % SITE_DIM;
        flat /= SITE_DIM;
    }
    idx
}

/// Full contraction of an effect with a state.
pub fn pair(effect: &GptTensor, state: &GptTensor) -> Result<Dyadic> {
    if effect.n_parties != state.n_parties {
        return Err(Error::PartyMismatch { left: effect.n_parties, right: state.n_parties });
    }
    if effect.role != Role::Effect {
        return Err(Error::RoleMismatch { expected: Role::Effect, found: effect.role });
    }
    if state.role != Role::State {
        return Err(Error::RoleMismatch { expected: Role::State, found: state.role });
    }
    Ok(effect.entries.iter().zip(&state.entries).map(|(a, b)| *a * *b).sum())
}

/// Kronecker product of a non-empty list of tensors sharing a role.
pub fn tensor_power(parts: &[&GptTensor]) -> Result<GptTensor> {
    let (first, rest) = parts.split_first().ok_or(Error::ZeroParties)?;
    rest.iter().try_fold((*first).clone(), |acc, t| acc.tensor_product(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(ints: &[i64]) -> GptTensor {
        GptTensor::from_ints(1, ints, 0, Role::State)
    }

    #[test]
    fn constructors_reject_degenerate_input() {
        assert!(matches!(GptTensor::state(0, vec![]), Err(Error::ZeroParties)));
        assert!(matches!(GptTensor::state(1, vec![Dyadic::ZERO; 3]), Err(Error::ZeroTensor)));
        assert!(matches!(
            GptTensor::state(1, vec![Dyadic::ONE, Dyadic::ZERO, Dyadic::from(2)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(GptTensor::state(2, vec![Dyadic::ONE; 3]), Err(Error::WrongLength { expected: 9, found: 3 })));
        assert!(matches!(GptTensor::effect(1, vec![Dyadic::ZERO; 3]), Err(Error::ZeroTensor)));
    }

    #[test]
    fn index_round_trip() {
        for flat in 0..27 {
            assert_eq!(flat_index(&unflatten(flat, 3)), flat);
        }
        assert_eq!(unflatten(5, 2), vec![1, 2]);
    }

    #[test]
    fn product_layout_is_kronecker() {
        let a = v(&[1, 0, 1]);
        let b = v(&[0, -1, 1]);
        let ab = a.tensor_product(&b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(ab.get(&[i, j]), a.entries()[i] * b.entries()[j]);
            }
        }
    }

    #[test]
    fn role_mismatch_is_an_error() {
        let a = v(&[1, 0, 1]);
        let e = GptTensor::from_ints(1, &[0, 0, 1], 0, Role::Effect);
        assert!(matches!(a.tensor_product(&e), Err(Error::RoleMismatch { .. })));
        assert!(pair(&a, &a).is_err());
        assert!(pair(&e, &a.tensor_product(&a).unwrap()).is_err());
    }

    #[test]
    fn marginal_of_product_and_errors() {
        let a = v(&[1, 0, 1]);
        let b = v(&[0, -1, 1]);
        let ab = a.tensor_product(&b).unwrap();
        assert_eq!(ab.marginalize(&[1]).unwrap(), a);
        assert_eq!(ab.marginalize(&[0]).unwrap(), b);
        assert_eq!(ab.marginalize(&[]).unwrap(), ab);
        assert!(matches!(ab.marginalize(&[0, 1]), Err(Error::DiscardAll)));
        assert!(matches!(ab.marginalize(&[2]), Err(Error::BadParty { .. })));
    }

    #[test]
    fn permutation_swaps_factors() {
        let a = v(&[1, 0, 1]);
        let b = v(&[0, -1, 1]);
        let ab = a.tensor_product(&b).unwrap();
        let ba = b.tensor_product(&a).unwrap();
        assert_eq!(ab.permute_parties(&[1, 0]), ba);
    }
}
