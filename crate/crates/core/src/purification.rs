//! Purifications of single-site states, internality, and the uniqueness of
//! purification up to transforms on the purifying system.
//!
//! The purified system is always party 0; every other party purifies it.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::catalog::{bipartite_state, class_state, identify, pure_state};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fiducial::FiducialConvention;
use crate::json::tensor_to_value;
use crate::tensor::{GptTensor, Role};
use crate::transforms::{locally_connected, ReversibleTransform, Subgroup};

/// Which pure states are scanned for purifications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Catalog {
    /// The 24 extremal bipartite states.
    Bipartite24,
    /// The 24 bipartite states and the three tripartite class states.
    Bipartite24PlusTripartite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Purification {
    pub id: String,
    #[serde(serialize_with = "tensor_as_json")]
    pub state: GptTensor,
    /// Kept parties, 0-based.
    pub kept: Vec<usize>,
}

/// Result of a connectivity search between purifications `from` and `to`
/// (indices into the report's list).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub from: usize,
    pub to: usize,
    pub transform: Option<ReversibleTransform>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurificationReport {
    #[serde(serialize_with = "tensor_as_json")]
    pub target: GptTensor,
    pub target_id: Option<String>,
    pub purifications: Vec<Purification>,
    pub unique_up_to_local: bool,
    pub witnesses: Vec<Witness>,
}

fn tensor_as_json<S: Serializer>(t: &GptTensor, s: S) -> std::result::Result<S::Ok, S::Error> {
    tensor_to_value(t).serialize(s)
}

/// `candidate` with every party outside `kept` discarded equals `target`.
pub fn is_purification(candidate: &GptTensor, target: &GptTensor, kept: &[usize]) -> Result<bool> {
    if candidate.role() != Role::State || target.role() != Role::State {
        return Err(Error::RoleMismatch { expected: Role::State, found: Role::Effect });
    }
    if kept.len() != target.n_parties() {
        return Err(Error::PartyMismatch { left: kept.len(), right: target.n_parties() });
    }
    for &k in kept {
        if k >= candidate.n_parties() {
            return Err(Error::BadParty { party: k, n_parties: candidate.n_parties() });
        }
    }
    let discard: Vec<usize> = (0..candidate.n_parties()).filter(|p| !kept.contains(p)).collect();
    Ok(&candidate.marginalize(&discard)? == target)
}

/// Strict interior of the single-site square: `|s1| + |s2| < 1`, `s3 = 1`.
pub fn is_internal_single(s: &GptTensor) -> Result<bool> {
    if s.n_parties() != 1 {
        return Err(Error::Unsupported(format!(
            "internality is decided for single sites only, got {} parties",
            s.n_parties()
        )));
    }
    let e = s.entries();
    Ok(e[2] == Dyadic::ONE && e[0].abs() + e[1].abs() < Dyadic::ONE)
}

fn catalog_states(catalog: Catalog, conv: &FiducialConvention) -> Result<Vec<(String, GptTensor)>> {
    let mut out: Vec<(String, GptTensor)> =
        (0..24).map(|n| Ok((format!("Omega{n}"), bipartite_state(n)?))).collect::<Result<_>>()?;
    if catalog == Catalog::Bipartite24PlusTripartite {
        for class in [44, 45, 46] {
            out.push((format!("class{class}"), class_state(class, conv)?));
        }
    }
    Ok(out)
}

/// Pad with `ω0` sites so that `t` has `n` parties.
fn padded(t: &GptTensor, n: usize) -> Result<GptTensor> {
    let mut out = t.clone();
    while out.n_parties() < n {
        out = out.tensor_product(&pure_state(0)?)?;
    }
    Ok(out)
}

/// Connectivity of every pair `i < j` by transforms of the purifying parties.
/// States with fewer parties are padded with `ω0`.
fn connect_all(purifications: &[Purification]) -> Result<Vec<Witness>> {
    let n = purifications.iter().map(|p| p.state.n_parties()).max().unwrap_or(1);
    let states: Vec<GptTensor> = purifications.iter().map(|p| padded(&p.state, n)).collect::<Result<_>>()?;
    let purifying: Vec<usize> = (1..n).collect();
    let group = Subgroup::on_sites(n, &purifying);
    let pairs: Vec<(usize, usize)> =
        (0..states.len()).flat_map(|i| (i + 1..states.len()).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let transform = locally_connected(&states[i], &states[j], &group)?;
            Ok(Witness { from: i, to: j, transform })
        })
        .collect()
}

fn report(
    target: &GptTensor,
    purifications: Vec<Purification>,
    conv: &FiducialConvention,
) -> Result<PurificationReport> {
    let witnesses = connect_all(&purifications)?;
    Ok(PurificationReport {
        target: target.clone(),
        target_id: identify(target, conv),
        unique_up_to_local: witnesses.iter().all(|w| w.transform.is_some()),
        purifications,
        witnesses,
    })
}

/// Every catalog state whose party-0 marginal equals `target`, with pairwise
/// connectivity by transforms acting on the other parties.
pub fn find_purifications(
    target: &GptTensor,
    catalog: Catalog,
    conv: &FiducialConvention,
) -> Result<PurificationReport> {
    if target.n_parties() != 1 || target.role() != Role::State {
        return Err(Error::Unsupported("purification targets are single-site states".into()));
    }
    let mut found = Vec::new();
    for (id, state) in catalog_states(catalog, conv)? {
        if is_purification(&state, target, &[0])? {
            found.push(Purification { id, state, kept: vec![0] });
        }
    }
    report(target, found, conv)
}

/// Distinct internal single-site states that occur as the party-0 marginal
/// of some catalog state.
pub fn purifiable_internal_states(catalog: Catalog, conv: &FiducialConvention) -> Result<Vec<GptTensor>> {
    let mut out: Vec<GptTensor> = Vec::new();
    for (_, state) in catalog_states(catalog, conv)? {
        let discard: Vec<usize> = (1..state.n_parties()).collect();
        let m = state.marginalize(&discard)?;
        if is_internal_single(&m)? && !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

/// `Ω16 ⊗ ω0` and the class 44 state both purify `μ` on party 0 but no
/// transform of parties 1 and 2 connects them.
pub fn tripartite_uniqueness_counterexample(conv: &FiducialConvention) -> Result<PurificationReport> {
    let psi1 = bipartite_state(16)?.tensor_product(&pure_state(0)?)?;
    let psi2 = class_state(44, conv)?;
    let purifications = vec![
        Purification { id: "Omega16*omega0".into(), state: psi1, kept: vec![0] },
        Purification { id: "class44".into(), state: psi2, kept: vec![0] },
    ];
    let mu = GptTensor::state(1, vec![Dyadic::ZERO, Dyadic::ZERO, Dyadic::ONE])?;
    for p in &purifications {
        if !is_purification(&p.state, &mu, &p.kept)? {
            return Err(Error::InvalidTable {
                invariant: "purification",
                detail: format!("{} does not have marginal mu on party 0", p.id),
            });
        }
    }
    report(&mu, purifications, conv)
}
