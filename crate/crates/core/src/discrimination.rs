//! Two-outcome measurements that perfectly discriminate pairs of pure states.
//!
//! The construction looks for an input at which the two boxes have different
//! deterministic output parity and sums the product effects over the parity
//! set of the first box. Pairs whose parities agree at every input (for
//! example two product states) fall back to an input where the two output
//! supports are disjoint.

use serde::{Deserialize, Serialize};

use crate::catalog::{bipartite_state, deterministic_effect};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fiducial::{product_effect, state_to_table, FiducialConvention};
use crate::table::{bit, bitstring, parity, BoxTable};
use crate::tensor::{pair, GptTensor, Role};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparatingInput {
    /// Packed input string, party 0 most significant.
    pub input: usize,
    pub parities: (usize, usize),
}

impl SeparatingInput {
    pub fn input_bits(&self, n: usize) -> Vec<usize> {
        (0..n).map(|k| bit(self.input, k, n)).collect()
    }
}

fn parities(t: &BoxTable) -> Result<Vec<usize>> {
    (0..t.strings())
        .map(|x| {
            t.deterministic_parity(x)
                .ok_or_else(|| Error::NonDeterministicParity { input: bitstring(x, t.n_parties()) })
        })
        .collect()
}

fn same_parties(t1: &BoxTable, t2: &BoxTable) -> Result<()> {
    if t1.n_parties() != t2.n_parties() {
        return Err(Error::PartyMismatch { left: t1.n_parties(), right: t2.n_parties() });
    }
    Ok(())
}

/// Every input at which the two output parities differ, in increasing order.
pub fn separating_inputs(t1: &BoxTable, t2: &BoxTable) -> Result<Vec<SeparatingInput>> {
    same_parties(t1, t2)?;
    let (p1, p2) = (parities(t1)?, parities(t2)?);
    Ok((0..t1.strings())
        .filter(|&x| p1[x] != p2[x])
        .map(|x| SeparatingInput { input: x, parities: (p1[x], p2[x]) })
        .collect())
}

/// The lowest input at which the output parities differ.
pub fn find_separating_input(t1: &BoxTable, t2: &BoxTable) -> Result<Option<SeparatingInput>> {
    Ok(separating_inputs(t1, t2)?.into_iter().next())
}

/// The lowest input at which the two output supports do not intersect.
pub fn find_disjoint_input(t1: &BoxTable, t2: &BoxTable) -> Result<Option<usize>> {
    same_parties(t1, t2)?;
    Ok((0..t1.strings()).find(|&x| {
        let s2 = t2.support(x);
        t1.support(x).iter().all(|a| !s2.contains(a))
    }))
}

/// How a POVM was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    ParitySet,
    DisjointSupport,
    Explicit,
}

/// `{a, e − a}` with `a` a sum of product extremal effects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoOutcomePovm {
    /// Effect indices per site of every product term of `a`.
    pub terms: Vec<Vec<usize>>,
    pub a: GptTensor,
    pub complement: GptTensor,
    pub convention: FiducialConvention,
    pub input: Option<usize>,
    pub strategy: Strategy,
}

impl TwoOutcomePovm {
    pub fn from_terms(
        terms: Vec<Vec<usize>>,
        convention: FiducialConvention,
        input: Option<usize>,
        strategy: Strategy,
    ) -> Result<Self> {
        let n = terms.first().map(|t| t.len()).ok_or(Error::ZeroParties)?;
        let mut a = product_effect(&terms[0])?;
        for t in &terms[1..] {
            a = a.add(&product_effect(t)?)?;
        }
        let complement = deterministic_effect(n)?.sub(&a)?;
        Ok(TwoOutcomePovm { terms, a, complement, convention, input, strategy })
    }

    pub fn n_parties(&self) -> usize {
        self.a.n_parties()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<_> = self.terms.iter().map(|t| serde_json::json!({ "sites": t })).collect();
        serde_json::json!({
            "convention": self.convention.id(),
            "input": self.input.map(|x| bitstring(x, self.n_parties())),
            "strategy": self.strategy,
            "terms": terms,
        })
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Term {
            sites: Vec<usize>,
        }
        #[derive(Deserialize)]
        struct Doc {
            convention: usize,
            terms: Vec<Term>,
        }
        let doc: Doc = serde_json::from_value(v.clone())?;
        let n = doc.terms.first().map(|t| t.sites.len()).unwrap_or(0);
        if doc.terms.iter().any(|t| t.sites.len() != n) {
            return Err(Error::Parse("POVM terms have different lengths".into()));
        }
        let terms = doc.terms.into_iter().map(|t| t.sites).collect();
        TwoOutcomePovm::from_terms(terms, FiducialConvention::from_id(doc.convention)?, None, Strategy::Explicit)
    }
}

fn check_pair(s1: &GptTensor, s2: &GptTensor) -> Result<()> {
    for s in [s1, s2] {
        if s.role() != Role::State {
            return Err(Error::RoleMismatch { expected: Role::State, found: s.role() });
        }
    }
    if s1.n_parties() != s2.n_parties() {
        return Err(Error::PartyMismatch { left: s1.n_parties(), right: s2.n_parties() });
    }
    if s1 == s2 {
        return Err(Error::IdenticalStates);
    }
    Ok(())
}

/// A POVM with `pair(a, s1) = 1` and `pair(a, s2) = 0`.
pub fn discriminating_povm(s1: &GptTensor, s2: &GptTensor, conv: &FiducialConvention) -> Result<TwoOutcomePovm> {
    check_pair(s1, s2)?;
    let n = s1.n_parties();
    let (t1, t2) = (state_to_table(s1, conv)?, state_to_table(s2, conv)?);
    let site_effects =
        |x: usize, a: usize| -> Vec<usize> { (0..n).map(|k| conv.effect_index(bit(x, k, n), bit(a, k, n))).collect() };

    let parity_route = match find_separating_input(&t1, &t2) {
        Ok(found) => found,
        Err(Error::NonDeterministicParity { .. }) => None,
        Err(e) => return Err(e),
    };
    if let Some(sep) = parity_route {
        let terms =
            (0..t1.strings()).filter(|&a| parity(a) == sep.parities.0).map(|a| site_effects(sep.input, a)).collect();
        return TwoOutcomePovm::from_terms(terms, *conv, Some(sep.input), Strategy::ParitySet);
    }
    let x = find_disjoint_input(&t1, &t2)?.ok_or(Error::NoSeparatingInput)?;
    let terms = t1.support(x).into_iter().map(|a| site_effects(x, a)).collect();
    TwoOutcomePovm::from_terms(terms, *conv, Some(x), Strategy::DisjointSupport)
}

/// `pair(a, s1) = 1 ∧ pair(a, s2) = 0`, or the same with the roles swapped.
pub fn verify_perfect_discrimination(p: &TwoOutcomePovm, s1: &GptTensor, s2: &GptTensor) -> bool {
    let (Ok(v1), Ok(v2)) = (pair(&p.a, s1), pair(&p.a, s2)) else {
        return false;
    };
    (v1 == Dyadic::ONE && v2.is_zero()) || (v1.is_zero() && v2 == Dyadic::ONE)
}

/// The closed-form bipartite measurement `b^(3(1−x)) ⊗ b^(3(1−y)) + b^(1+x) ⊗ b^(1+y)`.
///
/// It reads parity 0 at input `(x, y)` under the `swapped_inputs` convention.
pub fn closed_form_bipartite_povm(x: usize, y: usize) -> Result<TwoOutcomePovm> {
    if x > 1 || y > 1 {
        return Err(Error::IndexOutOfRange { what: "input bit", index: x.max(y), max: 1 });
    }
    let terms = vec![vec![3 * (1 - x), 3 * (1 - y)], vec![1 + x, 1 + y]];
    TwoOutcomePovm::from_terms(terms, FiducialConvention::swapped_inputs(), Some((x << 1) | y), Strategy::Explicit)
}

/// The four-term measurement separating the class 44 and 45 boxes:
/// `b0⊗b3⊗b0 + b0⊗b1⊗b2 + b2⊗b1⊗b0 + b2⊗b3⊗b2`.
pub fn tripartite_reference_povm() -> TwoOutcomePovm {
    let terms = vec![vec![0, 3, 0], vec![0, 1, 2], vec![2, 1, 0], vec![2, 3, 2]];
    TwoOutcomePovm::from_terms(terms, FiducialConvention::swapped_inputs(), None, Strategy::Explicit)
        .expect("fixed terms")
}

/// `0 ≤ pair(a, s) ≤ 1` and the same for the complement, over the 24
/// extremal bipartite states. Two parties only.
pub fn bounded_on_bipartite_vertices(p: &TwoOutcomePovm) -> Result<bool> {
    if p.n_parties() != 2 {
        return Err(Error::PartyMismatch { left: 2, right: p.n_parties() });
    }
    for n in 0..24 {
        let v = pair(&p.a, &bipartite_state(n)?)?;
        if v.is_negative() || v > Dyadic::ONE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every subset of the 16 bipartite product effects whose sum is a valid
/// effect and discriminates `s1` (outcome `a`) from `s2` perfectly. Each
/// subset is returned as its list of `[i, j]` index pairs.
pub fn exhaustive_bipartite_discriminators(s1: &GptTensor, s2: &GptTensor) -> Result<Vec<Vec<[usize; 2]>>> {
    check_pair(s1, s2)?;
    if s1.n_parties() != 2 {
        return Err(Error::PartyMismatch { left: 2, right: s1.n_parties() });
    }
    let products: Vec<[usize; 2]> = (0..16).map(|c| [c / 4, c % 4]).collect();
    let vertices: Vec<GptTensor> = (0..24).map(bipartite_state).collect::<Result<_>>()?;
    // pairing of every product effect with s1, s2 and every vertex
    let mut rows = Vec::with_capacity(16);
    for p in &products {
        let eff = product_effect(p)?;
        let mut row = vec![pair(&eff, s1)?, pair(&eff, s2)?];
        for v in &vertices {
            row.push(pair(&eff, v)?);
        }
        rows.push(row);
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << 16) {
        let mut sums = vec![Dyadic::ZERO; 26];
        for (i, row) in rows.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (s, v) in sums.iter_mut().zip(row) {
                    *s += *v;
                }
            }
        }
        let valid = sums[2..].iter().all(|v| !v.is_negative() && *v <= Dyadic::ONE);
        if valid && sums[0] == Dyadic::ONE && sums[1].is_zero() {
            out.push((0..16).filter(|i| mask >> i & 1 == 1).map(|i| products[i]).collect());
        }
    }
    Ok(out)
}
