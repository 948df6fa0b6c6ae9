//! Fiducial measurement conventions and conversion between state tensors and
//! box tables.
//!
//! A convention assigns to each input `x` of one site a pair of extremal
//! effects, one per outcome, summing to the deterministic effect. Reading a
//! state through the convention gives its box table; since the three
//! functionals `eff(0,0)`, `eff(1,0)` and `e` span the dual of R^3, the table
//! determines the state and can be inverted exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::extremal_effect_vector;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::table::{bit, BoxTable};
use crate::tensor::{dim, unflatten, GptTensor, Role};

/// `outcome_effect[x][a]` is the index of the extremal effect `b^(i)` that
/// fires for outcome `a` of input `x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiducialConvention {
    outcome_effect: [[u8; 2]; 2],
}

const ALL: [[[u8; 2]; 2]; 8] = [
    [[0, 2], [3, 1]],
    [[0, 2], [1, 3]],
    [[2, 0], [3, 1]],
    [[2, 0], [1, 3]],
    [[3, 1], [0, 2]],
    [[3, 1], [2, 0]],
    [[1, 3], [0, 2]],
    [[1, 3], [2, 0]],
];

impl FiducialConvention {
    pub fn new(outcome_effect: [[u8; 2]; 2]) -> Result<Self> {
        let c = FiducialConvention { outcome_effect };
        c.validate()?;
        Ok(c)
    }

    /// Convention 0: `x=0: {b0, b2}`, `x=1: {b3, b1}`.
    pub fn standard() -> Self {
        FiducialConvention { outcome_effect: ALL[0] }
    }

    /// Convention 4: the input roles of the two effect pairs swapped relative
    /// to [`FiducialConvention::standard`] (`x=0: {b3, b1}`, `x=1: {b0, b2}`).
    pub fn swapped_inputs() -> Self {
        FiducialConvention { outcome_effect: ALL[4] }
    }

    /// All eight invertible conventions, indexed by id.
    pub fn all() -> Vec<FiducialConvention> {
        ALL.iter().map(|&outcome_effect| FiducialConvention { outcome_effect }).collect()
    }

    pub fn from_id(id: usize) -> Result<Self> {
        ALL.get(id)
            .map(|&outcome_effect| FiducialConvention { outcome_effect })
            .ok_or_else(|| Error::InvalidConvention(format!("unknown convention id {id} (0..=7)")))
    }

    pub fn id(&self) -> usize {
        ALL.iter().position(|c| *c == self.outcome_effect).expect("validated convention")
    }

    pub fn effect_index(&self, x: usize, a: usize) -> usize {
        self.outcome_effect[x][a] as usize
    }

    pub fn validate(&self) -> Result<()> {
        for x in 0..2 {
            let [i, j] = self.outcome_effect[x];
            if i > 3 || j > 3 {
                return Err(Error::InvalidConvention(format!("effect index out of range at x={x}")));
            }
            // b^(i) + b^(j) = e iff i and j are opposite corners
            if (i + 2) % 4 != j {
                return Err(Error::InvalidConvention(format!("effects b{i} and b{j} at x={x} do not sum to e")));
            }
        }
        if self.outcome_effect[0][0] % 2 == self.outcome_effect[1][0] % 2 {
            return Err(Error::InvalidConvention(
                "both inputs use the same effect pair; tables would not determine states".into(),
            ));
        }
        Ok(())
    }

    /// Row vectors of the four single-site functionals in slot order
    /// `(x, a) = (0,0), (0,1), (1,0), (1,1)`.
    fn functionals(&self) -> [[Dyadic; 3]; 4] {
        let mut out = [[Dyadic::ZERO; 3]; 4];
        for x in 0..2 {
            for a in 0..2 {
                out[2 * x + a] = extremal_effect_vector(self.effect_index(x, a));
            }
        }
        out
    }

    /// Outcome pair `(x, a)` whose effect is `b^(index)`.
    pub fn slot_of_effect(&self, index: usize) -> (usize, usize) {
        for x in 0..2 {
            for a in 0..2 {
                if self.effect_index(x, a) == index {
                    return (x, a);
                }
            }
        }
        unreachable!("a valid convention uses every extremal effect once")
    }

    /// 3x4 map from the local table slots back to state coordinates.
    fn inverse(&self) -> [[Dyadic; 4]; 3] {
        let f = self.functionals();
        let m = [f[0], f[2], [Dyadic::ZERO, Dyadic::ZERO, Dyadic::ONE]];
        let inv = invert3(&m).expect("validated convention is invertible");
        // coordinates of the data vector (P(0|0), P(0|1), P(0|0)+P(1|0))
        // in terms of slots (0,0), (0,1), (1,0), (1,1)
        let select: [[Dyadic; 4]; 3] = [
            [Dyadic::ONE, Dyadic::ZERO, Dyadic::ZERO, Dyadic::ZERO],
            [Dyadic::ZERO, Dyadic::ZERO, Dyadic::ONE, Dyadic::ZERO],
            [Dyadic::ONE, Dyadic::ONE, Dyadic::ZERO, Dyadic::ZERO],
        ];
        let mut out = [[Dyadic::ZERO; 4]; 3];
        for r in 0..3 {
            for c in 0..4 {
                out[r][c] = (0..3).map(|k| inv[r][k] * select[k][c]).sum();
            }
        }
        out
    }
}

impl Default for FiducialConvention {
    fn default() -> Self {
        FiducialConvention::standard()
    }
}

impl fmt::Debug for FiducialConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.outcome_effect;
        write!(f, "Convention#{}(x0:{{b{a},b{b}}}, x1:{{b{c},b{d}}})", self.id())
    }
}

fn invert3(m: &[[Dyadic; 3]; 3]) -> Option<[[Dyadic; 3]; 3]> {
    let cof = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]];
        if (r + c).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    let det: Dyadic = (0..3).map(|c| m[0][c] * cof(0, c)).sum();
    let mut inv = [[Dyadic::ZERO; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            inv[r][c] = cof(c, r).checked_div(det)?;
        }
    }
    Some(inv)
}

/// Multilinear map applying `maps[k]` (rows = output slots, cols = input slots)
/// to site `k` of a tensor with uniform local input dimension.
fn map_sites<const I: usize, const O: usize>(entries: &[Dyadic], n: usize, map: &[[Dyadic; I]; O]) -> Vec<Dyadic> {
    let mut cur = entries.to_vec();
    // after processing sites 0..k, sites < k have dim O and sites >= k dim I
    for site in 0..n {
        let before = O.pow(site as u32);
        let after = I.pow((n - 1 - site) as u32);
        let mut next = vec![Dyadic::ZERO; before * O * after];
        for b in 0..before {
            for o in 0..O {
                for a in 0..after {
                    let mut acc = Dyadic::ZERO;
                    for i in 0..I {
                        let w = map[o][i];
                        if !w.is_zero() {
                            acc += w * cur[(b * I + i) * after + a];
                        }
                    }
                    next[(b * O + o) * after + a] = acc;
                }
            }
        }
        cur = next;
    }
    cur
}

/// Per-site slot layout (index `2x + a`) to packed table layout.
fn slots_to_table(n: usize, slots: &[Dyadic]) -> BoxTable {
    BoxTable::from_fn_unchecked(n, |x, a| {
        let idx = (0..n).fold(0, |acc, k| acc * 4 + 2 * bit(x, k, n) + bit(a, k, n));
        slots[idx]
    })
}

fn table_to_slots(t: &BoxTable) -> Vec<Dyadic> {
    let n = t.n_parties();
    (0..4usize.pow(n as u32))
        .map(|idx| {
            let (mut x, mut a) = (0, 0);
            for k in 0..n {
                let slot = (idx / 4usize.pow((n - 1 - k) as u32)) % 4;
                x = (x << 1) | (slot >> 1);
                a = (a << 1) | (slot & 1);
            }
            t.get(x, a)
        })
        .collect()
}

/// Box table of a state: `P(a⃗|x⃗) = pair(⊗_k eff(x_k, a_k), state)`.
///
/// The result is not validated; for a valid state it satisfies every table
/// invariant.
pub fn state_to_table(state: &GptTensor, conv: &FiducialConvention) -> Result<BoxTable> {
    conv.validate()?;
    if state.role() != Role::State {
        return Err(Error::RoleMismatch { expected: Role::State, found: state.role() });
    }
    let slots = map_sites(state.entries(), state.n_parties(), &conv.functionals());
    Ok(slots_to_table(state.n_parties(), &slots))
}

/// Inverse of [`state_to_table`]. Fails with [`Error::Signalling`] when the
/// table's marginals depend on remote inputs, since no tensor reproduces it.
pub fn table_to_state(table: &BoxTable, conv: &FiducialConvention) -> Result<GptTensor> {
    conv.validate()?;
    table.check_no_signalling()?;
    let n = table.n_parties();
    let entries = map_sites(&table_to_slots(table), n, &conv.inverse());
    debug_assert_eq!(entries.len(), dim(n));
    let state = GptTensor::from_raw(n, entries, Role::State)?;
    // no-signalling guarantees consistency; the round trip confirms it
    if &state_to_table(&state, conv)? != table {
        return Err(Error::InvalidTable {
            invariant: "no-signalling",
            detail: "table is not reproduced by any tensor".into(),
        });
    }
    Ok(state)
}

/// Product effect `⊗_k b^(indices[k])`.
pub fn product_effect(indices: &[usize]) -> Result<GptTensor> {
    let n = indices.len();
    if n == 0 {
        return Err(Error::ZeroParties);
    }
    for &i in indices {
        if i > 3 {
            return Err(Error::IndexOutOfRange { what: "extremal effect", index: i, max: 3 });
        }
    }
    let entries = (0..dim(n))
        .map(|flat| {
            let idx = unflatten(flat, n);
            idx.iter().zip(indices).map(|(&l, &e)| extremal_effect_vector(e)[l]).fold(Dyadic::ONE, |acc, v| acc * v)
        })
        .collect();
    GptTensor::from_raw(n, entries, Role::Effect)
}

/// Product effect selecting outcome string `a` at input string `x`.
pub fn outcome_effect(conv: &FiducialConvention, n: usize, x: usize, a: usize) -> Result<GptTensor> {
    let indices: Vec<usize> = (0..n).map(|k| conv.effect_index(bit(x, k, n), bit(a, k, n))).collect();
    product_effect(&indices)
}
