//! The explicit states, effects and boxes of the theory.

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fiducial::{state_to_table, table_to_state, FiducialConvention};
use crate::table::{bit, parity, BoxTable};
use crate::tensor::{tensor_power, GptTensor, Role};
use crate::transforms::{orbit, Subgroup};

const OMEGA: [[i64; 3]; 4] = [[1, 0, 1], [0, -1, 1], [-1, 0, 1], [0, 1, 1]];

// entries of b^(i), in halves
const EFFECT_HALVES: [[i64; 3]; 4] = [[1, 1, 1], [-1, 1, 1], [-1, -1, 1], [1, -1, 1]];

// the eight non-local bipartite states, entries in halves, row-major
const NONLOCAL_HALVES: [[i64; 9]; 8] = [
    [-1, 1, 0, 1, 1, 0, 0, 0, 2],
    [-1, -1, 0, -1, 1, 0, 0, 0, 2],
    [1, -1, 0, -1, -1, 0, 0, 0, 2],
    [-1, 1, 0, -1, -1, 0, 0, 0, 2],
    [-1, -1, 0, 1, -1, 0, 0, 0, 2],
    [1, -1, 0, 1, 1, 0, 0, 0, 2],
    [1, 1, 0, -1, 1, 0, 0, 0, 2],
    [1, 1, 0, 1, -1, 0, 0, 0, 2],
];

fn check_index(what: &'static str, index: usize, max: usize) -> Result<()> {
    if index > max {
        return Err(Error::IndexOutOfRange { what, index, max });
    }
    Ok(())
}

fn indicator(cond: bool, value: Dyadic) -> Dyadic {
    if cond {
        value
    } else {
        Dyadic::ZERO
    }
}

/// Pure single-site state `ω_n`.
pub fn pure_state(n: usize) -> Result<GptTensor> {
    check_index("pure state", n, 3)?;
    Ok(GptTensor::from_ints(1, &OMEGA[n], 0, Role::State))
}

pub(crate) fn extremal_effect_vector(i: usize) -> [Dyadic; 3] {
    EFFECT_HALVES[i].map(|v| Dyadic::new(v as i128, 1))
}

/// Extremal single-site effect `b^(i)`.
pub fn extremal_effect(i: usize) -> Result<GptTensor> {
    check_index("extremal effect", i, 3)?;
    Ok(GptTensor::from_ints(1, &EFFECT_HALVES[i], 1, Role::Effect))
}

/// `e^{⊗N}` with `e = (0, 0, 1)`.
pub fn deterministic_effect(n_parties: usize) -> Result<GptTensor> {
    let e = GptTensor::from_ints(1, &[0, 0, 1], 0, Role::Effect);
    power(&e, n_parties)
}

/// `μ^{⊗N}` with `μ = (0, 0, 1)`.
pub fn maximally_mixed(n_parties: usize) -> Result<GptTensor> {
    let mu = GptTensor::from_ints(1, &[0, 0, 1], 0, Role::State);
    power(&mu, n_parties)
}

fn power(t: &GptTensor, n: usize) -> Result<GptTensor> {
    if n == 0 {
        return Err(Error::ZeroParties);
    }
    tensor_power(&vec![t; n])
}

/// Pure bipartite state `Ω_n`: products `ω_i ⊗ ω_j` for `n = 4i + j < 16`,
/// the eight non-local states for `16 ≤ n ≤ 23`.
pub fn bipartite_state(n: usize) -> Result<GptTensor> {
    check_index("bipartite state", n, 23)?;
    if n < 16 {
        pure_state(n / 4)?.tensor_product(&pure_state(n % 4)?)
    } else {
        Ok(GptTensor::from_ints(2, &NONLOCAL_HALVES[n - 16], 1, Role::State))
    }
}

/// Single-site deterministic box `p_{αβ}`: `a = αx ⊕ β`.
pub fn box_table_single(alpha: u8, beta: u8) -> BoxTable {
    let (alpha, beta) = ((alpha & 1) as usize, (beta & 1) as usize);
    BoxTable::from_fn(1, |x, a| indicator(a == (alpha * x) ^ beta, Dyadic::ONE)).expect("deterministic single box")
}

/// Local bipartite box: `a = αx ⊕ β`, `b = γy ⊕ δ`.
pub fn box_table_local(alpha: u8, beta: u8, gamma: u8, delta: u8) -> BoxTable {
    let [alpha, beta, gamma, delta] = [alpha, beta, gamma, delta].map(|v| (v & 1) as usize);
    BoxTable::from_fn(2, |xy, ab| {
        let (x, y) = (bit(xy, 0, 2), bit(xy, 1, 2));
        let (a, b) = (bit(ab, 0, 2), bit(ab, 1, 2));
        indicator(a == (alpha * x) ^ beta && b == (gamma * y) ^ delta, Dyadic::ONE)
    })
    .expect("local box")
}

/// Non-local bipartite box `p_{αβγ}`: probability ½ iff
/// `a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ`.
pub fn box_table_nonlocal(alpha: u8, beta: u8, gamma: u8) -> BoxTable {
    let [alpha, beta, gamma] = [alpha, beta, gamma].map(|v| (v & 1) as usize);
    BoxTable::from_fn(2, |xy, ab| {
        let (x, y) = (bit(xy, 0, 2), bit(xy, 1, 2));
        indicator(parity(ab) == (x * y) ^ (alpha * x) ^ (beta * y) ^ gamma, Dyadic::HALF)
    })
    .expect("non-local box")
}

/// Tripartite class representatives: probability ¼ on the parity set
/// `a ⊕ b ⊕ c = xyz` (44), `xy ⊕ xz` (45), `xy ⊕ xz ⊕ yz` (46).
pub fn tripartite_class_table(class: u32) -> Result<BoxTable> {
    let rule: fn(usize, usize, usize) -> usize = match class {
        44 => |x, y, z| x * y * z,
        45 => |x, y, z| (x * y) ^ (x * z),
        46 => |x, y, z| (x * y) ^ (x * z) ^ (y * z),
        other => return Err(Error::UnsupportedClass(other)),
    };
    BoxTable::from_fn(3, |xyz, abc| {
        let (x, y, z) = (bit(xyz, 0, 3), bit(xyz, 1, 3), bit(xyz, 2, 3));
        indicator(parity(abc) == rule(x, y, z), Dyadic::QUARTER)
    })
}

/// State tensor of a tripartite class representative under a convention.
pub fn class_state(class: u32, conv: &FiducialConvention) -> Result<GptTensor> {
    table_to_state(&tripartite_class_table(class)?, conv)
}

/// Index `n` of the non-local state whose table is `p_{αβγ}` under `conv`,
/// found by matching tables.
pub fn nonlocal_state_index(alpha: u8, beta: u8, gamma: u8, conv: &FiducialConvention) -> usize {
    let target = box_table_nonlocal(alpha, beta, gamma);
    (16..24)
        .find(|&n| {
            let s = bipartite_state(n).expect("catalog index");
            state_to_table(&s, conv).expect("valid convention") == target
        })
        .expect("every non-local table is realized by a catalog state")
}

/// The closed-form index rule `n = 15 + ((3 + 3α + 4β + 6γ) mod 8)`.
pub fn formula_nonlocal_index(alpha: u8, beta: u8, gamma: u8) -> usize {
    let (a, b, g) = (alpha as usize & 1, beta as usize & 1, gamma as usize & 1);
    15 + (3 + 3 * a + 4 * b + 6 * g) % 8
}

/// A named catalog entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub id: String,
    pub tensor: GptTensor,
    /// Parity rule or box description, where one exists.
    pub note: Option<String>,
}

/// Every named state and effect, in listing order: `omega0..3`, `b0..3`,
/// `e`, `mu`, `Omega0..23`, `class44..46`.
pub fn entries(conv: &FiducialConvention) -> Vec<Entry> {
    let mut out = Vec::new();
    let entry = |id: String, tensor: GptTensor, note: Option<String>| Entry { id, tensor, note };
    for n in 0..4 {
        out.push(entry(format!("omega{n}"), pure_state(n).unwrap(), None));
    }
    for i in 0..4 {
        out.push(entry(format!("b{i}"), extremal_effect(i).unwrap(), None));
    }
    out.push(entry("e".into(), deterministic_effect(1).unwrap(), None));
    out.push(entry("mu".into(), maximally_mixed(1).unwrap(), None));
    for n in 0..24 {
        out.push(entry(format!("Omega{n}"), bipartite_state(n).unwrap(), None));
    }
    for (class, rule) in [(44, "a+b+c = xyz"), (45, "a+b+c = xy+xz"), (46, "a+b+c = xy+xz+yz")] {
        let note = format!("parity rule {rule} (mod 2), probability 1/4 on the parity set");
        out.push(entry(format!("class{class}"), class_state(class, conv).unwrap(), Some(note)));
    }
    out
}

/// Look up a catalog entry by id (case-sensitive: `omega0` vs `Omega0`).
pub fn lookup(id: &str, conv: &FiducialConvention) -> Result<Entry> {
    entries(conv).into_iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownId(id.to_string()))
}

/// Id of the catalog entry equal to `t`, if any.
pub fn identify(t: &GptTensor, conv: &FiducialConvention) -> Option<String> {
    entries(conv).into_iter().find(|e| &e.tensor == t).map(|e| e.id)
}

/// Pure states of the catalog for `n_parties ≤ 3`.
///
/// One and two parties: the 4 and 24 extremal states. Three parties: the
/// orbits under the full reversible group of `Ω16 ⊗ ω0`, `Ω0 ⊗ ω0` and the
/// three class representatives.
pub fn pure_states(n_parties: usize, conv: &FiducialConvention) -> Result<Vec<GptTensor>> {
    match n_parties {
        1 => (0..4).map(pure_state).collect(),
        2 => (0..24).map(bipartite_state).collect(),
        3 => Ok(tripartite_pure(conv)),
        n => Err(Error::TooManyParties { n, max: 3 }),
    }
}

fn tripartite_pure(conv: &FiducialConvention) -> Vec<GptTensor> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<GptTensor>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("catalog cache").get(&conv.id()) {
        return hit.clone();
    }
    let seeds = [
        bipartite_state(16).unwrap().tensor_product(&pure_state(0).unwrap()).unwrap(),
        bipartite_state(0).unwrap().tensor_product(&pure_state(0).unwrap()).unwrap(),
        class_state(44, conv).unwrap(),
        class_state(45, conv).unwrap(),
        class_state(46, conv).unwrap(),
    ];
    let group = Subgroup::full(3);
    let mut seen = HashSet::new();
    let mut states = Vec::new();
    for s in &seeds {
        for img in orbit(s, &group).expect("N=3 orbit") {
            if seen.insert(img.clone()) {
                states.push(img);
            }
        }
    }
    cache.lock().expect("catalog cache").insert(conv.id(), states.clone());
    states
}

/// Membership in [`pure_states`].
pub fn is_catalog_pure(t: &GptTensor, conv: &FiducialConvention) -> bool {
    t.role() == Role::State && pure_states(t.n_parties(), conv).map(|ps| ps.contains(t)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::pair;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn vec_of(t: &GptTensor) -> Vec<String> {
        t.entries().iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn pure_states_match_listing() {
        assert_eq!(vec_of(&pure_state(0).unwrap()), ["1", "0", "1"]);
        assert_eq!(vec_of(&pure_state(3).unwrap()), ["0", "1", "1"]);
        assert!(matches!(pure_state(4), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn effects_match_listing() {
        assert_eq!(vec_of(&extremal_effect(0).unwrap()), ["1/2", "1/2", "1/2"]);
        assert_eq!(vec_of(&extremal_effect(2).unwrap()), ["-1/2", "-1/2", "1/2"]);
        assert!(extremal_effect(4).is_err());
        let e = deterministic_effect(1).unwrap();
        let b = |i| extremal_effect(i).unwrap();
        assert_eq!(b(0).add(&b(2)).unwrap(), e);
        assert_eq!(b(1).add(&b(3)).unwrap(), e);
    }

    #[test]
    fn deterministic_effect_and_mixed_state() {
        assert!(matches!(deterministic_effect(0), Err(Error::ZeroParties)));
        let e2 = deterministic_effect(2).unwrap();
        let ones: Vec<usize> = e2.entries().iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i).collect();
        assert_eq!(ones, vec![8]);
        assert_eq!(pair(&deterministic_effect(1).unwrap(), &pure_state(1).unwrap()).unwrap(), Dyadic::ONE);

        let mu = maximally_mixed(1).unwrap();
        assert_eq!(vec_of(&mu), ["0", "0", "1"]);
        let omegas: Vec<GptTensor> = (0..4).map(|n| pure_state(n).unwrap()).collect();
        let terms: Vec<(Dyadic, &GptTensor)> = omegas.iter().map(|w| (Dyadic::QUARTER, w)).collect();
        assert_eq!(GptTensor::combination(&terms).unwrap(), mu);
        assert_eq!(pair(&extremal_effect(0).unwrap(), &mu).unwrap(), Dyadic::HALF);
    }

    #[test]
    fn bipartite_listing() {
        let w0 = pure_state(0).unwrap();
        assert_eq!(bipartite_state(0).unwrap(), w0.tensor_product(&w0).unwrap());
        let o16: Vec<Dyadic> = ["-1/2", "1/2", "0", "1/2", "1/2", "0", "0", "0", "1"].iter().map(|s| d(s)).collect();
        assert_eq!(bipartite_state(16).unwrap().entries(), &o16[..]);
        let o23: Vec<Dyadic> = ["1/2", "1/2", "0", "1/2", "-1/2", "0", "0", "0", "1"].iter().map(|s| d(s)).collect();
        assert_eq!(bipartite_state(23).unwrap().entries(), &o23[..]);
        assert!(bipartite_state(24).is_err());
    }

    #[test]
    fn local_and_nonlocal_tables() {
        let t = box_table_local(0, 0, 0, 0);
        for xy in 0..4 {
            assert_eq!(t.get(xy, 0b00), Dyadic::ONE);
        }
        let t = box_table_local(1, 0, 1, 0);
        for xy in 0..4 {
            assert_eq!(t.deterministic_parity(xy), Some(bit(xy, 0, 2) ^ bit(xy, 1, 2)));
        }
        let t = box_table_nonlocal(1, 1, 1);
        for xy in 0..4 {
            let (x, y) = (bit(xy, 0, 2), bit(xy, 1, 2));
            assert_eq!(t.deterministic_parity(xy), Some((x * y) ^ x ^ y ^ 1));
        }
    }

    #[test]
    fn tripartite_rules() {
        let t = tripartite_class_table(44).unwrap();
        assert_eq!(t.support(0b111).len(), 4);
        assert!(t.support(0b111).iter().all(|&a| parity(a) == 1));
        assert!(t.support(0b000).iter().all(|&a| parity(a) == 0));
        assert!(t.support(0b000).iter().all(|&a| t.get(0, a) == Dyadic::QUARTER));
        assert!(matches!(tripartite_class_table(43), Err(Error::UnsupportedClass(43))));
    }

    #[test]
    fn lookup_ids() {
        let conv = FiducialConvention::standard();
        assert_eq!(lookup("omega0", &conv).unwrap().tensor, pure_state(0).unwrap());
        assert_eq!(lookup("Omega0", &conv).unwrap().tensor, bipartite_state(0).unwrap());
        assert!(lookup("omega9", &conv).is_err());
        assert_eq!(entries(&conv).iter().filter(|e| e.id.starts_with("Omega")).count(), 24);
        assert_eq!(identify(&bipartite_state(17).unwrap(), &conv).as_deref(), Some("Omega17"));
    }

    #[test]
    fn tripartite_catalog_size() {
        let conv = FiducialConvention::standard();
        let ps = pure_states(3, &conv).unwrap();
        // 64 products of singles and 96 bipartite-non-local times single
        assert!(ps.len() > 160);
        assert!(is_catalog_pure(&class_state(45, &conv).unwrap(), &conv));
        assert!(!is_catalog_pure(&maximally_mixed(3).unwrap(), &conv));
    }
}
