//! Conditional probability tables `P(a⃗ | x⃗)` for N parties with binary
//! inputs and outputs.
//!
//! Input and output strings are packed into integers with party 0 in the
//! most significant bit, matching the bit-string form `"x1 x2 ... xN"`.

use std::fmt;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoxTable {
    n_parties: usize,
    // index: (x << n) | a
    probs: Vec<Dyadic>,
}

/// Bit of `party` in a packed string of `n` bits.
pub fn bit(packed: usize, party: usize, n: usize) -> usize {
    (packed >> (n - 1 - party)) & 1
}

/// Packed string with `party`'s bit set to `value`.
pub fn with_bit(packed: usize, party: usize, n: usize, value: usize) -> usize {
    let mask = 1 << (n - 1 - party);
    if value == 1 {
        packed | mask
    } else {
        packed & !mask
    }
}

pub fn bitstring(packed: usize, n: usize) -> String {
    (0..n).map(|p| if bit(packed, p, n) == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(s: &str, n: usize) -> Result<usize> {
    if s.len() != n || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(Error::Parse(format!("expected a bit string of length {n}, got {s:?}")));
    }
    Ok(usize::from_str_radix(s, 2).unwrap_or(0))
}

/// Parity of the set bits.
pub fn parity(packed: usize) -> usize {
    (packed.count_ones() & 1) as usize
}

impl BoxTable {
    /// Validated constructor: entries non-negative, each row normalized,
    /// no-signalling.
    pub fn new(n_parties: usize, probs: Vec<Dyadic>) -> Result<Self> {
        let t = Self::new_unchecked(n_parties, probs)?;
        t.validate()?;
        Ok(t)
    }

    /// Shape-checked only. The result may violate the table invariants; call
    /// [`BoxTable::validate`] to find out.
    pub fn new_unchecked(n_parties: usize, probs: Vec<Dyadic>) -> Result<Self> {
        if n_parties == 0 {
            return Err(Error::ZeroParties);
        }
        let expected = 1 << (2 * n_parties);
        if probs.len() != expected {
            return Err(Error::WrongLength { expected, found: probs.len() });
        }
        Ok(BoxTable { n_parties, probs })
    }

    /// Build from a rule `(x, a) -> probability` over packed strings.
    pub fn from_fn(n_parties: usize, f: impl Fn(usize, usize) -> Dyadic) -> Result<Self> {
        let size = 1 << n_parties;
        let probs = (0..size).flat_map(|x| (0..size).map(move |a| (x, a))).map(|(x, a)| f(x, a)).collect();
        Self::new(n_parties, probs)
    }

    pub(crate) fn from_fn_unchecked(n_parties: usize, f: impl Fn(usize, usize) -> Dyadic) -> Self {
        let size = 1 << n_parties;
        let probs = (0..size).flat_map(|x| (0..size).map(move |a| (x, a))).map(|(x, a)| f(x, a)).collect();
        BoxTable { n_parties, probs }
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    /// Number of input (or output) strings, `2^N`.
    pub fn strings(&self) -> usize {
        1 << self.n_parties
    }

    pub fn get(&self, x: usize, a: usize) -> Dyadic {
        self.probs[(x << self.n_parties) | a]
    }

    pub fn probs(&self) -> &[Dyadic] {
        &self.probs
    }

    /// Output strings with non-zero probability at input `x`.
    pub fn support(&self, x: usize) -> Vec<usize> {
        (0..self.strings()).filter(|&a| !self.get(x, a).is_zero()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let size = self.strings();
        for x in 0..size {
            for a in 0..size {
                let p = self.get(x, a);
                if p.is_negative() {
                    return Err(Error::InvalidTable {
                        invariant: "non-negativity",
                        detail: format!("P({}|{}) = {p}", bitstring(a, self.n_parties), bitstring(x, self.n_parties)),
                    });
                }
            }
            let total: Dyadic = (0..size).map(|a| self.get(x, a)).sum();
            if total != Dyadic::ONE {
                return Err(Error::InvalidTable {
                    invariant: "normalization",
                    detail: format!("row x={} sums to {total}", bitstring(x, self.n_parties)),
                });
            }
        }
        self.check_no_signalling()
    }

    /// For every party k, summing out a_k must give the same result for both
    /// values of x_k.
    pub fn check_no_signalling(&self) -> Result<()> {
        let n = self.n_parties;
        let size = self.strings();
        for k in 0..n {
            for x in (0..size).filter(|&x| bit(x, k, n) == 0) {
                let x1 = with_bit(x, k, n, 1);
                for a in (0..size).filter(|&a| bit(a, k, n) == 0) {
                    let a1 = with_bit(a, k, n, 1);
                    let m0 = self.get(x, a) + self.get(x, a1);
                    let m1 = self.get(x1, a) + self.get(x1, a1);
                    if m0 != m1 {
                        return Err(Error::Signalling { party: k });
                    }
                }
            }
        }
        Ok(())
    }

    /// Output parity `⊕ a_k` at input `x` if it is the same across the support.
    pub fn deterministic_parity(&self, x: usize) -> Option<usize> {
        let mut parities = self.support(x).into_iter().map(parity);
        let first = parities.next()?;
        parities.all(|p| p == first).then_some(first)
    }

    /// Reorder parties: new party `k` is old party `perm[k]`.
    pub fn permute_parties(&self, perm: &[usize]) -> BoxTable {
        let n = self.n_parties;
        BoxTable::from_fn_unchecked(n, |x, a| {
            let mut old_x = 0;
            let mut old_a = 0;
            for k in 0..n {
                old_x = with_bit(old_x, perm[k], n, bit(x, k, n));
                old_a = with_bit(old_a, perm[k], n, bit(a, k, n));
            }
            self.get(old_x, old_a)
        })
    }
}

impl fmt::Debug for BoxTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_parties;
        write!(f, "BoxTable[N={n}]{{")?;
        let mut first = true;
        for x in 0..self.strings() {
            for a in 0..self.strings() {
                let p = self.get(x, a);
                if !p.is_zero() {
                    if !first {
                        write!(f, ", ")?;
                    }
                    first = false;
                    write!(f, "{}|{}: {p}", bitstring(a, n), bitstring(x, n))?;
                }
            }
        }
        write!(f, "}}")
    }
}
