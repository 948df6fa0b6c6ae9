//! Reversible transformations of N squits: a dihedral element on every site
//! composed with a permutation of the parties.
//!
//! `apply(t, s)` first permutes parties (new party `k` holds old party
//! `perm[k]`) and then multiplies site `k` by `sites[k]`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::catalog::extremal_effect_vector;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fiducial::FiducialConvention;
use crate::table::{bit, with_bit, BoxTable};
use crate::tensor::{dim, unflatten, GptTensor};

/// Exhaustive group operations refuse more parties than this unless the
/// subgroup explicitly allows it.
pub const MAX_EXHAUSTIVE_PARTIES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// `U_k^s`: rotation by `kπ/2` for `s = +`, reflection for `s = -`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingleSiteTransform {
    pub k: u8,
    pub sign: Sign,
}

const COS: [i8; 4] = [1, 0, -1, 0];
const SIN: [i8; 4] = [0, 1, 0, -1];

impl SingleSiteTransform {
    pub const IDENTITY: SingleSiteTransform = SingleSiteTransform { k: 0, sign: Sign::Plus };

    pub fn new(k: u8, sign: Sign) -> Result<Self> {
        if k > 3 {
            return Err(Error::IndexOutOfRange { what: "rotation", index: k as usize, max: 3 });
        }
        Ok(SingleSiteTransform { k, sign })
    }

    pub fn rotation(k: u8) -> Self {
        SingleSiteTransform { k: k % 4, sign: Sign::Plus }
    }

    pub fn reflection(k: u8) -> Self {
        SingleSiteTransform { k: k % 4, sign: Sign::Minus }
    }

    /// The eight elements, rotations first.
    pub fn all() -> [SingleSiteTransform; 8] {
        let mut out = [Self::IDENTITY; 8];
        for (i, slot) in out.iter_mut().enumerate() {
            let sign = if i < 4 { Sign::Plus } else { Sign::Minus };
            *slot = SingleSiteTransform { k: (i % 4) as u8, sign };
        }
        out
    }

    pub fn matrix(&self) -> [[i8; 3]; 3] {
        let (c, s, sg) = (COS[self.k as usize], SIN[self.k as usize], self.sign.value());
        [[c, -sg * s, 0], [s, sg * c, 0], [0, 0, 1]]
    }

    fn from_matrix(m: &[[i8; 3]; 3]) -> Self {
        *Self::all().iter().find(|t| &t.matrix() == m).expect("dihedral group is closed")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SingleSiteTransform) -> SingleSiteTransform {
        let (a, b) = (self.matrix(), other.matrix());
        let mut m = [[0i8; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = (0..3).map(|k| a[r][k] * b[k][c]).sum();
            }
        }
        Self::from_matrix(&m)
    }

    pub fn inverse(&self) -> SingleSiteTransform {
        // orthogonal matrices: inverse is the transpose
        let m = self.matrix();
        let mut t = [[0i8; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                t[r][c] = m[c][r];
            }
        }
        Self::from_matrix(&t)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// The relabelling this transform induces on the box table of a site.
    pub fn relabelling(&self, conv: &FiducialConvention) -> PartyRelabelling {
        let m = self.matrix();
        // (x'', a'') with eff(x'', a'') = U^T eff(x, a)
        let image = |x: usize, a: usize| {
            let b = extremal_effect_vector(conv.effect_index(x, a));
            let mut out = [Dyadic::ZERO; 3];
            for (c, slot) in out.iter_mut().enumerate() {
                *slot = (0..3).map(|r| b[r] * Dyadic::from(m[r][c] as i64)).sum();
            }
            let j = (0..4).find(|&j| extremal_effect_vector(j) == out).expect("U^T permutes the b's");
            conv.slot_of_effect(j)
        };
        let (x0, g0) = image(0, 0);
        let (_, g1) = image(1, 0);
        PartyRelabelling { flip_input: x0 == 1, output_x: g0 != g1, output_const: g0 == 1 }
    }

    pub fn from_relabelling(conv: &FiducialConvention, r: &PartyRelabelling) -> SingleSiteTransform {
        *Self::all().iter().find(|t| &t.relabelling(conv) == r).expect("relabellings and D8 are in bijection")
    }
}

impl fmt::Debug for SingleSiteTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{}{}", self.k, self.sign.symbol())
    }
}

impl fmt::Display for SingleSiteTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ReversibleTransform {
    sites: Vec<SingleSiteTransform>,
    perm: Vec<usize>,
}

impl ReversibleTransform {
    pub fn new(sites: Vec<SingleSiteTransform>, perm: Vec<usize>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::ZeroParties);
        }
        if perm.len() != sites.len() {
            return Err(Error::PartyMismatch { left: sites.len(), right: perm.len() });
        }
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parse(format!("{perm:?} is not a permutation")));
            }
        }
        Ok(ReversibleTransform { sites, perm })
    }

    pub fn identity(n: usize) -> Self {
        ReversibleTransform { sites: vec![SingleSiteTransform::IDENTITY; n], perm: (0..n).collect() }
    }

    /// Product of site elements, no permutation.
    pub fn local(sites: Vec<SingleSiteTransform>) -> Self {
        let n = sites.len();
        ReversibleTransform { sites, perm: (0..n).collect() }
    }

    /// `t` on `site`, identity elsewhere.
    pub fn on_site(n: usize, site: usize, t: SingleSiteTransform) -> Self {
        let mut sites = vec![SingleSiteTransform::IDENTITY; n];
        sites[site] = t;
        Self::local(sites)
    }

    /// The party exchange of a bipartite system.
    pub fn swap() -> Self {
        ReversibleTransform { sites: vec![SingleSiteTransform::IDENTITY; 2], perm: vec![1, 0] }
    }

    pub fn n_parties(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[SingleSiteTransform] {
        &self.sites
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Sites acted on non-trivially or moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n_parties()).filter(|&k| !self.sites[k].is_identity() || self.perm[k] != k).collect()
    }

    pub fn apply(&self, s: &GptTensor) -> Result<GptTensor> {
        if s.n_parties() != self.n_parties() {
            return Err(Error::PartyMismatch { left: self.n_parties(), right: s.n_parties() });
        }
        let mut out =
            if self.perm.iter().enumerate().all(|(k, &p)| k == p) { s.clone() } else { s.permute_parties(&self.perm) };
        for (k, site) in self.sites.iter().enumerate() {
            if !site.is_identity() {
                out = out.apply_site_matrix(k, &site.matrix());
            }
        }
        Ok(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &ReversibleTransform) -> Result<ReversibleTransform> {
        let n = self.n_parties();
        if other.n_parties() != n {
            return Err(Error::PartyMismatch { left: n, right: other.n_parties() });
        }
        // S1 P1 S2 P2 = S1 (P1 S2 P1^-1) P1 P2; conjugation moves S2[perm1[k]] to slot k
        let sites = (0..n).map(|k| self.sites[k].compose(&other.sites[self.perm[k]])).collect();
        let perm = (0..n).map(|k| other.perm[self.perm[k]]).collect();
        Ok(ReversibleTransform { sites, perm })
    }

    pub fn invert(&self) -> ReversibleTransform {
        let n = self.n_parties();
        let mut inv = vec![0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            inv[p] = k;
        }
        let sites = (0..n).map(|k| self.sites[inv[k]].inverse()).collect();
        ReversibleTransform { sites, perm: inv }
    }

    /// Integer matrix of the full action on `R^(3^N)`, row-major.
    pub fn action_matrix(&self) -> Vec<i8> {
        let n = self.n_parties();
        let d = dim(n);
        let mats: Vec<[[i8; 3]; 3]> = self.sites.iter().map(|s| s.matrix()).collect();
        let indices: Vec<Vec<usize>> = (0..d).map(|flat| unflatten(flat, n)).collect();
        let mut out = vec![0i8; d * d];
        for (row, out_idx) in indices.iter().enumerate() {
            for (col, in_idx) in indices.iter().enumerate() {
                let mut v = 1i8;
                for k in 0..n {
                    v *= mats[k][out_idx[k]][in_idx[self.perm[k]]];
                    if v == 0 {
                        break;
                    }
                }
                out[row * d + col] = v;
            }
        }
        out
    }

    /// Per-party relabellings induced on box tables under `conv`.
    pub fn relabelling(&self, conv: &FiducialConvention) -> Relabelling {
        Relabelling { parties: self.sites.iter().map(|s| s.relabelling(conv)).collect() }
    }

    /// Box-table counterpart of [`ReversibleTransform::apply`]:
    /// `state_to_table(apply(t, s)) == t.apply_to_table(state_to_table(s))`.
    pub fn apply_to_table(&self, table: &BoxTable, conv: &FiducialConvention) -> Result<BoxTable> {
        relabel_table(&table.permute_parties(&self.perm), &self.relabelling(conv))
    }
}

impl fmt::Debug for ReversibleTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sites: Vec<String> = self.sites.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", sites.join("⊗"))?;
        if self.perm.iter().enumerate().any(|(k, &p)| k != p) {
            let perm: Vec<String> = self.perm.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, " ∘ perm({})", perm.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for ReversibleTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct SiteJson {
    k: u8,
    s: String,
}

#[derive(Serialize, Deserialize)]
struct TransformJson {
    perm: Vec<usize>,
    sites: Vec<SiteJson>,
}

/// `{"perm": [1-based parties], "sites": [{"k": 0..3, "s": "+"|"-"}]}`.
impl Serialize for ReversibleTransform {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TransformJson {
            perm: self.perm.iter().map(|p| p + 1).collect(),
            sites: self.sites.iter().map(|s| SiteJson { k: s.k, s: s.sign.symbol().into() }).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ReversibleTransform {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TransformJson::deserialize(deserializer)?;
        let sites = raw
            .sites
            .iter()
            .map(|s| {
                let sign = match s.s.as_str() {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    other => return Err(D::Error::custom(format!("bad sign {other:?}"))),
                };
                SingleSiteTransform::new(s.k, sign).map_err(D::Error::custom)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let perm = raw
            .perm
            .iter()
            .map(|&p| p.checked_sub(1).ok_or_else(|| D::Error::custom("perm entries are 1-based")))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ReversibleTransform::new(sites, perm).map_err(D::Error::custom)
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// A subgroup generated by dihedral elements on `sites` and, optionally,
/// permutations among `sites`. Every other site is left alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    n_parties: usize,
    sites: Vec<usize>,
    permutations: bool,
    max_parties: usize,
}

impl Subgroup {
    /// All reversible transformations.
    pub fn full(n_parties: usize) -> Self {
        Self::on_sites(n_parties, &(0..n_parties).collect::<Vec<_>>())
    }

    /// Products of site elements, no permutations.
    pub fn local_only(n_parties: usize) -> Self {
        Self::full(n_parties).without_permutations()
    }

    /// Supported on `sites` (0-based), with permutations among them.
    pub fn on_sites(n_parties: usize, sites: &[usize]) -> Self {
        let mut sites = sites.to_vec();
        sites.sort_unstable();
        sites.dedup();
        Subgroup { n_parties, sites, permutations: true, max_parties: MAX_EXHAUSTIVE_PARTIES }
    }

    pub fn without_permutations(mut self) -> Self {
        self.permutations = false;
        self
    }

    /// Raise the party-count guard for exhaustive enumeration.
    pub fn with_max_parties(mut self, max: usize) -> Self {
        self.max_parties = max;
        self
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn has_permutations(&self) -> bool {
        self.permutations
    }

    fn check(&self) -> Result<()> {
        if self.n_parties == 0 {
            return Err(Error::ZeroParties);
        }
        if self.n_parties > self.max_parties {
            return Err(Error::TooManyParties { n: self.n_parties, max: self.max_parties });
        }
        if let Some(&bad) = self.sites.iter().find(|&&s| s >= self.n_parties) {
            return Err(Error::BadParty { party: bad, n_parties: self.n_parties });
        }
        Ok(())
    }

    /// Every element exactly once, deduplicated by action. Identity first.
    pub fn elements(&self) -> Result<Vec<ReversibleTransform>> {
        self.check()?;
        type Key = (usize, Vec<usize>, bool);
        static CACHE: OnceLock<Mutex<HashMap<Key, Vec<ReversibleTransform>>>> = OnceLock::new();
        let key = (self.n_parties, self.sites.clone(), self.permutations);
        let cache = CACHE.get_or_init(Default::default);
        if let Some(hit) = cache.lock().expect("group cache").get(&key) {
            return Ok(hit.clone());
        }
        let built = self.build_elements();
        cache.lock().expect("group cache").insert(key, built.clone());
        Ok(built)
    }

    fn build_elements(&self) -> Vec<ReversibleTransform> {
        let n = self.n_parties;
        let perms: Vec<Vec<usize>> = if self.permutations {
            permutations(&self.sites)
                .into_iter()
                .map(|p| {
                    let mut full: Vec<usize> = (0..n).collect();
                    for (slot, src) in self.sites.iter().zip(p) {
                        full[*slot] = src;
                    }
                    full
                })
                .collect()
        } else {
            vec![(0..n).collect()]
        };
        let m = self.sites.len();
        let all = SingleSiteTransform::all();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for perm in perms {
            for code in 0..8usize.pow(m as u32) {
                let mut sites = vec![SingleSiteTransform::IDENTITY; n];
                for (j, &site) in self.sites.iter().enumerate() {
                    sites[site] = all[(code / 8usize.pow((m - 1 - j) as u32)) % 8];
                }
                let t = ReversibleTransform { sites, perm: perm.clone() };
                if seen.insert(t.action_matrix()) {
                    out.push(t);
                }
            }
        }
        out
    }
}

/// All reversible transformations of `n` parties (8, 128, 3072 for 1, 2, 3).
pub fn enumerate_group(n_parties: usize) -> Result<Vec<ReversibleTransform>> {
    Subgroup::full(n_parties).elements()
}

/// Distinct images of `s` under `group`, in enumeration order.
pub fn orbit(s: &GptTensor, group: &Subgroup) -> Result<Vec<GptTensor>> {
    if s.n_parties() != group.n_parties {
        return Err(Error::PartyMismatch { left: group.n_parties, right: s.n_parties() });
    }
    let elements = group.elements()?;
    let images: Vec<GptTensor> = elements.par_iter().map(|t| t.apply(s)).collect::<Result<Vec<_>>>()?;
    let mut seen = HashSet::new();
    Ok(images.into_iter().filter(|img| seen.insert(img.clone())).collect())
}

/// First element of `group` (in enumeration order) taking `from` to `to`.
pub fn locally_connected(from: &GptTensor, to: &GptTensor, group: &Subgroup) -> Result<Option<ReversibleTransform>> {
    if from.n_parties() != to.n_parties() {
        return Err(Error::PartyMismatch { left: from.n_parties(), right: to.n_parties() });
    }
    if from.n_parties() != group.n_parties {
        return Err(Error::PartyMismatch { left: group.n_parties, right: from.n_parties() });
    }
    let elements = group.elements()?;
    Ok(elements.into_par_iter().find_first(|t| t.apply(from).map(|img| &img == to).unwrap_or(false)))
}

/// Input flip and output rewrite of one party:
/// `x → x ⊕ flip`, `a → a ⊕ output_x·x ⊕ output_const`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartyRelabelling {
    pub flip_input: bool,
    pub output_x: bool,
    pub output_const: bool,
}

impl PartyRelabelling {
    pub fn all() -> Vec<PartyRelabelling> {
        (0..8)
            .map(|c| PartyRelabelling { flip_input: c & 4 != 0, output_x: c & 2 != 0, output_const: c & 1 != 0 })
            .collect()
    }

    /// Old `(x, a)` read by the relabelled box at new `(x, a)`.
    fn source(&self, x: usize, a: usize) -> (usize, usize) {
        let old_x = x ^ self.flip_input as usize;
        let old_a = a ^ (self.output_x as usize * x) ^ self.output_const as usize;
        (old_x, old_a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relabelling {
    pub parties: Vec<PartyRelabelling>,
}

impl Relabelling {
    pub fn identity(n: usize) -> Self {
        Relabelling { parties: vec![PartyRelabelling::default(); n] }
    }

    /// Every relabelling of `n` parties (`8^n`).
    pub fn all(n: usize) -> Vec<Relabelling> {
        let singles = PartyRelabelling::all();
        (0..8usize.pow(n as u32))
            .map(|code| Relabelling {
                parties: (0..n).map(|k| singles[(code / 8usize.pow((n - 1 - k) as u32)) % 8]).collect(),
            })
            .collect()
    }
}

/// `P'(a | x) = P(a ⊕ αx ⊕ γ | x ⊕ f)` party by party.
pub fn relabel_table(t: &BoxTable, r: &Relabelling) -> Result<BoxTable> {
    let n = t.n_parties();
    if r.parties.len() != n {
        return Err(Error::PartyMismatch { left: n, right: r.parties.len() });
    }
    let mut probs = Vec::with_capacity(1 << (2 * n));
    for x in 0..t.strings() {
        for a in 0..t.strings() {
            let (mut ox, mut oa) = (0, 0);
            for (k, rel) in r.parties.iter().enumerate() {
                let (sx, sa) = rel.source(bit(x, k, n), bit(a, k, n));
                ox = with_bit(ox, k, n, sx);
                oa = with_bit(oa, k, n, sa);
            }
            probs.push(t.get(ox, oa));
        }
    }
    BoxTable::new(n, probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{bipartite_state, box_table_nonlocal, pure_state};

    #[test]
    fn matrices_match_closed_form() {
        assert_eq!(SingleSiteTransform::rotation(1).matrix(), [[0, -1, 0], [1, 0, 0], [0, 0, 1]]);
        assert_eq!(SingleSiteTransform::reflection(0).matrix(), [[1, 0, 0], [0, -1, 0], [0, 0, 1]]);
        let distinct: HashSet<_> = SingleSiteTransform::all().iter().map(|t| t.matrix()).collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn site_group_laws() {
        let r1 = SingleSiteTransform::rotation(1);
        let r3 = SingleSiteTransform::rotation(3);
        assert_eq!(r1.compose(&r3), SingleSiteTransform::IDENTITY);
        for k in 0..4u8 {
            assert_eq!(SingleSiteTransform::rotation(k).inverse(), SingleSiteTransform::rotation((4 - k) % 4));
        }
        for t in SingleSiteTransform::all() {
            assert_eq!(t.compose(&t.inverse()), SingleSiteTransform::IDENTITY);
            if t.sign == Sign::Minus {
                assert_eq!(t.inverse(), t);
            }
        }
    }

    #[test]
    fn swap_is_an_involution() {
        let w = ReversibleTransform::swap();
        assert_eq!(w.invert(), w);
        assert_eq!(w.compose(&w).unwrap(), ReversibleTransform::identity(2));
    }

    #[test]
    fn reflection_listing_on_omega16() {
        let o16 = bipartite_state(16).unwrap();
        let t = ReversibleTransform::on_site(2, 0, SingleSiteTransform::reflection(1));
        assert_eq!(t.apply(&o16).unwrap(), bipartite_state(22).unwrap());
        let t = ReversibleTransform::on_site(2, 0, SingleSiteTransform::rotation(1));
        assert_eq!(t.apply(&o16).unwrap(), bipartite_state(17).unwrap());
    }

    #[test]
    fn subgroup_guard_and_bad_sites() {
        assert!(matches!(enumerate_group(4), Err(Error::TooManyParties { n: 4, max: 3 })));
        assert!(matches!(Subgroup::on_sites(2, &[2]).elements(), Err(Error::BadParty { .. })));
        let big = Subgroup::on_sites(4, &[0]).with_max_parties(4);
        assert_eq!(big.elements().unwrap().len(), 8);
    }

    #[test]
    fn single_site_orbit() {
        let w0 = pure_state(0).unwrap();
        let orb = orbit(&w0, &Subgroup::full(1)).unwrap();
        assert_eq!(orb.len(), 4);
        for n in 0..4 {
            assert!(orb.contains(&pure_state(n).unwrap()));
        }
    }

    #[test]
    fn relabelling_examples() {
        let id = Relabelling::identity(2);
        let p000 = box_table_nonlocal(0, 0, 0);
        assert_eq!(relabel_table(&p000, &id).unwrap(), p000);
        let mut r = Relabelling::identity(2);
        r.parties[0].output_const = true;
        assert_eq!(relabel_table(&p000, &r).unwrap(), box_table_nonlocal(0, 0, 1));
        assert!(relabel_table(&p000, &Relabelling::identity(3)).is_err());
    }

    #[test]
    fn site_relabellings_are_a_bijection() {
        for conv in FiducialConvention::all() {
            let set: HashSet<_> = SingleSiteTransform::all().iter().map(|t| t.relabelling(&conv)).collect();
            assert_eq!(set.len(), 8);
            for t in SingleSiteTransform::all() {
                assert_eq!(SingleSiteTransform::from_relabelling(&conv, &t.relabelling(&conv)), t);
            }
        }
    }

    #[test]
    fn json_form() {
        let t = ReversibleTransform::new(
            vec![SingleSiteTransform::rotation(1), SingleSiteTransform::reflection(2)],
            vec![1, 0],
        )
        .unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"perm":[2,1],"sites":[{"k":1,"s":"+"},{"k":2,"s":"-"}]}"#);
        let back: ReversibleTransform = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<ReversibleTransform>(
            r#"{"perm":[1,1],"sites":[{"k":0,"s":"+"},{"k":0,"s":"+"}]}"#
        )
        .is_err());
    }
}
