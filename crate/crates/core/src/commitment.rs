//! Bit-commitment protocols on shared non-local boxes: honest and cheating
//! runs of the single-box and `2n + 1`-box protocols, and audits of
//! correctness, concealing and binding for pairs of pure encodings.
//!
//! Randomness comes from `ChaCha8Rng` seeded with the run seed. Box `i` draws
//! from stream `i + 1` and the protocol's own choices from stream 0, so a
//! transcript depends only on its seed.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{bipartite_state, box_table_nonlocal, identify, is_catalog_pure, nonlocal_state_index};
use crate::discrimination::{discriminating_povm, verify_perfect_discrimination};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::fiducial::FiducialConvention;
use crate::table::{bit, with_bit, BoxTable};
use crate::tensor::GptTensor;
use crate::transforms::{locally_connected, PartyRelabelling, ReversibleTransform, SingleSiteTransform, Subgroup};

/// Alice's relabelling `p_000 → p_{α1γ}` and the output map `f(a) = a ⊕ αx ⊕ γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheatParams {
    pub alpha: u8,
    pub beta: u8,
    pub gamma: u8,
}

impl CheatParams {
    pub const TRIVIAL: CheatParams = CheatParams { alpha: 0, beta: 0, gamma: 0 };

    pub fn flip(alpha: u8, gamma: u8) -> Self {
        CheatParams { alpha: alpha & 1, beta: 1, gamma: gamma & 1 }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::TRIVIAL
    }

    /// `f(a) = a ⊕ αx ⊕ γ`, identity for trivial parameters.
    pub fn map_output(&self, x: u8, a: u8) -> u8 {
        if self.is_trivial() {
            a
        } else {
            a ^ (self.alpha & x) ^ self.gamma
        }
    }

    /// The table Alice's transform turns `p_000` into.
    pub fn cheated_table(&self) -> BoxTable {
        box_table_nonlocal(self.alpha, self.beta, self.gamma)
    }

    /// The local transform on Alice's site realizing the relabelling.
    pub fn transform(&self, conv: &FiducialConvention) -> ReversibleTransform {
        let r =
            PartyRelabelling { flip_input: self.beta == 1, output_x: self.alpha == 1, output_const: self.gamma == 1 };
        ReversibleTransform::on_site(2, 0, SingleSiteTransform::from_relabelling(conv, &r))
    }
}

/// Parameters revealing `x_target` after inputting `x`, with `α = γ = 0`.
pub fn solve_cheat(x: u8, x_target: u8) -> CheatParams {
    solve_cheat_with(x, x_target, 0, 0)
}

/// As [`solve_cheat`] with a chosen `(α, γ)`; every choice solves the flip.
pub fn solve_cheat_with(x: u8, x_target: u8, alpha: u8, gamma: u8) -> CheatParams {
    if (x ^ x_target) & 1 == 0 {
        CheatParams::TRIVIAL
    } else {
        CheatParams::flip(alpha, gamma)
    }
}

/// Number of `11` substrings starting at odd 1-based positions.
pub fn count_11_odd(bits: &[u8]) -> Result<usize> {
    if bits.len() % 2 == 1 {
        let s: String = bits.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect();
        return Err(Error::OddLength(s));
    }
    Ok(bits.chunks(2).filter(|p| p[0] == 1 && p[1] == 1).count())
}

pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parse(format!("not a bit string: {s:?}"))),
        })
        .collect()
}

/// A shared box whose joint outcome is fixed party by party as the parties
/// input, each draw conditioned on the outcomes already fixed.
pub struct LazyBox {
    table: BoxTable,
    fixed: Vec<Option<(u8, u8)>>,
}

impl LazyBox {
    pub fn new(table: BoxTable) -> Self {
        let n = table.n_parties();
        LazyBox { table, fixed: vec![None; n] }
    }

    /// Replace the table. Only allowed before any party has input.
    pub fn transform_table(&mut self, table: BoxTable) -> Result<()> {
        if self.fixed.iter().any(Option::is_some) || table.n_parties() != self.table.n_parties() {
            return Err(Error::Unsupported("a box can only be transformed before use".into()));
        }
        self.table = table;
        Ok(())
    }

    fn weight(&self, party: usize, x: u8, a: u8) -> Dyadic {
        let n = self.table.n_parties();
        let mut input = 0;
        for (k, f) in self.fixed.iter().enumerate() {
            if let Some((xk, _)) = f {
                input = with_bit(input, k, n, *xk as usize);
            }
        }
        input = with_bit(input, party, n, x as usize);
        (0..self.table.strings())
            .filter(|&out| {
                bit(out, party, n) == a as usize
                    && self.fixed.iter().enumerate().all(|(k, f)| f.is_none_or(|(_, ak)| bit(out, k, n) == ak as usize))
            })
            .map(|out| self.table.get(input, out))
            .sum()
    }

    /// Party `party` inputs `x`; returns its output.
    pub fn input(&mut self, party: usize, x: u8, rng: &mut impl RngCore) -> Result<u8> {
        if party >= self.fixed.len() {
            return Err(Error::BadParty { party, n_parties: self.fixed.len() });
        }
        if self.fixed[party].is_some() {
            return Err(Error::Unsupported(format!("party {} already used this box", party + 1)));
        }
        let (w0, w1) = (self.weight(party, x & 1, 0), self.weight(party, x & 1, 1));
        let total = w0 + w1;
        // u = r / 2^64; outcome 0 iff u * total < w0
        let u = Dyadic::new(rng.next_u64() as i128, 64);
        let a = if u * total < w0 { 0 } else { 1 };
        self.fixed[party] = Some((x & 1, a));
        Ok(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    SingleBox,
    Buhrman,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Honest,
    /// Reveal the flipped bit without touching the box.
    NaiveCheat,
    TransformCheat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub x: u8,
    pub a: u8,
    pub y: u8,
    pub b: u8,
    pub x_revealed: u8,
    pub a_revealed: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub protocol: Protocol,
    pub mode: Mode,
    pub seed: u64,
    /// Catalog id of the shared box state.
    pub box_state: String,
    pub committed: u8,
    pub revealed: u8,
    pub boxes: Vec<BoxRecord>,
    /// Alice's parity message `A` (Buhrman protocol only).
    pub parity_message: Option<u8>,
    pub cheat: Option<CheatParams>,
    pub cheat_transform: Option<ReversibleTransform>,
    pub verdict: Verdict,
}

impl Transcript {
    /// Bob's decision from the revealed data alone.
    pub fn recompute_verdict(&self) -> Verdict {
        let boxes_ok = self.boxes.iter().all(|r| (r.x_revealed & r.y) == (r.a_revealed ^ r.b));
        let extra_ok = match self.protocol {
            Protocol::SingleBox => self.boxes.len() == 1 && self.boxes[0].x_revealed == self.revealed,
            Protocol::Buhrman => {
                let m = self.boxes.len();
                let xs: Vec<u8> = self.boxes.iter().map(|r| r.x_revealed).collect();
                let parity_ok = m % 2 == 1
                    && count_11_odd(&xs[..m - 1])
                        .is_ok_and(|c| (c + xs[m - 1] as usize + self.revealed as usize).is_multiple_of(2));
                let a_parity = self.boxes.iter().fold(0, |acc, r| acc ^ r.a_revealed);
                parity_ok && self.parity_message == Some(a_parity)
            }
        };
        if boxes_ok && extra_ok {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }

    /// Whether the run ended as its mode predicts. Naive cheats have no
    /// per-run prediction.
    pub fn as_expected(&self) -> Option<bool> {
        let flipped = self.revealed != self.committed;
        match self.mode {
            Mode::Honest => Some(self.verdict == Verdict::Accept && !flipped),
            Mode::TransformCheat => Some(self.verdict == Verdict::Accept && flipped),
            Mode::NaiveCheat => None,
        }
    }
}

fn box_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index + 1);
    rng
}

fn shared_box(conv: &FiducialConvention) -> (String, BoxTable) {
    static INDEX: OnceLock<Vec<usize>> = OnceLock::new();
    let index =
        INDEX.get_or_init(|| FiducialConvention::all().iter().map(|c| nonlocal_state_index(0, 0, 0, c)).collect());
    (format!("Omega{}", index[conv.id()]), box_table_nonlocal(0, 0, 0))
}

/// One shared `p_000` box; Alice commits by inputting `c`.
pub fn run_single_box(c: u8, mode: Mode, seed: u64, conv: &FiducialConvention) -> Result<Transcript> {
    let c = c & 1;
    let (box_state, table) = shared_box(conv);
    let mut shared = LazyBox::new(table.clone());
    let mut rng = box_rng(seed, 0);
    let (mut cheat, mut cheat_transform) = (None, None);
    if mode == Mode::TransformCheat {
        let params = solve_cheat(c, c ^ 1);
        let transform = params.transform(conv);
        shared.transform_table(transform.apply_to_table(&table, conv)?)?;
        cheat = Some(params);
        cheat_transform = Some(transform);
    }
    let a = shared.input(0, c, &mut rng)?;
    let y = rng.gen_range(0..=1u8);
    let b = shared.input(1, y, &mut rng)?;
    let (x_revealed, a_revealed) = match mode {
        Mode::Honest => (c, a),
        Mode::NaiveCheat => (c ^ 1, a),
        Mode::TransformCheat => (c ^ 1, cheat.expect("set above").map_output(c, a)),
    };
    let mut t = Transcript {
        protocol: Protocol::SingleBox,
        mode,
        seed,
        box_state,
        committed: c,
        revealed: x_revealed,
        boxes: vec![BoxRecord { x: c, a, y, b, x_revealed, a_revealed }],
        parity_message: None,
        cheat,
        cheat_transform,
        verdict: Verdict::Reject,
    };
    t.verdict = t.recompute_verdict();
    Ok(t)
}

/// `2n` uniformly random bits with an even number of odd-position `11` pairs.
fn even_11_string(n: usize, rng: &mut impl RngCore) -> Vec<u8> {
    loop {
        let bits: Vec<u8> = (0..2 * n).map(|_| (rng.next_u32() & 1) as u8).collect();
        if count_11_odd(&bits).expect("even length").is_multiple_of(2) {
            return bits;
        }
    }
}

/// The `2n + 1`-box protocol. Naive cheating is not defined for it.
pub fn run_buhrman(n: usize, c: u8, mode: Mode, seed: u64, conv: &FiducialConvention) -> Result<Transcript> {
    if n < 1 {
        return Err(Error::Unsupported("the protocol needs n >= 1".into()));
    }
    if mode == Mode::NaiveCheat {
        return Err(Error::Unsupported("naive cheating is defined for the single-box protocol only".into()));
    }
    let c = c & 1;
    let m = 2 * n + 1;
    let mut protocol_rng = ChaCha8Rng::seed_from_u64(seed);
    let cheating = mode == Mode::TransformCheat;

    // honest: |x_1..x_2n|_11 even; cheat: the same for the flipped string
    let mut x = even_11_string(n, &mut protocol_rng);
    if cheating {
        x.iter_mut().for_each(|b| *b ^= 1);
    }
    x.push(c);

    let (box_state, table) = shared_box(conv);
    let params = solve_cheat(0, 1);
    let transform = params.transform(conv);
    let cheated = transform.apply_to_table(&table, conv)?;

    let mut boxes = Vec::with_capacity(m);
    let mut rngs = Vec::with_capacity(m);
    let mut shared = Vec::with_capacity(m);
    for i in 0..m {
        let mut b = LazyBox::new(table.clone());
        if cheating {
            b.transform_table(cheated.clone())?;
        }
        shared.push(b);
        rngs.push(box_rng(seed, i as u64));
    }
    let mut outputs = Vec::with_capacity(m);
    for i in 0..m {
        outputs.push(shared[i].input(0, x[i], &mut rngs[i])?);
    }
    let revealed_a: Vec<u8> =
        (0..m).map(|i| if cheating { params.map_output(x[i], outputs[i]) } else { outputs[i] }).collect();
    let parity_message = revealed_a.iter().fold(0, |acc, a| acc ^ a);
    for i in 0..m {
        let y = rngs[i].gen_range(0..=1u8);
        let b = shared[i].input(1, y, &mut rngs[i])?;
        let x_revealed = if cheating { x[i] ^ 1 } else { x[i] };
        boxes.push(BoxRecord { x: x[i], a: outputs[i], y, b, x_revealed, a_revealed: revealed_a[i] });
    }
    let mut t = Transcript {
        protocol: Protocol::Buhrman,
        mode,
        seed,
        box_state,
        committed: c,
        revealed: if cheating { c ^ 1 } else { c },
        boxes,
        parity_message: Some(parity_message),
        cheat: cheating.then_some(params),
        cheat_transform: cheating.then_some(transform),
        verdict: Verdict::Reject,
    };
    t.verdict = t.recompute_verdict();
    Ok(t)
}

/// Settings for a batch of protocol runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialConfig {
    pub protocol: Protocol,
    pub mode: Mode,
    /// Number of boxes is `2n + 1` for the Buhrman protocol.
    pub n: usize,
    /// Fixed committed bit, or a seeded random bit per trial.
    pub bit: Option<u8>,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSummary {
    pub config: TrialConfig,
    pub accepted: u64,
    pub revealed_flipped: u64,
    /// Trials whose outcome contradicts the mode's per-run prediction.
    pub unexpected: u64,
    pub acceptance_rate: Dyadic,
}

impl TrialSummary {
    /// Per-run predictions for honest and transform runs; for naive cheats
    /// the acceptance count must lie within three standard deviations of ½.
    pub fn matches_expectation(&self) -> bool {
        match self.config.mode {
            Mode::NaiveCheat => {
                let t = self.config.trials as f64;
                (self.accepted as f64 - t / 2.0).abs() <= 3.0 * (t / 4.0).sqrt()
            }
            _ => self.unexpected == 0,
        }
    }
}

/// Trial `t` runs with seed `seed + t`; the committed bit, when not fixed,
/// is the low bit of the first draw of stream `u64::MAX` of that seed.
pub fn trial_bit(config: &TrialConfig, trial_seed: u64) -> u8 {
    config.bit.unwrap_or_else(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        rng.set_stream(u64::MAX);
        (rng.next_u32() & 1) as u8
    })
}

pub fn run_trial(config: &TrialConfig, trial: u64, conv: &FiducialConvention) -> Result<Transcript> {
    let seed = config.seed.wrapping_add(trial);
    let c = trial_bit(config, seed);
    match config.protocol {
        Protocol::SingleBox => run_single_box(c, config.mode, seed, conv),
        Protocol::Buhrman => run_buhrman(config.n, c, config.mode, seed, conv),
    }
}

pub fn run_trials(config: &TrialConfig, conv: &FiducialConvention) -> Result<TrialSummary> {
    let results: Vec<(bool, bool, bool)> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let tr = run_trial(config, t, conv)?;
            Ok((tr.verdict == Verdict::Accept, tr.revealed != tr.committed, tr.as_expected() == Some(false)))
        })
        .collect::<Result<_>>()?;
    let accepted = results.iter().filter(|r| r.0).count() as u64;
    let revealed_flipped = results.iter().filter(|r| r.1).count() as u64;
    let unexpected = results.iter().filter(|r| r.2).count() as u64;
    let acceptance_rate = rate(accepted, config.trials);
    Ok(TrialSummary { config: config.clone(), accepted, revealed_flipped, unexpected, acceptance_rate })
}

/// `k / t` when `t` is a power of two, otherwise the nearest multiple of `2^-32`.
fn rate(k: u64, t: u64) -> Dyadic {
    if t == 0 {
        return Dyadic::ZERO;
    }
    if t.is_power_of_two() {
        return Dyadic::new(k as i128, t.trailing_zeros());
    }
    let scaled = ((k as u128) << 32) + (t as u128) / 2;
    Dyadic::new((scaled / t as u128) as i128, 32)
}

/// Outcome of auditing the encodings `psi0`, `psi1` for a split of parties.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub psi0: String,
    pub psi1: String,
    /// Alice's parties, 1-based.
    pub alice: Vec<usize>,
    /// Bob's parties, 1-based.
    pub bob: Vec<usize>,
    pub correct: bool,
    pub concealing: bool,
    pub binding: bool,
    pub cheat_witness: Option<ReversibleTransform>,
    /// Binding is decided against reversible transforms only.
    pub reversible_only: bool,
}

impl AuditReport {
    pub fn perfect(&self) -> bool {
        self.correct && self.concealing && self.binding
    }
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (1..1usize << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect())
        .collect()
}

fn label(t: &GptTensor, conv: &FiducialConvention) -> String {
    identify(t, conv).unwrap_or_else(|| "custom".into())
}

/// Audit a commitment encoding `c ↦ psi_c` with Alice holding `alice_sites`
/// (0-based) and Bob the rest.
pub fn audit_protocol(
    psi0: &GptTensor,
    psi1: &GptTensor,
    alice_sites: &[usize],
    conv: &FiducialConvention,
) -> Result<AuditReport> {
    for s in [psi0, psi1] {
        if !is_catalog_pure(s, conv) {
            return Err(Error::NotCatalog(format!("{s:?}")));
        }
    }
    let n = psi0.n_parties();
    if psi1.n_parties() != n {
        return Err(Error::PartyMismatch { left: n, right: psi1.n_parties() });
    }
    if psi0 == psi1 {
        return Err(Error::IdenticalStates);
    }
    let mut alice = alice_sites.to_vec();
    alice.sort_unstable();
    alice.dedup();
    if alice.is_empty() {
        return Err(Error::Unsupported("Alice must hold at least one party".into()));
    }
    if let Some(&bad) = alice.iter().find(|&&p| p >= n) {
        return Err(Error::BadParty { party: bad, n_parties: n });
    }
    let bob: Vec<usize> = (0..n).filter(|p| !alice.contains(p)).collect();

    let correct = match discriminating_povm(psi0, psi1, conv) {
        Ok(p) => verify_perfect_discrimination(&p, psi0, psi1),
        Err(Error::NoSeparatingInput) => false,
        Err(e) => return Err(e),
    };
    let mut concealing = true;
    for kept in subsets(&bob) {
        let discard: Vec<usize> = (0..n).filter(|p| !kept.contains(p)).collect();
        if psi0.marginalize(&discard)? != psi1.marginalize(&discard)? {
            concealing = false;
            break;
        }
    }
    let witness = locally_connected(psi0, psi1, &Subgroup::on_sites(n, &alice))?;
    Ok(AuditReport {
        psi0: label(psi0, conv),
        psi1: label(psi1, conv),
        alice: alice.iter().map(|p| p + 1).collect(),
        bob: bob.iter().map(|p| p + 1).collect(),
        correct,
        concealing,
        binding: witness.is_none(),
        cheat_witness: witness,
        reversible_only: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub alice: Vec<usize>,
    pub pairs: usize,
    pub perfect: usize,
    pub concealing: usize,
    /// Counts keyed by `correct,concealing,binding` flags, e.g. `"1,1,0"`.
    pub counts: BTreeMap<String, usize>,
    pub reports: Vec<AuditReport>,
}

impl SweepSummary {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["psi0", "psi1", "alice", "bob", "correct", "concealing", "binding", "witness"])
            .map_err(csv_error)?;
        let join = |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
        for r in &self.reports {
            let witness = r.cheat_witness.as_ref().map(|t| t.to_string()).unwrap_or_default();
            w.write_record([
                r.psi0.as_str(),
                r.psi1.as_str(),
                &join(&r.alice),
                &join(&r.bob),
                &r.correct.to_string(),
                &r.concealing.to_string(),
                &r.binding.to_string(),
                &witness,
            ])
            .map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Audit all 276 unordered pairs of the 24 pure bipartite states.
pub fn impossibility_sweep(alice_sites: &[usize], conv: &FiducialConvention) -> Result<SweepSummary> {
    let states: Vec<GptTensor> = (0..24).map(bipartite_state).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..24).flat_map(|i| (i + 1..24).map(move |j| (i, j))).collect();
    let reports: Vec<AuditReport> = pairs
        .par_iter()
        .map(|&(i, j)| audit_protocol(&states[i], &states[j], alice_sites, conv))
        .collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    for r in &reports {
        let key = format!("{},{},{}", r.correct as u8, r.concealing as u8, r.binding as u8);
        *counts.entry(key).or_insert(0) += 1;
    }
    let mut alice: Vec<usize> = alice_sites.iter().map(|p| p + 1).collect();
    alice.sort_unstable();
    alice.dedup();
    Ok(SweepSummary {
        alice,
        pairs: reports.len(),
        perfect: reports.iter().filter(|r| r.perfect()).count(),
        concealing: reports.iter().filter(|r| r.concealing).count(),
        counts,
        reports,
    })
}

/// Audits of the pair for every nonempty set of Alice parties.
pub fn audit_all_splits(psi0: &GptTensor, psi1: &GptTensor, conv: &FiducialConvention) -> Result<Vec<AuditReport>> {
    let parties: Vec<usize> = (0..psi0.n_parties()).collect();
    subsets(&parties).iter().map(|alice| audit_protocol(psi0, psi1, alice, conv)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_pairs() {
        assert_eq!(count_11_odd(&parse_bits("1100").unwrap()).unwrap(), 1);
        assert_eq!(count_11_odd(&parse_bits("0110").unwrap()).unwrap(), 0);
        assert_eq!(count_11_odd(&[]).unwrap(), 0);
        assert!(matches!(count_11_odd(&[1, 1, 1]), Err(Error::OddLength(_))));
    }

    #[test]
    fn cheat_parameters() {
        assert_eq!(solve_cheat(0, 1), CheatParams { alpha: 0, beta: 1, gamma: 0 });
        assert!(solve_cheat(1, 1).is_trivial());
        let p = solve_cheat_with(1, 0, 1, 1);
        assert_eq!(p.map_output(1, 0), 0);
        assert_eq!(p.map_output(1, 1), 1);
    }

    #[test]
    fn cheat_transform_relabels_the_box() {
        for conv in FiducialConvention::all() {
            for (alpha, gamma) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let p = CheatParams::flip(alpha, gamma);
                let got = p.transform(&conv).apply_to_table(&box_table_nonlocal(0, 0, 0), &conv).unwrap();
                assert_eq!(got, p.cheated_table());
            }
        }
    }

    #[test]
    fn lazy_box_respects_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let mut b = LazyBox::new(box_table_nonlocal(0, 0, 0));
            let x = rng.gen_range(0..=1u8);
            let y = rng.gen_range(0..=1u8);
            let a = b.input(0, x, &mut rng).unwrap();
            let bb = b.input(1, y, &mut rng).unwrap();
            assert_eq!(a ^ bb, x & y);
        }
    }

    #[test]
    fn tampered_transcript_is_rejected() {
        let conv = FiducialConvention::standard();
        let t = run_buhrman(3, 1, Mode::Honest, 5, &conv).unwrap();
        assert_eq!(t.verdict, Verdict::Accept);
        let mut bad = t.clone();
        bad.boxes[0].a_revealed ^= 1;
        assert_eq!(bad.recompute_verdict(), Verdict::Reject);
    }
}
