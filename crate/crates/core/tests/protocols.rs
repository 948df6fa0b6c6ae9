#![allow(clippy::needless_range_loop)]

mod common;

use common::*;
use prbox::catalog::pure_state;
use prbox::catalog::{bipartite_state, class_state};
use prbox::commitment::{
    audit_protocol, impossibility_sweep, run_buhrman, run_single_box, run_trials, solve_cheat, CheatParams, Mode,
    Protocol, TrialConfig, Verdict,
};
use prbox::discrimination::{closed_form_bipartite_povm, discriminating_povm, exhaustive_bipartite_discriminators};
use prbox::purification::{find_purifications, Catalog};
use prbox::FiducialConvention;

#[test]
fn cheat_parameters_flip_the_reveal() {
    for x in 0..2u8 {
        let p = solve_cheat(x, x ^ 1);
        for a in 0..2u8 {
            let revealed = p.map_output(x, a);
            assert_eq!(revealed, a ^ (p.alpha & x) ^ p.gamma);
        }
        assert!(!p.is_trivial());
    }
    assert!(CheatParams::TRIVIAL.is_trivial());
}

#[test]
fn same_seed_same_transcript() {
    let conv = FiducialConvention::standard();
    for mode in [Mode::Honest, Mode::NaiveCheat, Mode::TransformCheat] {
        assert_eq!(run_single_box(1, mode, 99, &conv).unwrap(), run_single_box(1, mode, 99, &conv).unwrap());
    }
    assert_eq!(
        run_buhrman(4, 0, Mode::TransformCheat, 5, &conv).unwrap(),
        run_buhrman(4, 0, Mode::TransformCheat, 5, &conv).unwrap()
    );
    assert!(run_buhrman(2, 0, Mode::NaiveCheat, 5, &conv).is_err());
}

#[test]
fn buhrman_transcripts_satisfy_reference_checks() {
    let conv = FiducialConvention::standard();
    for n in 1..=5 {
        for seed in 0..40 {
            for c in 0..2 {
                let t = run_buhrman(n, c, Mode::TransformCheat, seed, &conv).unwrap();
                assert_eq!(t.boxes.len(), 2 * n + 1);
                assert_eq!(t.revealed, c ^ 1);
                let xs: Vec<u8> = t.boxes.iter().map(|r| r.x_revealed).collect();
                assert_eq!((count_11_odd(&xs[..2 * n]) + xs[2 * n] as usize + t.revealed as usize) % 2, 0);
                for r in &t.boxes {
                    assert_eq!(r.x_revealed & r.y, r.a_revealed ^ r.b);
                    assert_eq!(r.x_revealed, r.x ^ 1);
                }
                assert_eq!(t.verdict, Verdict::Accept);
                assert_eq!(t.recompute_verdict(), t.verdict);
            }
        }
    }
}

#[test]
fn trials_summary_counts() {
    let conv = FiducialConvention::standard();
    let config =
        TrialConfig { protocol: Protocol::Buhrman, mode: Mode::Honest, n: 2, bit: Some(1), trials: 64, seed: 11 };
    let s = run_trials(&config, &conv).unwrap();
    assert_eq!((s.accepted, s.revealed_flipped, s.unexpected), (64, 0, 0));
    assert_eq!(s.acceptance_rate.to_string(), "1");
    assert!(s.matches_expectation());
}

#[test]
fn discrimination_under_every_convention() {
    for conv in FiducialConvention::all() {
        for i in 0..24 {
            for j in i + 1..24 {
                let (s1, s2) = (bipartite_state(i).unwrap(), bipartite_state(j).unwrap());
                let p = discriminating_povm(&s1, &s2, &conv).unwrap();
                let a = vals(&p.a);
                assert_eq!((dot(&a, &vals(&s1)), dot(&a, &vals(&s2))), (1.0, 0.0), "{i}/{j} conv {}", conv.id());
                let c = vals(&p.complement);
                let e = product(&[[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]]);
                assert_eq!(a.iter().zip(&c).map(|(x, y)| x + y).collect::<Vec<_>>(), e);
            }
        }
    }
}

#[test]
fn closed_form_povm_matches_exhaustive_search() {
    let s16 = bipartite_state(16).unwrap();
    let s17 = bipartite_state(17).unwrap();
    let found = exhaustive_bipartite_discriminators(&s16, &s17).unwrap();
    assert!(!found.is_empty());
    for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let p = closed_form_bipartite_povm(x, y).unwrap();
        assert_eq!(p.terms.len(), 2);
    }
}

#[test]
fn audits_of_simple_pairs() {
    let conv = FiducialConvention::standard();
    let r = audit_protocol(&bipartite_state(16).unwrap(), &bipartite_state(17).unwrap(), &[0], &conv).unwrap();
    assert!(r.correct && r.concealing && !r.binding);
    let witness = r.cheat_witness.unwrap();
    assert_eq!(witness.apply(&bipartite_state(16).unwrap()).unwrap(), bipartite_state(17).unwrap());
    assert_eq!(witness.support(), vec![0]);
    let r = audit_protocol(&bipartite_state(0).unwrap(), &bipartite_state(5).unwrap(), &[0], &conv).unwrap();
    assert!(r.correct && !r.concealing);
    let c44 = class_state(44, &conv).unwrap();
    let c46 = class_state(46, &conv).unwrap();
    assert!(audit_protocol(&c44, &c46, &[0], &conv).unwrap().perfect());
}

#[test]
fn sweep_counts_are_consistent() {
    let conv = FiducialConvention::standard();
    let s = impossibility_sweep(&[0], &conv).unwrap();
    assert_eq!(s.pairs, 276);
    assert_eq!(s.counts.values().sum::<usize>(), 276);
    assert_eq!(s.reports.iter().filter(|r| r.concealing).count(), s.concealing);
    assert!(s.reports.iter().all(|r| r.correct && !r.perfect()));
    let csv = s.to_csv().unwrap();
    assert_eq!(csv.lines().count(), 277);
}

#[test]
fn pure_state_purifications_are_products() {
    let conv = FiducialConvention::standard();
    for w in 0..4 {
        let r = find_purifications(&pure_state(w).unwrap(), Catalog::Bipartite24, &conv).unwrap();
        assert_eq!(r.purifications.len(), 4);
        for p in &r.purifications {
            assert_eq!(marginal(&vals(&p.state), 2, &[0]), OMEGA[w].to_vec());
        }
    }
}
