mod common;

use common::*;
use prbox::catalog::{bipartite_state, class_state};
use prbox::json::{table_from_json, table_to_json, tensor_from_json, tensor_to_json};
use prbox::transforms::{ReversibleTransform, Sign, SingleSiteTransform, Subgroup};
use prbox::validity::is_valid_state;
use prbox::{state_to_table, table_to_state, Dyadic, FiducialConvention, GptTensor};
use proptest::prelude::*;

fn site() -> impl Strategy<Value = SingleSiteTransform> {
    (0u8..4, any::<bool>())
        .prop_map(|(k, plus)| SingleSiteTransform::new(k, if plus { Sign::Plus } else { Sign::Minus }).unwrap())
}

fn perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

fn transform(n: usize) -> impl Strategy<Value = ReversibleTransform> {
    (proptest::collection::vec(site(), n), perm(n)).prop_map(|(s, p)| ReversibleTransform::new(s, p).unwrap())
}

fn tripartite_state() -> impl Strategy<Value = GptTensor> {
    let conv = FiducialConvention::standard();
    (0usize..3, 0usize..24, 0usize..4).prop_map(move |(kind, n, w)| match kind {
        0 => class_state(44 + (n % 3) as u32, &conv).unwrap(),
        _ => bipartite_state(n).unwrap().tensor_product(&prbox::catalog::pure_state(w).unwrap()).unwrap(),
    })
}

/// `U` applied to site `k` of a flat state, by direct index arithmetic.
fn reference_site(state: &[f64], n: usize, k: usize, m: [[i8; 3]; 3]) -> Vec<f64> {
    let stride = 3usize.pow((n - 1 - k) as u32);
    let mut out = vec![0.0; state.len()];
    for (flat, slot) in out.iter_mut().enumerate() {
        let r = (flat / stride) % 3;
        let base = flat - r * stride;
        *slot = (0..3).map(|c| m[r][c] as f64 * state[base + c * stride]).sum();
    }
    out
}

proptest! {
    #[test]
    fn compose_matches_sequential_application(a in transform(3), b in transform(3), s in tripartite_state()) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.apply(&s).unwrap(), a.apply(&b.apply(&s).unwrap()).unwrap());
    }

    #[test]
    fn inverse_undoes(t in transform(3), s in tripartite_state()) {
        prop_assert_eq!(t.invert().apply(&t.apply(&s).unwrap()).unwrap(), s.clone());
        prop_assert_eq!(t.compose(&t.invert()).unwrap().action_matrix(), ReversibleTransform::identity(3).action_matrix());
    }

    #[test]
    fn associativity(a in transform(2), b in transform(2), c in transform(2)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn transforms_preserve_validity(t in transform(3), s in tripartite_state()) {
        prop_assert!(is_valid_state(&t.apply(&s).unwrap()));
    }

    #[test]
    fn local_action_matches_reference(sites in proptest::collection::vec(site(), 3), s in tripartite_state()) {
        let t = ReversibleTransform::local(sites.clone());
        let mut expected = vals(&s);
        for (k, u) in sites.iter().enumerate() {
            expected = reference_site(&expected, 3, k, u.matrix());
        }
        prop_assert_eq!(vals(&t.apply(&s).unwrap()), expected);
    }

    #[test]
    fn transform_json_round_trip(t in transform(3)) {
        let s = serde_json::to_string(&t).unwrap();
        let back: ReversibleTransform = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn dyadic_field_laws(a in -1000i64..1000, ea in 0u32..10, b in -1000i64..1000, eb in 0u32..10) {
        let x = Dyadic::new(a as i128, ea);
        let y = Dyadic::new(b as i128, eb);
        prop_assert_eq!((x + y).to_f64(), x.to_f64() + y.to_f64());
        prop_assert_eq!((x * y).to_f64(), x.to_f64() * y.to_f64());
        prop_assert_eq!(x - x, Dyadic::ZERO);
        let parsed: Dyadic = x.to_string().parse().unwrap();
        prop_assert_eq!(parsed, x);
    }

    #[test]
    fn table_state_round_trip(n in 0usize..24, conv_id in 0usize..8) {
        let conv = FiducialConvention::from_id(conv_id).unwrap();
        let s = bipartite_state(n).unwrap();
        let t = state_to_table(&s, &conv).unwrap();
        prop_assert_eq!(table_to_state(&t, &conv).unwrap(), s);
        prop_assert_eq!(table_from_json(&table_to_json(&t)).unwrap(), t);
    }
}

#[test]
fn tables_agree_with_reference_under_every_convention() {
    for conv in FiducialConvention::all() {
        let map =
            [[conv.effect_index(0, 0), conv.effect_index(0, 1)], [conv.effect_index(1, 0), conv.effect_index(1, 1)]];
        for n in 0..24 {
            let s = bipartite_state(n).unwrap();
            let lib: Vec<f64> = state_to_table(&s, &conv).unwrap().probs().iter().map(|d| d.to_f64()).collect();
            assert_eq!(lib, table_of(&vals(&s), 2, map), "Omega{n} convention {}", conv.id());
        }
    }
}

#[test]
fn tensor_json_round_trip_for_catalog() {
    let conv = FiducialConvention::standard();
    for e in prbox::catalog::entries(&conv) {
        assert_eq!(tensor_from_json(&tensor_to_json(&e.tensor)).unwrap(), e.tensor, "{}", e.id);
    }
}

#[test]
fn subgroup_sizes() {
    assert_eq!(Subgroup::on_sites(3, &[1, 2]).elements().unwrap().len(), 128);
    assert_eq!(Subgroup::on_sites(3, &[1, 2]).without_permutations().elements().unwrap().len(), 64);
    assert_eq!(Subgroup::local_only(3).elements().unwrap().len(), 512);
}
