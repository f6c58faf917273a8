mod common;

use motifkit::dsl::{automorphism_count, canonical_form, symmetry_count, CanonicalLabel};
use motifkit::rng::MotifRng;
use motifkit::{parse_motif, MotifError};
use proptest::prelude::*;

use common::{oracle_automorphisms, oracle_isomorphic, permutations, random_motif, relabel};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn source_round_trips(seed in any::<u64>()) {
        let q = random_motif(&mut MotifRng::new(seed), 6, true, false);
        let text = q.to_source();
        let back = parse_motif(&text).unwrap();
        prop_assert_eq!(back.to_source(), text);
        prop_assert_eq!(canonical_form(&back), canonical_form(&q));
    }

    #[test]
    fn label_ignores_vertex_names(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let q = random_motif(&mut MotifRng::new(seed), 5, true, true);
        let perms = permutations(q.size());
        let p = relabel(&q, pick.get(&perms));
        prop_assert_eq!(canonical_form(&p), canonical_form(&q));
    }

    #[test]
    fn labels_agree_with_isomorphism_oracle(a in any::<u64>(), b in any::<u64>()) {
        let qa = random_motif(&mut MotifRng::new(a), 5, true, true);
        let qb = random_motif(&mut MotifRng::new(b), 5, true, true);
        prop_assert_eq!(canonical_form(&qa) == canonical_form(&qb), oracle_isomorphic(&qa, &qb));
    }

    #[test]
    fn symmetry_counts_agree_with_oracle(seed in any::<u64>()) {
        let q = random_motif(&mut MotifRng::new(seed), 5, true, true);
        prop_assert_eq!(automorphism_count(&q), oracle_automorphisms(&q, false));
        prop_assert_eq!(symmetry_count(&q), oracle_automorphisms(&q, true));
    }

    #[test]
    fn label_hex_round_trips(seed in any::<u64>()) {
        let l = canonical_form(&random_motif(&mut MotifRng::new(seed), 8, true, true));
        prop_assert_eq!(CanonicalLabel::from_hex(&l.to_hex()), Some(l.clone()));
        let json = serde_json::to_string(&l).unwrap();
        prop_assert_eq!(serde_json::from_str::<CanonicalLabel>(&json).unwrap(), l);
    }
}

// Small motifs are few enough to compare every pair exhaustively.
#[test]
fn labels_separate_all_three_vertex_structures() {
    let mut rng = MotifRng::new(99);
    let motifs: Vec<_> = (0..300).map(|_| random_motif(&mut rng, 3, false, false)).collect();
    for a in &motifs {
        for b in &motifs {
            assert_eq!(
                canonical_form(a) == canonical_form(b),
                oracle_isomorphic(a, b),
                "\n{a}\nvs\n{b}"
            );
        }
    }
}

#[test]
fn named_examples() {
    let l = |s: &str| canonical_form(&parse_motif(s).unwrap());
    assert_eq!(l("A -> B; B -> C; C -> A"), l("X -> Z; Z -> Y; Y -> X"));
    assert_ne!(l("A -> B; B -> C; C -> A"), l("A -> B; B -> C; A -> C"));
    assert_eq!(l("A - B"), l("B - A"));
    assert_ne!(l("A -> B; A.t = 1"), l("A -> B; B.t = 1"));
    assert_eq!(automorphism_count(&parse_motif("A -> B; B -> C; C -> A").unwrap()), 3);
    assert_eq!(automorphism_count(&parse_motif("A - B; B - C; C - A").unwrap()), 6);
}

#[test]
fn error_variants() {
    assert!(matches!(parse_motif("A -> B; B !> A; A !> B; B -> A"), Err(MotifError::ContradictoryEdges(..))));
    assert_eq!(parse_motif("A -> B; C -> D"), Err(MotifError::DisconnectedMotif));
    assert_eq!(parse_motif("A -> B; C !> A"), Err(MotifError::DisconnectedMotif));
    assert!(matches!(parse_motif("A -> B; A.t < \"x\""), Err(MotifError::NonNumericOrdering { .. })));
}
