mod support;

use lefschetz_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::*;

fn letter(max_v: usize) -> impl Strategy<Value = TwistLetter> {
    (1..=max_v, prop::bool::ANY).prop_map(|(v, s)| TwistLetter::new(v, if s { 1 } else { -1 }))
}

fn braid(gens: usize) -> impl Strategy<Value = Vec<BraidLetter>> {
    prop::collection::vec(
        (1..=gens, prop::bool::ANY).prop_map(|(i, s)| BraidLetter::new(i, if s { 1 } else { -1 })),
        0..8,
    )
}

fn vertex_fibration() -> impl Strategy<Value = AbstractLF> {
    (any::<u64>(), 2u32..=4).prop_map(|(seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_vertex_fibration(&mut rng, 3, 6, n);
        random_walk(&mut rng, &f, 3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn twist_words_match_lattice_oracle(
        v in 2usize..=6,
        n in 2u32..=5,
        word in prop::collection::vec(letter(6), 0..10),
        x in prop::collection::vec(-5i64..=5, 6),
    ) {
        let word: Vec<_> = word.into_iter().filter(|l| l.vertex <= v).collect();
        let tree = PlumbingTree::a_type(v, n).unwrap();
        let form = intersection_form(&tree);
        let x = &x[..v];
        let got = apply_twist_word(&form, &word, &HomClass::from_i64(x));
        let want = word_oracle(&form_oracle(v, &tree_edges(&tree), n), n, &word, x);
        prop_assert_eq!(got, HomClass::from_i64(&want));
    }

    #[test]
    fn inverse_words_undo_twists(v in 2usize..=5, n in 2u32..=3, word in prop::collection::vec(letter(5), 0..10)) {
        let word: Vec<_> = word.into_iter().filter(|l| l.vertex <= v).collect();
        let form = intersection_form(&PlumbingTree::a_type(v, n).unwrap());
        let x = HomClass::basis(v, 1);
        let mut both = word.clone();
        both.extend(inverse_word(&word));
        prop_assert_eq!(apply_twist_word(&form, &both, &x), x);
        let reduced = free_reduce(word.iter().copied());
        prop_assert_eq!(free_reduce(reduced.iter().copied()), reduced.clone());
        prop_assert_eq!(apply_twist_word(&form, &reduced, &HomClass::basis(v, v)), apply_twist_word(&form, &word, &HomClass::basis(v, v)));
    }

    #[test]
    fn arcs_match_free_group_oracle(p in 3usize..=5, w1 in braid(4), w2 in braid(4), i in 1usize..=4) {
        let gens = p - 1;
        let w1: Vec<_> = w1.into_iter().filter(|l| l.index <= gens).collect();
        let w2: Vec<_> = w2.into_iter().filter(|l| l.index <= gens).collect();
        let i = 1 + (i - 1) % gens;
        let disk = MarkedDisk::new(p).unwrap();
        let a = standard_arc(&disk, i).unwrap();
        let x = apply_braid_word(&disk, &w1, &a).unwrap();
        let y = apply_braid_word(&disk, &w2, &a).unwrap();
        prop_assert_eq!(arc_equal(&x, &y).unwrap(), arc_oracle_key(&w1, i) == arc_oracle_key(&w2, i));
        let mut undo = w1.clone();
        undo.reverse();
        let undo: Vec<_> = undo.into_iter().map(|l| l.inverse()).collect();
        let back = apply_braid_word(&disk, &undo, &x).unwrap();
        prop_assert!(arc_equal(&back, &a).unwrap());
        prop_assert_eq!(sphere_intersection(&x, &x).unwrap(), 2);
    }

    #[test]
    fn smith_form_matches_divisors(m in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..=4)) {
        let got = smith_as_i64(&smith_normal_form(&to_big(&m)));
        prop_assert_eq!(got, snf_oracle(&m));
    }

    #[test]
    fn moves_have_inverses(f in vertex_fibration(), pick in any::<prop::sample::Index>(), smooth in any::<bool>()) {
        let mode = if smooth { Mode::Smooth } else { Mode::Weinstein };
        let moves = f.legal_moves(mode);
        prop_assume!(!moves.is_empty());
        let mv = moves[pick.index(moves.len())].clone();
        let g = f.apply_move(&mv, mode).unwrap();
        let mut back = g.clone();
        for inv in f.inverse_moves(&mv) {
            back = back.apply_move(&inv, mode).unwrap();
        }
        prop_assert_eq!(back.canonical_key(), f.canonical_key());
        prop_assert_eq!(g.total_space_homology(), f.total_space_homology());
        prop_assert_eq!(g.euler_characteristic(), f.euler_characteristic());
    }

    #[test]
    fn keys_ignore_rotation(f in vertex_fibration()) {
        let g = f.apply_move(&Move::CyclicShift { direction: Direction::Left }, Mode::Weinstein).unwrap();
        prop_assert_eq!(g.canonical_key(), f.canonical_key());
    }

    #[test]
    fn documents_round_trip(f in vertex_fibration()) {
        let text = fibration_to_json(&f);
        let back = fibration_from_json(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(fibration_to_json(&back), text);
    }

    #[test]
    fn search_certificates_replay(f in vertex_fibration(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_walk(&mut rng, &f, 2);
        if let Some(c) = search(&f, &g, Mode::Weinstein, &SearchBudget::new(4, 2000, 0)).unwrap().certificate() {
            prop_assert_eq!(verify(&c), Verdict::Accept);
            prop_assert_eq!(verify(&c.reversed().unwrap()), Verdict::Accept);
            let text = certificate_to_json(&c);
            prop_assert_eq!(certificate_from_json(&text).unwrap(), c);
        }
    }

    #[test]
    fn block_sums_add_counts(i in prop::collection::vec(1usize..=3, 1..=3), j in prop::collection::vec(1usize..=3, 1..=3)) {
        let a = build_z(&i, 2).unwrap();
        let b = build_z(&j, 2).unwrap();
        let sum = end_connect_sum_fibration(&[a.clone(), b.clone()]).unwrap();
        let mut ij = i.clone();
        ij.extend(&j);
        prop_assert_eq!(&sum, &build_z(&ij, 2).unwrap());
        let budget = SearchBudget::new(2, 200, 0);
        let c = component_count(&sum, &budget);
        prop_assert_eq!(c.value, i.len() + j.len());
        let ra = invariant_report(&a, &budget);
        let rb = invariant_report(&b, &budget);
        let rs = invariant_report(&sum, &budget);
        prop_assert_eq!(sum_invariants(&ra, &rb).unwrap(), rs);
    }
}

#[test]
fn builtin_certificates_verify() {
    for n in 2..=4 {
        let certs = builtin_certificates(n);
        assert!(!certs.is_empty());
        for c in &certs {
            assert_eq!(verify(c), Verdict::Accept, "{}", c.provenance);
            assert_eq!(verify(&c.reversed().unwrap()), Verdict::Accept, "reverse {}", c.provenance);
            if n == 3 {
                assert_eq!(c.mode, Mode::Weinstein);
            }
        }
    }
}

#[test]
fn search_direction_swaps() {
    let x = build_x(1, 3).unwrap();
    let a = build_a_milnor(3, 3).unwrap();
    let budget = SearchBudget::new(12, 200_000, 0);
    let fwd = search(&x, &a, Mode::Weinstein, &budget).unwrap().certificate().unwrap();
    let bwd = search(&a, &x, Mode::Weinstein, &budget).unwrap().certificate().unwrap();
    assert_eq!(verify(&fwd), Verdict::Accept);
    assert_eq!(verify(&bwd), Verdict::Accept);
    assert_eq!(verify(&bwd.reversed().unwrap()), Verdict::Accept);
    let rev = bwd.reversed().unwrap();
    assert_eq!(rev.claimed_end, a);
    assert_eq!(rev.start.canonical_key(), x.canonical_key());
}
