use proptest::prelude::*;

use toda_core::cells::{build_chain_complex, cell_boundary, enumerate_cells, Cell};
use toda_core::homology::{homology_of, HomologyGroup};
use toda_core::lie::{cartan_matrix, generate_weyl_group, NodeSet, RootType, WeylGroup};
use toda_core::morse::{conjectured_betti, morse_complex, unstable_set, IncidenceConfig};

fn group(t: RootType, l: usize) -> WeylGroup {
    generate_weyl_group(&cartan_matrix(t, l).unwrap()).unwrap()
}

fn homology(t: RootType, l: usize) -> Vec<HomologyGroup> {
    homology_of(build_chain_complex(&group(t, l)).unwrap().chain_complex()).unwrap()
}

fn render(h: &[HomologyGroup]) -> Vec<String> {
    h.iter().map(ToString::to_string).collect()
}

const SUPPORTED: [(RootType, usize); 9] = [
    (RootType::A, 1),
    (RootType::A, 2),
    (RootType::A, 3),
    (RootType::A, 4),
    (RootType::B, 2),
    (RootType::B, 3),
    (RootType::C, 3),
    (RootType::D, 4),
    (RootType::G, 2),
];

#[test]
fn frozen_homology_values() {
    assert_eq!(render(&homology(RootType::A, 3)), ["Z", "Z^6 + (Z/2)^5", "Z^5 + Z/2", "0"]);
    assert_eq!(render(&homology(RootType::B, 2)), ["Z", "Z^5 + Z/2", "0"]);
    assert_eq!(render(&homology(RootType::G, 2)), ["Z", "Z^9 + Z/2", "0"]);
}

#[test]
fn frozen_cell_counts() {
    let counts = |t, l| build_chain_complex(&group(t, l)).unwrap().counts();
    assert_eq!(counts(RootType::A, 3), [8, 56, 72, 24]);
    assert_eq!(counts(RootType::B, 2), [4, 16, 8]);
    assert_eq!(counts(RootType::G, 2), [4, 24, 12]);
    assert_eq!(counts(RootType::B, 3), [8, 104, 144, 48]);
    assert_eq!(counts(RootType::C, 3), [8, 104, 144, 48]);
}

#[test]
fn connected_and_euler_consistent() {
    for (t, l) in SUPPORTED {
        let cx = build_chain_complex(&group(t, l)).unwrap();
        let h = homology_of(cx.chain_complex()).unwrap();
        assert_eq!(h[0].to_string(), "Z", "{t}{l}");
        let alt: i64 = h.iter().map(|g| if g.degree % 2 == 0 { g.free_rank as i64 } else { -(g.free_rank as i64) }).sum();
        assert_eq!(alt, cx.euler_characteristic(), "{t}{l}");
        for g in &h {
            assert!(g.torsion.iter().all(|&d| d >= 2));
            assert!(g.torsion.windows(2).all(|w| w[1] % w[0] == 0));
        }
    }
}

#[test]
fn top_homology_vanishes_for_type_a() {
    for l in [2, 3] {
        assert!(homology(RootType::A, l)[l].is_zero());
    }
}

#[test]
fn conjecture_matches_cellular_a4() {
    let h = homology(RootType::A, 4);
    assert_eq!(h[1].free_rank, 10);
    assert_eq!(conjectured_betti(4, 2).unwrap().value, h[2].free_rank as i128);
}

#[test]
fn morse_and_cellular_agree_up_to_a3() {
    for l in 1..=3 {
        let w = group(RootType::A, l);
        let m = morse_complex(&w, IncidenceConfig::default()).unwrap();
        assert_eq!(homology_of(m.chain_complex()).unwrap(), homology(RootType::A, l));
    }
}

#[test]
fn stable_unstable_partition() {
    for (t, l) in SUPPORTED {
        let w = group(t, l);
        for a in w.ids() {
            let u = unstable_set(&w, a);
            for i in 1..=l {
                let d = w.length(w.right_mul_simple(a, i)) as i64 - w.length(a) as i64;
                assert_eq!(d.abs(), 1);
                assert_eq!(u.contains(i), d > 0);
            }
        }
    }
}

fn cell_strategy() -> impl Strategy<Value = (RootType, usize, usize, usize)> {
    let types = prop_oneof![
        Just((RootType::A, 3)),
        Just((RootType::B, 3)),
        Just((RootType::C, 3)),
        Just((RootType::G, 2)),
        Just((RootType::D, 4)),
    ];
    (types, 0usize..5, any::<usize>()).prop_map(|((t, l), k, pick)| (t, l, k % (l + 1), pick))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_cells_are_fixed(params in cell_strategy()) {
        let (t, l, k, pick) = params;
        let w = group(t, l);
        let cells = enumerate_cells(&w, k);
        let c = cells[pick % cells.len()];
        prop_assert!(c.is_canonical(&w));
        prop_assert_eq!(Cell::canonical(&w, c.coset_rep, c.diagram), c);
        for (face, coeff) in cell_boundary(&w, &c).unwrap() {
            prop_assert!(face.is_canonical(&w));
            prop_assert_eq!(face.codimension(), k + 1);
            prop_assert!(coeff == 1 || coeff == -1);
        }
    }

    #[test]
    fn cosets_partition_the_group((t, l) in prop_oneof![Just((RootType::A, 3)), Just((RootType::B, 3)), Just((RootType::G, 2))], bits in any::<u32>()) {
        let w = group(t, l);
        let s = NodeSet::from_bits(bits).intersection(NodeSet::full(l));
        let ws = w.parabolic_subgroup(s);
        let mut seen = vec![0usize; w.order()];
        for rep in w.ids().filter(|&x| w.min_coset_rep(x, s) == x) {
            for &x in &ws.elements {
                seen[w.mul(rep, x).index()] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&n| n == 1));
    }
}
