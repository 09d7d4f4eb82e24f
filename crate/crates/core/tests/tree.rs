use guesslab::tree::{
    build_meager_witness, build_tree, enumerate_branch_prefixes, property, verify_tree, verify_witness, Chain, Padding,
    TreeMode,
};
use guesslab::BitWord;

fn w(s: &str) -> BitWord {
    s.parse().unwrap()
}

#[test]
fn stage_bounds_and_maximal_counts() {
    let tree = build_tree(6, TreeMode::Induced).unwrap();
    assert_eq!(tree.stage_bounds(), &[1, 2, 5, 6, 21, 22, 277]);
    for s in 0..=6 {
        assert_eq!(enumerate_branch_prefixes(&tree, s).unwrap().len(), 1 << s.div_ceil(2));
    }
    assert!(enumerate_branch_prefixes(&tree, 7).is_err());
    assert!(verify_tree(&tree).all_passed());
}

#[test]
fn induced_widths_match_subset_sizes() {
    let tree = build_tree(2, TreeMode::Induced).unwrap();
    // levels 2, 3, 4 serve {x_0}, {x_1}, {x_0, x_1}
    assert_eq!(&tree.widths()[..5], &[1, 2, 1, 1, 2]);
    assert_eq!(tree.maximal_nodes(2), vec![w("0000"), w("1000")]);
}

#[test]
fn third_extension_at_an_even_stage_is_caught() {
    let mut tree = build_tree(1, TreeMode::Induced).unwrap();
    tree.push_chain(Chain {
        stage: 1,
        origin: BitWord::new(),
        padding: Padding::ZerosThen(true),
        levels: vec![2],
    });
    tree.set_stage_bound(1, 3);
    let report = verify_tree(&tree);
    assert!(!report.passed(property::EVEN_STAGE_SPLITS));
    assert!(report.get(property::EVEN_STAGE_SPLITS).unwrap().counterexample.is_some());
}

#[test]
fn widened_subset_level_is_caught() {
    let mut tree = build_tree(2, TreeMode::Induced).unwrap();
    // level 2 should hold only the extension of x_0 = 0; add one of x_1 = 1
    tree.push_chain(Chain {
        stage: 2,
        origin: w("1"),
        padding: Padding::Zeros,
        levels: vec![2],
    });
    let report = verify_tree(&tree);
    assert!(!report.passed(property::ODD_STAGE_SUBSET_LEVELS));
    assert!(!report.passed(property::LEVEL_WIDTH));
}

#[test]
fn branching_chain_is_caught() {
    let mut tree = build_tree(2, TreeMode::Induced).unwrap();
    tree.push_chain(Chain {
        stage: 2,
        origin: w("0"),
        padding: Padding::ZerosThen(true),
        levels: vec![3],
    });
    let report = verify_tree(&tree);
    assert!(!report.passed(property::ODD_STAGE_CHAINS));
}

#[test]
fn node_above_its_stage_bound_is_caught() {
    let mut tree = build_tree(3, TreeMode::Induced).unwrap();
    tree.set_stage_bound(2, 4);
    let report = verify_tree(&tree);
    assert!(!report.passed(property::BOUNDED_HEIGHT));
}

#[test]
fn every_forbidden_block_flips_the_witness() {
    let tree = build_tree(6, TreeMode::Induced).unwrap();
    let witness = build_meager_witness(&tree).unwrap();
    assert_eq!(witness.pi_levels, vec![2, 6, 22]);
    assert!(verify_witness(&tree, &witness));
    for (i, block) in witness.blocks.iter().enumerate() {
        for forbidden in &block.forbidden {
            let mut bad = witness.clone();
            bad.overwrite_block(i, forbidden);
            assert!(!verify_witness(&tree, &bad));
        }
    }
}

#[test]
fn witness_does_not_verify_against_a_different_tree() {
    let small = build_tree(4, TreeMode::Induced).unwrap();
    let big = build_tree(6, TreeMode::Induced).unwrap();
    let witness = build_meager_witness(&big).unwrap();
    assert!(!verify_witness(&small, &witness));
}

#[test]
fn stage_seven_builds_and_verifies() {
    let tree = build_tree(7, TreeMode::Induced).unwrap();
    assert_eq!(tree.maximal_nodes(7).len(), 16);
    assert!(verify_tree(&tree).all_passed());
}

#[test]
fn json_is_stable() {
    let a = build_tree(3, TreeMode::Induced).unwrap().to_json().to_string();
    let b = build_tree(3, TreeMode::Induced).unwrap().to_json().to_string();
    assert_eq!(a, b);
    let witness = build_meager_witness(&build_tree(4, TreeMode::Induced).unwrap()).unwrap();
    let v = witness.to_json();
    assert_eq!(v["blocks"][0]["start"], 2);
    assert!(v["x"].is_string());
}
