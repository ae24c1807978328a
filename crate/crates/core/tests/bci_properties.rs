use bcay_core::bci::{
    crosscheck_fif_2bci, is_fif, is_m_bci, normalization_soundness, predicted_bci, BciWitness, Verdict,
};
use bcay_core::bicayley::{is_isomorphism, translate_and_map};
use bcay_core::group::Automorphism;
use bcay_core::{BiCayleyGraph, ConnectionSet, GqParams};

/// Re-verifies a witness without the sweep's machinery: the stored bijection
/// is checked on all vertex pairs, and `T = g·S^α` is refuted for every `g`
/// and every automorphism found by generator-image search.
fn reverify(w: &BciWitness, p: GqParams) {
    let g1 = BiCayleyGraph::build(&w.s).unwrap();
    let g2 = BiCayleyGraph::build(&w.t).unwrap();
    assert!(is_isomorphism(&g1, &g2, w.iso.mapping().unwrap()));
    for alpha in Automorphism::search_by_generator_images(p) {
        for g in p.elements() {
            assert_ne!(translate_and_map(&w.s, g, &alpha).unwrap(), w.t);
        }
    }
}

#[test]
fn failures_are_monotone_and_witnessed() {
    for n in [4u32, 6] {
        let p = GqParams::new(n).unwrap();
        let two = is_m_bci(p, 2).unwrap();
        let three = is_m_bci(p, 3).unwrap();
        assert_eq!(two.verdict, Verdict::Fails);
        assert_eq!(three.verdict, Verdict::Fails);
        assert_eq!(three.witnesses[0], two.witnesses[0]);
        for w in &three.witnesses {
            reverify(w, p);
        }
    }
}

#[test]
fn one_bci_always_holds() {
    for n in 2..=7 {
        assert!(is_m_bci(GqParams::new(n).unwrap(), 1).unwrap().verdict.holds());
    }
}

#[test]
fn fif_agrees_with_two_bci() {
    for n in 2..=5 {
        let c = crosscheck_fif_2bci(GqParams::new(n).unwrap()).unwrap();
        assert!(c.agree, "n={n}");
        assert_eq!(c.fif.holds(), predicted_bci(n));
    }
}

#[test]
fn fif_witnesses_are_unfused() {
    for n in [4u32, 6, 8, 10] {
        let p = GqParams::new(n).unwrap();
        let r = is_fif(p);
        let (x, y) = r.witness.unwrap();
        assert_eq!(p.element_order(x), p.element_order(y));
        for alpha in Automorphism::search_by_generator_images(p) {
            let img = alpha.apply(x, p).unwrap();
            assert!(img != y && img != p.inverse(y));
        }
    }
}

#[test]
fn normalized_sweep_loses_nothing() {
    let p = GqParams::new(3).unwrap();
    for c in normalization_soundness(p, 3).unwrap() {
        assert!(c.agree, "{c:?}");
        assert!(c.all_sets > c.normalized_sets);
    }
}

#[test]
fn reports_are_deterministic() {
    let p = GqParams::new(6).unwrap();
    let a = serde_json::to_string(&is_m_bci(p, 3).unwrap().without_timing()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| serde_json::to_string(&is_m_bci(p, 3).unwrap().without_timing()).unwrap());
    assert_eq!(a, b);
}

#[test]
fn subset_checks_match_examples() {
    use bcay_core::bci::is_bci_subset;
    let p = GqParams::new(5).unwrap();
    for e in ["1", "1, a", "1, b", "1, a, b", "1, a^2, b*a^3"] {
        assert!(is_bci_subset(&ConnectionSet::parse(p, e).unwrap()).unwrap().holds, "{e}");
    }
}
