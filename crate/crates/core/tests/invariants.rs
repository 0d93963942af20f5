use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use qrank::acceptance::orthogonal_dual;
use qrank::code::Word;
use qrank::constructions::{additive_len3, gabidulin, semifield_code_kdim, semifield_search, semifield_witness_point, split_len4};
use qrank::invariants::{
    self, forward_system, full_space_distribution, generalized_weights_by_subcodes, generalized_weights_checked,
    macwilliams, minimal_codewords, qbinomial_inversion, rank_counts, weight_distribution_bruteforce,
    weight_distribution_formula, MacWilliamsPath,
};
use qrank::subspace::{gaussian_binomial, DEFAULT_BUDGET as B};
use qrank::{Code, Field, QMatroid, Tower};

fn f(q: u32) -> Arc<Field> {
    let (p, e) = qrank::field::prime_power(q).unwrap();
    Arc::new(Field::make(p, e, None).unwrap())
}

fn codes() -> Vec<(&'static str, Code)> {
    let s = semifield_search(2, 4).unwrap().unwrap();
    let p = semifield_witness_point(&s, 3).unwrap();
    vec![
        ("additive-len3", additive_len3()),
        ("split-len4", split_len4()),
        ("gabidulin-2-4-2", gabidulin(2, 4, 2, 1).unwrap()),
        ("gabidulin-2-3-1", gabidulin(2, 3, 1, 1).unwrap()),
        ("gabidulin-3-3-2", gabidulin(3, 3, 2, 1).unwrap()),
        ("semifield-k3", semifield_code_kdim(&s, 3, &p).unwrap()),
    ]
}

#[test]
fn rank_counts_sum_to_gaussian_binomials() {
    for (name, c) in codes() {
        let m = c.qmatroid(B).unwrap();
        let r = rank_counts(&m, B).unwrap();
        for v in 0..=m.n() {
            let total: BigUint = r.counts[v].iter().sum();
            assert_eq!(total, gaussian_binomial(m.n() as i64, v as i64, m.q() as u64), "{name}");
        }
    }
}

#[test]
fn uniform_rank_counts() {
    for (q, n, k) in [(2u32, 4usize, 2usize), (3, 3, 1), (2, 5, 3), (4, 3, 2)] {
        let u = QMatroid::uniform(f(q), n, k).unwrap();
        let r = rank_counts(&u, B).unwrap();
        for v in 0..=n {
            for uu in 0..r.counts[v].len() {
                let expect = if uu == v.min(k) { gaussian_binomial(n as i64, v as i64, q as u64) } else { BigUint::zero() };
                assert_eq!(r.get(v, uu), &expect, "U({k},{n}) over F_{q}: R^{uu}_{v}");
            }
        }
    }
}

#[test]
fn formula_matches_bruteforce() {
    for (name, c) in codes() {
        let m = c.qmatroid(B).unwrap();
        let mdeg = c.tower().m() as u32;
        let formula = weight_distribution_formula(&m, mdeg, B).unwrap();
        let words = c.codewords(B).unwrap();
        for x in [&words[0], &words[words.len() / 3], words.last().unwrap()] {
            let bf = weight_distribution_bruteforce(&c, x, B).unwrap();
            assert_eq!(bf.a, formula.a, "{name}");
        }
        assert!(formula.nonneg());
        assert_eq!(formula.total(), BigInt::from(c.size()));
    }
}

#[test]
fn full_space_distribution_matches_its_qmatroid() {
    for (q, n, mdeg) in [(2u32, 3usize, 2u32), (2, 4, 4), (3, 2, 3), (2, 3, 5)] {
        let u = QMatroid::uniform(f(q), n, n).unwrap();
        let a = weight_distribution_formula(&u, mdeg, B).unwrap().a;
        assert_eq!(a, full_space_distribution(n, q as u64, mdeg));
        let total: BigInt = a.iter().sum();
        assert_eq!(total, BigInt::from(q).pow(mdeg * n as u32));
    }
}

#[test]
fn uniform_distributions_and_realizability() {
    let q = 2u32;
    for n in 2..=5usize {
        for k in 1..n {
            let u = QMatroid::uniform(f(q), n, k).unwrap();
            for mdeg in 1..=(n as u32 + 1) {
                let r = invariants::invariants_report(&u, mdeg, B).unwrap();
                if mdeg as usize >= n {
                    // realized by a Gabidulin code
                    assert!(r.nonneg, "U({k},{n}), m={mdeg}");
                    assert!(r.integral);
                }
                if n - k + 1 > mdeg as usize {
                    // no word can have rank ≥ d > m, so no code realizes this table
                    let beyond = r.a.iter().skip(mdeg as usize + 1).any(|x| !x.is_zero());
                    assert!(!r.nonneg || beyond, "U({k},{n}), m={mdeg}: {:?}", r.a);
                }
            }
        }
    }
    // the printed distribution of U(2, 4) at m = 4 against a Gabidulin code
    let u = QMatroid::uniform(f(2), 4, 2).unwrap();
    let bf = weight_distribution_bruteforce(&gabidulin(2, 4, 2, 1).unwrap(), &[0; 4], B).unwrap();
    assert_eq!(weight_distribution_formula(&u, 4, B).unwrap().a, bf.a);
}

#[test]
fn macwilliams_paths_agree_and_match_explicit_duals() {
    for (name, c) in codes() {
        let m = c.qmatroid(B).unwrap();
        let mdeg = c.tower().m() as u32;
        let a = weight_distribution_formula(&m, mdeg, B).unwrap().a;
        let s = macwilliams(&m, &a, mdeg, MacWilliamsPath::Solve, B).unwrap();
        let d = macwilliams(&m, &a, mdeg, MacWilliamsPath::DualFormula, B).unwrap();
        assert_eq!(s.b, d.b, "{name}");
        assert!(s.b[0].is_one(), "{name}");
    }
    // F_{q^m}-linear codes: B is the weight distribution of the orthogonal dual
    for (q, n, k) in [(2u32, 4u32, 2u32), (2, 3, 1), (3, 3, 2), (2, 4, 1)] {
        let c = gabidulin(q, n, k, 1).unwrap();
        let t = c.tower().clone();
        let top = t.top();
        let g: Vec<Word> = (0..k).map(|i| t.pi().iter().map(|&x| top.frobenius(x, i * t.base().e())).collect()).collect();
        let lin = Code::linear_span(t.clone(), n as usize, &g).unwrap();
        assert_eq!(lin.to_explicit(B).unwrap(), c.to_explicit(B).unwrap());
        let dual = orthogonal_dual(t, n as usize, &g).unwrap();
        let bf = weight_distribution_bruteforce(&dual, &vec![0; n as usize], B).unwrap();
        let m = c.qmatroid(B).unwrap();
        let a = weight_distribution_formula(&m, n, B).unwrap().a;
        let b = macwilliams(&m, &a, n, MacWilliamsPath::Solve, B).unwrap();
        assert!(invariants::matches_integers(&b, &bf.a), "gabidulin {q} {n} {k}");
        // the dual code induces the dual q-matroid
        assert!(dual.qmatroid(B).unwrap().same_ranks(&m.dual(), B).unwrap());
    }
}

#[test]
fn generalized_weights() {
    for (name, c) in codes() {
        let m = c.qmatroid(B).unwrap();
        let gw = generalized_weights_checked(&m, Some(&c), B).unwrap();
        assert!(gw.d.windows(2).all(|w| w[0] < w[1]), "{name}: {:?}", gw.d);
        let loopless = m.loops(B).unwrap().is_empty();
        if loopless {
            assert_eq!(*gw.d.last().unwrap(), m.n(), "{name}");
        }
        let x = c.default_anchor(B).unwrap();
        assert_eq!(generalized_weights_by_subcodes(&c, &x, B).unwrap(), gw.d, "{name}");
        assert_eq!(gw.d[0], c.min_distance(B).unwrap(), "{name}");
    }
    let u = QMatroid::uniform(f(2), 5, 3).unwrap();
    assert_eq!(generalized_weights_checked(&u, None, B).unwrap().d, vec![3, 4, 5]);
}

#[test]
fn minimal_codewords_of_small_codes() {
    let t = Arc::new(Tower::make(2, 1, 2, None, None).unwrap());
    let c = Code::explicit(t.clone(), 3, vec![vec![0, 0, 0], vec![1, 2, 0]]).unwrap();
    let mins = minimal_codewords(&c, &[0, 0, 0], B).unwrap();
    assert_eq!(mins.len(), 1);
    assert_eq!(mins[0].0, vec![1, 2, 0]);
    assert_eq!(mins[0].1.dim(), 2);
    // in a linear code, minimal supports have no proper supports inside them
    let c = split_len4();
    let mins = minimal_codewords(&c, &[0; 4], B).unwrap();
    let fld = c.tower().base().clone();
    let words = c.codewords(B).unwrap();
    for (_, s) in &mins {
        for w in &words {
            let sw = qrank::code::support(c.tower(), w);
            assert!(!(sw.dim() > 0 && sw.dim() < s.dim() && sw.is_subspace_of(&fld, s)));
        }
    }
    assert!(!mins.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn inversion_roundtrip(q in prop_oneof![Just(2u64), Just(3), Just(4), Just(5), Just(7)], a in prop::collection::vec(-1000i64..100_000, 1..8)) {
        let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        prop_assert_eq!(qbinomial_inversion(&forward_system(&a, q), q), a.clone());
        let s: Vec<BigInt> = a.iter().map(|x| x.abs()).collect();
        prop_assert_eq!(forward_system(&qbinomial_inversion(&s, q), q), s);
    }
}
