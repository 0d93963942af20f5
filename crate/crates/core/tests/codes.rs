use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qrank::code::{rank_weight, vsub};
use qrank::constructions::{additive_len3, gabidulin, split_len4};
use qrank::linalg::{self, Matrix};
use qrank::subspace::{self, DEFAULT_BUDGET as B};
use qrank::{Code, Error, Field, Scope, Subspace, Tower};

fn fixtures() -> Vec<(&'static str, Code)> {
    vec![
        ("additive-len3", additive_len3()),
        ("split-len4", split_len4()),
        ("gabidulin-2-4-2", gabidulin(2, 4, 2, 1).unwrap()),
    ]
}

fn random_invertible(f: &Field, n: usize, rng: &mut impl Rng) -> Matrix {
    loop {
        let m: Matrix = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..f.order())).collect()).collect();
        if linalg::rank(f, &m) == n {
            return m;
        }
    }
}

fn log_qm(c: &Code, size: &BigUint) -> u32 {
    let mut r = 0;
    let mut acc = BigUint::from(1u32);
    while &acc < size {
        acc *= c.qm();
        r += 1;
    }
    assert_eq!(&acc, size);
    r
}

#[test]
fn fixtures_are_almost_affine() {
    for (name, c) in fixtures() {
        let v = c.is_almost_affine(Scope::All, B, 0);
        assert!(v.almost_affine && !v.partial, "{name}");
    }
}

#[test]
fn projection_sizes() {
    let c = additive_len3();
    let f = c.tower().base().clone();
    assert_eq!(c.size(), BigUint::from(256u32));
    let e1 = Subspace::span(&f, 3, &[Subspace::unit(3, 0)]);
    assert_eq!(c.projection_size(&e1), BigUint::from(16u32));
    assert_eq!(c.projection_size(&Subspace::full(&f, 3)), BigUint::from(256u32));
    assert_eq!(c.projection_size(&Subspace::zero(2, 3)), BigUint::from(1u32));
    assert_eq!(c.rank_of(&e1).unwrap(), 1);
}

#[test]
fn non_integral_rank_is_reported() {
    let t = Arc::new(Tower::make(2, 1, 2, None, None).unwrap());
    let c = Code::explicit(t.clone(), 2, vec![vec![0, 0], vec![1, 0]]).unwrap();
    let e1 = Subspace::span(t.base(), 2, &[Subspace::unit(2, 0)]);
    assert!(matches!(c.rank_of(&e1), Err(Error::NotAlmostAffine { .. })));
    assert!(!c.is_almost_affine(Scope::All, B, 0).almost_affine);
}

#[test]
fn basis_choice_does_not_change_the_qmatroid() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, c) in fixtures() {
        let t = c.tower();
        let m0 = c.qmatroid(B).unwrap();
        for _ in 0..3 {
            // a new F_q-basis of F_{q^m}: an invertible combination of the old one
            let a = random_invertible(t.base(), t.m(), &mut rng);
            let pi: Vec<u32> = a
                .iter()
                .map(|row| t.from_coords(row))
                .collect();
            let t2 = Arc::new(t.with_basis(pi).unwrap());
            let c2 = c.with_tower(t2.clone()).unwrap();
            assert!(c2.qmatroid(B).unwrap().same_ranks(&m0, B).unwrap(), "{name}");
            for w in c.codewords(B).unwrap().iter().take(40) {
                assert_eq!(rank_weight(t, w), rank_weight(&t2, w));
            }
        }
    }
}

#[test]
fn code_support_is_anchor_independent() {
    for (name, c) in fixtures() {
        let words = c.codewords(B).unwrap();
        let s0 = c.code_support(&words[0], B).unwrap();
        for x in words.iter().step_by(7) {
            assert_eq!(c.code_support(x, B).unwrap(), s0, "{name}");
        }
        // explicit storage takes the other path
        let e = c.to_explicit(B).unwrap();
        assert_eq!(e.code_support(words.last().unwrap(), B).unwrap(), s0);
    }
    let c = split_len4();
    let words = c.codewords(B).unwrap();
    let e = c.to_explicit(B).unwrap();
    for x in &words {
        for y in &words {
            assert_eq!(e.code_support(x, B).unwrap(), e.code_support(y, B).unwrap());
        }
    }
}

#[test]
fn fibres_have_the_predicted_size_and_shortenings_stay_almost_affine() {
    for (name, c) in fixtures() {
        let f = c.tower().base().clone();
        let k = log_qm(&c, &c.size());
        let words = c.codewords(B).unwrap();
        let x = &words[words.len() / 2];
        for z in subspace::enumerate(&f, c.n(), None, B).unwrap().iter().step_by(3) {
            let r = c.rank_of(z).unwrap();
            let sub = c.subcode(z, x).unwrap();
            assert_eq!(log_qm(&c, &sub.size()), k - r, "{name}");
            let via_explicit = c.to_explicit(B).unwrap().subcode(z, x).unwrap();
            assert_eq!(via_explicit.size(), sub.size());
            if z.dim() < c.n() {
                let s = c.shorten(z, x, None).unwrap();
                assert!(s.is_almost_affine(Scope::All, B, 0).almost_affine, "{name}");
            }
        }
    }
}

#[test]
fn puncturing_and_shortening_realize_restriction_and_contraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, c) in fixtures() {
        let f = c.tower().base().clone();
        let m = c.qmatroid(B).unwrap();
        let x = c.default_anchor(B).unwrap();
        for _ in 0..6 {
            let d = rng.gen_range(1..c.n());
            let z = Subspace::random(&f, c.n(), d, &mut rng);
            let p = c.puncture(&z).unwrap().qmatroid(B).unwrap();
            assert!(p.same_ranks(&m.restrict(&z), B).unwrap(), "{name}");
            // two different complements of Z
            let c1 = z.direct_complement(&f);
            let c2 = loop {
                let w = Subspace::random(&f, c.n(), c.n() - d, &mut rng);
                if z.intersect(&f, &w).is_zero() {
                    break w;
                }
            };
            for comp in [&c1, &c2] {
                let s = c.shorten(&z, &x, Some(comp)).unwrap().qmatroid(B).unwrap();
                assert!(s.same_ranks(&m.contract_along(&z, comp), B).unwrap(), "{name}");
            }
        }
    }
}

#[test]
fn bad_complement_is_rejected() {
    let c = split_len4();
    let f = c.tower().base().clone();
    let z = Subspace::span(&f, 4, &[Subspace::unit(4, 0)]);
    let x = vec![0; 4];
    assert!(c.shorten(&z, &x, Some(&z)).is_err());
}

#[test]
fn equivalence_transports_the_qmatroid() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, c) in fixtures() {
        let t = c.tower().clone();
        let f = t.base();
        let m = c.qmatroid(B).unwrap();
        let a = random_invertible(f, c.n(), &mut rng);
        let shift: Vec<u32> = (0..c.n()).map(|_| rng.gen_range(0..t.top().order())).collect();
        let c2 = c.apply_equivalence(&a, &shift).unwrap();
        let m2 = c2.qmatroid(B).unwrap();
        let inv_t = linalg::transpose(&linalg::inverse(f, &a).unwrap(), c.n());
        assert!(m.equivalent_under(&m2, &inv_t, B).unwrap(), "{name}");
        // a pure translation leaves every rank unchanged
        let c3 = c.apply_equivalence(&linalg::identity(c.n()), &shift).unwrap();
        assert!(c3.qmatroid(B).unwrap().same_ranks(&m, B).unwrap());
        assert_eq!(c2.min_distance(B).unwrap(), c.min_distance(B).unwrap());
    }
}

#[test]
fn minimum_distance() {
    for (name, c) in fixtures() {
        let t = c.tower();
        let d = c.min_distance(B).unwrap();
        let words = c.codewords(B).unwrap();
        // independent pairwise oracle on a slice
        let mut best = usize::MAX;
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                best = best.min(rank_weight(t, &vsub(t, a, b)));
            }
        }
        assert_eq!(d, best, "{name}");
        // Singleton-like bound |C| ≤ q^{max(m,n)(min(m,n) − d + 1)}
        let (m, n) = (t.m(), c.n());
        let bound = BigUint::from(t.q()).pow((m.max(n) * (m.min(n) + 1 - d)) as u32);
        assert!(c.size() <= bound, "{name}");
    }
    assert_eq!(gabidulin(2, 4, 2, 1).unwrap().min_distance(B).unwrap(), 3);
    assert_eq!(split_len4().min_distance(B).unwrap(), 2);
}

#[test]
fn spec_roundtrip_and_linearity() {
    for (_, c) in fixtures() {
        let back = Code::from_spec(&serde_json::from_str(&serde_json::to_string(&c.spec()).unwrap()).unwrap()).unwrap();
        assert_eq!(back, c);
    }
    let lin = split_len4().classify_linearity(B).unwrap();
    assert!(lin.qm_linear);
    let lin = additive_len3().classify_linearity(B).unwrap();
    assert!(lin.p_linear && !lin.qm_linear);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_linear_codes_are_almost_affine(seed in any::<u64>(), n in 2..5usize, kk in 1..3usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Arc::new(Tower::make(2, 1, 2, None, None).unwrap());
        let k = kk.min(n);
        let g: Matrix = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..4)).collect()).collect();
        let c = Code::linear_span(t.clone(), n, &g).unwrap();
        let v = c.is_almost_affine(Scope::All, B, 0);
        prop_assert!(v.almost_affine);
        let m = c.qmatroid(B).unwrap();
        prop_assert_eq!(BigUint::from(4u32).pow(m.full_rank()), c.size());
        // rank is the dimension of the projected F_{q^m}-space
        let f = t.base();
        for z in subspace::enumerate(f, n, None, B).unwrap().iter().take(30) {
            let proj = linalg::mat_mul(t.top(), &g, &linalg::transpose(z.rows(), n), z.dim());
            prop_assert_eq!(linalg::rank(t.top(), &proj) as u32, m.rank(z));
        }
    }
}
