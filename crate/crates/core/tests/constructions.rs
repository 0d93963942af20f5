use std::path::PathBuf;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qrank::acceptance::{agtg_code, AGTG, AGTG_SUBSTITUTE};
use qrank::code::{rank_weight, CodeSpec};
use qrank::constructions::{
    self, agtg_make, agtg_norm, agtg_tower, gabidulin, semifield_code_2dim, semifield_code_kdim, semifield_search,
    semifield_witness_point, AgtgParams, Semifield, SemifieldSpec,
};
use qrank::geometry::Geometry;
use qrank::subspace::DEFAULT_BUDGET as B;
use qrank::{Code, Scope, Subspace};

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    std::fs::read_to_string(p).unwrap()
}

fn code_file(name: &str) -> Code {
    let spec: CodeSpec = serde_json::from_str(&data(name)).unwrap();
    Code::from_spec(&spec).unwrap()
}

#[test]
fn data_files_match_their_constructions() {
    assert_eq!(code_file("additive_len3.json"), constructions::additive_len3());
    assert_eq!(code_file("split_len4.json"), constructions::split_len4());
    assert_eq!(code_file("gabidulin_2_4_2.json"), gabidulin(2, 4, 2, 1).unwrap());
    let spec: SemifieldSpec = serde_json::from_str(&data("semifield_16.json")).unwrap();
    assert_eq!(spec, semifield_search(2, 4).unwrap().unwrap().spec());
    assert!(constructions::bundled("nope").is_err());
}

#[test]
fn semifield_search_is_deterministic_and_proper() {
    let a = semifield_search(2, 4).unwrap().unwrap();
    let b = semifield_search(2, 4).unwrap().unwrap();
    assert_eq!(a.spec(), b.spec());
    let cert = a.validate();
    assert!(cert.valid && cert.proper);
    assert_eq!(cert.identity, Some(a.identity()));
    let [x, y, z] = cert.proper_witness.unwrap();
    assert_ne!(a.mul(a.mul(x, y), z), a.mul(x, a.mul(y, z)));
    // left and right distributivity, checked directly
    for x in 0..16 {
        for y in 0..16 {
            for z in [0, 3, 7, 12] {
                assert_eq!(a.mul(x, a.add(y, z)), a.add(a.mul(x, y), a.mul(x, z)));
                assert_eq!(a.mul(a.add(y, z), x), a.add(a.mul(y, x), a.mul(z, x)));
            }
            if x != 0 && y != 0 {
                assert_ne!(a.mul(x, y), 0);
            }
        }
    }
    // F_8 has no proper semifield of dimension 3 over F_2
    assert!(semifield_search(2, 3).unwrap().is_none());
    let back = Semifield::from_spec(&a.spec()).unwrap();
    assert_eq!(back.spec(), a.spec());
}

#[test]
fn semifield_codes() {
    let s = semifield_search(2, 4).unwrap().unwrap();
    let c = semifield_code_2dim(&s).unwrap();
    assert_eq!(c.n(), 17);
    assert_eq!(c.size(), BigUint::from(256u32));
    let v = c.is_almost_affine(Scope::Sample(2000), B, 9);
    assert!(v.almost_affine);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = c.tower().base().clone();
    for d in 0..=17 {
        let z = Subspace::random(&f, 17, d, &mut rng);
        let size = c.projection_size(&z);
        assert!([1u32, 16, 256].iter().any(|&s| size == BigUint::from(s)), "{size}");
    }
    // the words (0, y, …, y) have rank 1
    for w in c.codewords(B).unwrap() {
        if w[0] == 0 && w[1] != 0 {
            assert_eq!(rank_weight(c.tower(), &w), 1);
            assert!(w[1..].iter().all(|&y| y == w[1]));
        }
    }
    let p = semifield_witness_point(&s, 3).unwrap();
    let c3 = semifield_code_kdim(&s, 3, &p).unwrap();
    assert_eq!(c3.size(), BigUint::from(4096u32));
    assert!(c3.is_almost_affine(Scope::All, B, 0).almost_affine);
    // a point with every entry in the scalar field is rejected
    assert!(semifield_code_kdim(&s, 3, &[0, 0]).is_err());
}

#[test]
fn gabidulin_is_mrd_and_linear() {
    for (q, n, k) in [(2u32, 4u32, 2u32), (2, 5, 2), (3, 3, 1), (4, 3, 2)] {
        let c = gabidulin(q, n, k, 1).unwrap();
        assert_eq!(c.min_distance(B).unwrap() as u32, n - k + 1);
        assert!(c.classify_linearity(B).unwrap().qm_linear);
    }
    assert!(gabidulin(2, 4, 4, 1).is_err());
    assert!(gabidulin(2, 4, 2, 2).is_err());
}

#[test]
fn bundled_agtg_parameters() {
    let (params, c) = agtg_code(AGTG).unwrap();
    assert_eq!(params.eta, 2);
    assert!(agtg_norm(&params).unwrap().holds());
    assert_eq!(c.size(), BigUint::from(2u32).pow(20));
    let lin = c.classify_linearity(B).unwrap();
    assert!(lin.p_linear && !lin.q_linear);
    // one short of the MRD bound n − k + 1 = 4
    assert_eq!(c.min_distance(B).unwrap(), 3);
    assert!(Geometry::from_code(&c, B).is_err());
}

#[test]
fn twisted_substitutes_are_mrd() {
    for p in [AGTG_SUBSTITUTE, (4, 1, 3, 2, 1, 1)] {
        let (params, c) = agtg_code(p).unwrap();
        let (q0, u, n, k, _, _) = p;
        assert_eq!(c.size(), BigUint::from(q0).pow(u * n * k));
        assert_eq!(c.min_distance(B).unwrap() as u32, n - k + 1, "{params:?}");
        let lin = c.classify_linearity(B).unwrap();
        assert!(lin.p_linear && !lin.qm_linear, "{params:?}");
        assert!(c.is_almost_affine(Scope::All, B, 0).almost_affine, "{params:?}");
    }
}

#[test]
fn norm_condition_is_enforced() {
    let (q0, u, n, k, s, h) = AGTG_SUBSTITUTE;
    let order = agtg_tower(q0, u, n).unwrap().top().order();
    let bad = (1..order)
        .find(|&eta| !agtg_norm(&AgtgParams { q0, u, n, k, s, h, eta }).unwrap().holds())
        .expect("some η violates the norm condition");
    assert!(agtg_make(&AgtgParams { q0, u, n, k, s, h, eta: bad }).is_err());
    assert!(agtg_make(&AgtgParams { q0, u, n, k, s, h, eta: order }).is_err());
    assert!(agtg_make(&AgtgParams { q0, u, n: 4, k, s: 2, h, eta: 0 }).is_err());
}
