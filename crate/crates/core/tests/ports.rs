use qrank::constructions::split_len4;
use qrank::ports::{connectivity, vertical_separations, Port, PortClass, SeparationMode};
use qrank::subspace::{self, DEFAULT_BUDGET};
use qrank::{QMatroid, Subspace};

fn v(bits: &[u32]) -> Vec<u32> {
    bits.to_vec()
}

fn example_port() -> Port {
    let m = split_len4().qmatroid(DEFAULT_BUDGET).unwrap();
    let f = m.field().clone();
    let p0 = Subspace::span(&f, 4, &[v(&[1, 0, 1, 0])]);
    let p = Subspace::span(&f, 4, &[v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0]), v(&[0, 0, 0, 1])]);
    Port::new(m, p0, p).unwrap()
}

#[test]
fn example_gamma_min() {
    let port = example_port();
    let f = port.qmatroid().field().clone();
    let expected: Vec<Subspace> = vec![
        Subspace::span(&f, 4, &[v(&[0, 1, 0, 1])]),
        Subspace::span(&f, 4, &[v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0])]),
        Subspace::span(&f, 4, &[v(&[0, 1, 1, 0]), v(&[0, 0, 0, 1])]),
        Subspace::span(&f, 4, &[v(&[0, 1, 0, 0]), v(&[0, 0, 1, 1])]),
    ];
    let mut got = port.gamma_min(DEFAULT_BUDGET).unwrap();
    let mut want = expected.clone();
    got.sort();
    want.sort();
    assert_eq!(got, want);
    let pr = port.predicates(DEFAULT_BUDGET).unwrap();
    assert!(pr.perfect && pr.ideal && pr.connected);
}

#[test]
fn disconnected_matroid_connected_port() {
    let port = example_port();
    let m = port.qmatroid();
    let f = m.field().clone();
    let a = Subspace::span(&f, 4, &[Subspace::unit(4, 0), Subspace::unit(4, 1)]);
    let b = Subspace::span(&f, 4, &[Subspace::unit(4, 2), Subspace::unit(4, 3)]);
    let seps = vertical_separations(m, 1, SeparationMode::Exhaustive, DEFAULT_BUDGET).unwrap();
    let has_ab = seps.separations.iter().any(|s| {
        (&s.a == a.rows() && &s.b == b.rows()) || (&s.a == b.rows() && &s.b == a.rows())
    });
    assert!(has_ab && port.predicates(DEFAULT_BUDGET).unwrap().connected);
    assert_eq!(connectivity(m, SeparationMode::Exhaustive, DEFAULT_BUDGET).unwrap().connectivity, Some(1));
}

#[test]
fn gamma_min_members_are_minimal() {
    let port = example_port();
    let f = port.qmatroid().field().clone();
    for g in port.gamma_min(DEFAULT_BUDGET).unwrap() {
        assert_eq!(port.classify(&g).unwrap(), PortClass::Gamma);
        for w in subspace::enumerate_within(&f, &g, None, DEFAULT_BUDGET).unwrap() {
            if w != g {
                assert_ne!(port.classify(&w).unwrap(), PortClass::Gamma);
            }
        }
    }
}

#[test]
fn one_dim_dealer_is_perfect() {
    let port = example_port();
    for (_, c) in port.classification(DEFAULT_BUDGET).unwrap() {
        assert_ne!(c, PortClass::Neither);
    }
    let zero = Subspace::zero(2, 4);
    assert_eq!(port.classify(&zero).unwrap(), PortClass::Unauthorized);
}

#[test]
fn threshold_structure_on_uniform() {
    let f = std::sync::Arc::new(qrank::Field::make(2, 1, None).unwrap());
    for k in 1..=3 {
        let m = QMatroid::uniform(f.clone(), 4, k).unwrap();
        let p0 = Subspace::span(&f, 4, &[Subspace::unit(4, 0)]);
        let p = p0.direct_complement(&f);
        let port = Port::new(m, p0, p).unwrap();
        for (s, c) in port.classification(DEFAULT_BUDGET).unwrap() {
            let want = if s.dim() >= k { PortClass::Gamma } else { PortClass::Unauthorized };
            assert_eq!(c, want, "k={k} {:?}", s.rows());
        }
        assert!(port.gamma_min(DEFAULT_BUDGET).unwrap().iter().all(|g| g.dim() == k));
    }
}

#[test]
fn loop_in_p_is_not_ideal() {
    let f = std::sync::Arc::new(qrank::Field::make(2, 1, None).unwrap());
    // rank of the image modulo e4, so <e4> is a loop
    let kill = Subspace::span(&f, 4, &[Subspace::unit(4, 3)]);
    let ff = f.clone();
    let m = QMatroid::from_fn(f.clone(), 4, qrank::qmatroid::Origin::Derived, move |s: &Subspace| {
        Ok((s.sum(&ff, &kill).dim() - 1) as u32)
    });
    let p0 = Subspace::span(&f, 4, &[Subspace::unit(4, 0)]);
    let port = Port::new(m, p0.clone(), p0.direct_complement(&f)).unwrap();
    assert!(!port.predicates(DEFAULT_BUDGET).unwrap().ideal);
}

#[test]
fn large_t_has_no_separation() {
    let m = split_len4().qmatroid(DEFAULT_BUDGET).unwrap();
    let t = m.full_rank() + 1;
    assert!(vertical_separations(&m, t, SeparationMode::Exhaustive, DEFAULT_BUDGET)
        .unwrap()
        .separations
        .is_empty());
    let r = vertical_separations(&m, 1, SeparationMode::Random { count: 200, seed: 7 }, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.coverage.sample_size, Some(200));
    assert!(r.separations.iter().all(|s| s.is_t_separation(1)));
}
