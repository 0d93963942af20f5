//! Generalized q-matroid ports `S_{P0,P}(M) = (Γ, 𝒜)` and vertical
//! separations of q-matroids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::Matrix;
use crate::qmatroid::QMatroid;
use crate::scope::Coverage;
use crate::subspace::{self, Subspace};

#[derive(Clone, Debug)]
pub struct Port {
    m: QMatroid,
    p0: Subspace,
    p: Subspace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PortClass {
    /// `ρ(P0 + V) = ρ(V)`.
    Gamma,
    /// `ρ(P0 + V) = ρ(P0) + ρ(V)`, the family `𝒜`.
    Unauthorized,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PortPredicates {
    pub perfect: bool,
    pub ideal: bool,
    pub connected: bool,
}

impl Port {
    pub fn new(m: QMatroid, p0: Subspace, p: Subspace) -> Result<Self> {
        let n = m.n();
        let f = m.field().clone();
        if p0.n() != n || p.n() != n {
            return Err(Error::dim("port spaces must live in the ground space"));
        }
        if p0.dim() + p.dim() != n || !p0.intersect(&f, &p).is_zero() {
            return Err(Error::invalid("P0 and P must be complementary"));
        }
        if m.try_rank(&p0)? == 0 {
            return Err(Error::invalid("the dealer space must have positive rank"));
        }
        Ok(Port { m, p0, p })
    }

    pub fn qmatroid(&self) -> &QMatroid {
        &self.m
    }

    pub fn p0(&self) -> &Subspace {
        &self.p0
    }

    pub fn p(&self) -> &Subspace {
        &self.p
    }

    fn field(&self) -> &Field {
        self.m.field()
    }

    pub fn classify(&self, v: &Subspace) -> Result<PortClass> {
        if !v.is_subspace_of(self.field(), &self.p) {
            return Err(Error::invalid("space is not contained in P"));
        }
        let rv = self.m.try_rank(v)?;
        let joint = self.m.try_rank(&self.p0.sum(self.field(), v))?;
        let rp0 = self.m.try_rank(&self.p0)?;
        let gamma = joint == rv;
        let unauthorized = joint == rp0 + rv;
        match (gamma, unauthorized) {
            (true, true) => Err(Error::Internal(format!(
                "space {:?} lies in both Γ and 𝒜",
                v.rows()
            ))),
            (true, false) => Ok(PortClass::Gamma),
            (false, true) => Ok(PortClass::Unauthorized),
            (false, false) => Ok(PortClass::Neither),
        }
    }

    /// Every subspace of `P` with its class.
    pub fn classification(&self, budget: u64) -> Result<Vec<(Subspace, PortClass)>> {
        subspace::enumerate_within(self.field(), &self.p, None, budget)?
            .into_iter()
            .map(|v| {
                let c = self.classify(&v)?;
                Ok((v, c))
            })
            .collect()
    }

    /// Inclusion-minimal members of `Γ`, in enumeration order.
    pub fn gamma_min(&self, budget: u64) -> Result<Vec<Subspace>> {
        let gamma: Vec<Subspace> = self
            .classification(budget)?
            .into_iter()
            .filter(|(_, c)| *c == PortClass::Gamma)
            .map(|(v, _)| v)
            .collect();
        let f = self.field();
        Ok(gamma
            .iter()
            .filter(|v| {
                !gamma
                    .iter()
                    .any(|w| w.dim() < v.dim() && w.is_subspace_of(f, v))
            })
            .cloned()
            .collect())
    }

    pub fn predicates(&self, budget: u64) -> Result<PortPredicates> {
        let f = self.field();
        let classes = self.classification(budget)?;
        let perfect = classes.iter().all(|(_, c)| *c != PortClass::Neither);
        let points: Vec<&Subspace> = classes.iter().map(|(v, _)| v).filter(|v| v.dim() == 1).collect();
        let mut ideal = true;
        for p in &points {
            if self.m.try_rank(p)? != 1 {
                ideal = false;
                break;
            }
        }
        let minimal = self.gamma_min(budget)?;
        let connected = points
            .iter()
            .all(|p| minimal.iter().any(|v| p.is_subspace_of(f, v)));
        Ok(PortPredicates {
            perfect,
            ideal,
            connected,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub a: Matrix,
    pub b: Matrix,
    /// `ρ(A) + ρ(B) − ρ(E)`.
    pub defect: u32,
    /// `min{ρ(A), ρ(B)}`.
    pub min_rank: u32,
}

impl Separation {
    /// Whether the pair is a vertical `t`-separation.
    pub fn is_t_separation(&self, t: u32) -> bool {
        t >= 1 && self.min_rank >= t && self.defect < t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparationMode {
    Exhaustive,
    /// `count` random complementary pairs drawn from `seed`.
    Random { count: u64, seed: u64 },
}

/// Exhaustive enumeration is limited to these sizes.
pub const EXHAUSTIVE_MAX_N: usize = 6;
pub const EXHAUSTIVE_MAX_Q: u32 = 4;

/// Complement of `a` given by the graph of `x: C0 → A`, where `C0` is
/// spanned by the unit vectors outside the pivots of `a`.
fn complement_from(f: &Field, a: &Subspace, free: &[usize], x: &[Elem]) -> Subspace {
    let n = a.n();
    let d = a.dim();
    let rows: Matrix = free
        .iter()
        .enumerate()
        .map(|(r, &c)| {
            let mut v = Subspace::unit(n, c);
            for (i, arow) in a.rows().iter().enumerate() {
                let coef = x[r * d + i];
                if coef != 0 {
                    for (vj, &aj) in v.iter_mut().zip(arow) {
                        *vj = f.add(*vj, f.mul(coef, aj));
                    }
                }
            }
            v
        })
        .collect();
    Subspace::span(f, n, &rows)
}

fn free_columns(a: &Subspace) -> Vec<usize> {
    let piv = a.pivots();
    (0..a.n()).filter(|c| !piv.contains(c)).collect()
}

fn evaluate_pair(m: &QMatroid, a: &Subspace, b: &Subspace, full: u32) -> Result<Separation> {
    let ra = m.try_rank(a)?;
    let rb = m.try_rank(b)?;
    Ok(Separation {
        a: a.rows().clone(),
        b: b.rows().clone(),
        defect: ra + rb - full,
        min_rank: ra.min(rb),
    })
}

/// Visits every unordered complementary pair `{A, B}` with both parts proper
/// and nonzero (exhaustive mode) or a random sample of ordered pairs.
fn for_each_pair(
    m: &QMatroid,
    mode: SeparationMode,
    budget: u64,
    mut visit: impl FnMut(&Subspace, &Subspace) -> Result<()>,
) -> Result<Coverage> {
    let f = m.field().clone();
    let n = m.n();
    let q = f.order();
    match mode {
        SeparationMode::Exhaustive => {
            if n > EXHAUSTIVE_MAX_N || q > EXHAUSTIVE_MAX_Q {
                return Err(Error::Budget {
                    needed: format!("exhaustive separations over F_{q}^{n}"),
                    budget,
                });
            }
            let total: u128 = (1..n)
                .map(|d| {
                    let count = subspace::gaussian_binomial(n as i64, d as i64, q as u64);
                    let c: u128 = count.try_into().unwrap_or(u128::MAX);
                    c.saturating_mul((q as u128).pow((d * (n - d)) as u32))
                })
                .sum();
            if total > budget as u128 {
                return Err(Error::Budget {
                    needed: total.to_string(),
                    budget,
                });
            }
            let mut inspected = 0;
            for d in 1..n {
                for a in subspace::enumerate(&f, n, Some(d), budget)? {
                    let free = free_columns(&a);
                    let len = d * (n - d);
                    let mut x = vec![0; len];
                    loop {
                        let b = complement_from(&f, &a, &free, &x);
                        if a < b {
                            visit(&a, &b)?;
                            inspected += 1;
                        }
                        let mut i = 0;
                        while i < len {
                            x[i] += 1;
                            if x[i] < q {
                                break;
                            }
                            x[i] = 0;
                            i += 1;
                        }
                        if i == len {
                            break;
                        }
                    }
                }
            }
            Ok(Coverage {
                requested: "all".into(),
                exhaustive: true,
                sample_size: None,
                inspected,
            })
        }
        SeparationMode::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if n >= 2 {
                for _ in 0..count {
                    let d = rng.gen_range(1..n);
                    let a = Subspace::random(&f, n, d, &mut rng);
                    let x: Vec<Elem> = (0..d * (n - d)).map(|_| rng.gen_range(0..q)).collect();
                    let b = complement_from(&f, &a, &free_columns(&a), &x);
                    visit(&a, &b)?;
                }
            }
            Ok(Coverage {
                requested: format!("sample={count}"),
                exhaustive: false,
                sample_size: Some(count),
                inspected: if n >= 2 { count } else { 0 },
            })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub t: u32,
    pub coverage: Coverage,
    pub separations: Vec<Separation>,
}

pub fn vertical_separations(m: &QMatroid, t: u32, mode: SeparationMode, budget: u64) -> Result<SeparationReport> {
    let full = m.full_rank();
    let mut separations = Vec::new();
    let coverage = for_each_pair(m, mode, budget, |a, b| {
        let s = evaluate_pair(m, a, b, full)?;
        if s.is_t_separation(t) {
            separations.push(s);
        }
        Ok(())
    })?;
    Ok(SeparationReport {
        t,
        coverage,
        separations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectivityReport {
    /// Largest `j` with no `ℓ`-separation for `ℓ < j`; `None` when no
    /// separation of any order exists.
    pub connectivity: Option<u32>,
    pub witness: Option<Separation>,
    pub coverage: Coverage,
}

pub fn connectivity(m: &QMatroid, mode: SeparationMode, budget: u64) -> Result<ConnectivityReport> {
    let full = m.full_rank();
    let mut best: Option<Separation> = None;
    let coverage = for_each_pair(m, mode, budget, |a, b| {
        let s = evaluate_pair(m, a, b, full)?;
        // the smallest order this pair separates at is defect + 1
        if s.defect < s.min_rank && best.as_ref().is_none_or(|b| s.defect < b.defect) {
            best = Some(s);
        }
        Ok(())
    })?;
    Ok(ConnectivityReport {
        connectivity: best.as_ref().map(|s| s.defect + 1),
        witness: best,
        coverage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn f2() -> Arc<Field> {
        Arc::new(Field::make(2, 1, None).unwrap())
    }

    #[test]
    fn threshold_port_on_uniform() {
        let f = f2();
        let m = QMatroid::uniform(f.clone(), 4, 2).unwrap();
        let p0 = Subspace::span(&f, 4, &[Subspace::unit(4, 0)]);
        let p = Subspace::span(&f, 4, &[Subspace::unit(4, 1), Subspace::unit(4, 2), Subspace::unit(4, 3)]);
        let port = Port::new(m, p0, p).unwrap();
        for (v, c) in port.classification(1 << 20).unwrap() {
            let expected = if v.dim() >= 2 { PortClass::Gamma } else { PortClass::Unauthorized };
            assert_eq!(c, expected);
        }
        let gm = port.gamma_min(1 << 20).unwrap();
        assert_eq!(gm.len(), 7);
        assert!(gm.iter().all(|v| v.dim() == 2));
    }

    #[test]
    fn free_qmatroid_separates_everywhere() {
        let f = f2();
        let m = QMatroid::uniform(f, 3, 3).unwrap();
        let r = vertical_separations(&m, 1, SeparationMode::Exhaustive, 1 << 20).unwrap();
        // unordered complementary pairs of F_2^3 with both parts nonzero
        assert_eq!(r.separations.len() as u64, r.coverage.inspected);
        assert_eq!(r.coverage.inspected, 28);
        assert!(vertical_separations(&m, 4, SeparationMode::Exhaustive, 1 << 20)
            .unwrap()
            .separations
            .is_empty());
        assert_eq!(connectivity(&m, SeparationMode::Exhaustive, 1 << 20).unwrap().connectivity, Some(1));
    }

    #[test]
    fn invalid_ports_are_rejected() {
        let f = f2();
        let m = QMatroid::uniform(f.clone(), 3, 1).unwrap();
        let e1 = Subspace::span(&f, 3, &[Subspace::unit(3, 0)]);
        let bad = Subspace::span(&f, 3, &[Subspace::unit(3, 0), Subspace::unit(3, 1)]);
        assert!(Port::new(m.clone(), e1.clone(), bad).is_err());
        let zero = Subspace::zero(2, 3);
        assert!(Port::new(m, zero, Subspace::full(&f, 3)).is_err());
    }
}
