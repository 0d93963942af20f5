//! Field towers `F_p ⊆ F_q ⊆ F_{q^m}` with a fixed `F_q`-basis of the top field.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldSpec};
use crate::linalg::{self, Matrix};

const COORD_TABLE_LIMIT: u64 = 1 << 20;

/// Serialized form of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub base: FieldSpec,
    pub top: FieldSpec,
    pub embed_root: Elem,
    pub pi_basis: Vec<Elem>,
}

/// Smallest encoding of a root in `big` of the polynomial `poly` whose
/// coefficients lie in the prime field.
pub fn min_root(big: &Field, poly: &[u32]) -> Option<Elem> {
    big.elements().find(|&x| {
        poly.iter()
            .rev()
            .fold(0, |acc, &c| big.add(big.mul(acc, x), c))
            == 0
    })
}

/// Image of every element of `small` in `big` under the embedding sending the
/// generator of `small` to `root`.
pub fn embedding_table(small: &Field, big: &Field, root: Elem) -> Vec<Elem> {
    small
        .elements()
        .map(|a| {
            small
                .digits(a)
                .iter()
                .rev()
                .fold(0, |acc, &c| big.add(big.mul(acc, root), c))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Tower {
    prime: Field,
    base: Field,
    top: Field,
    m: usize,
    embed_root: Elem,
    embed: Vec<Elem>,
    pi: Vec<Elem>,
    coord_inv: Matrix,
    coord_table: Option<Vec<Elem>>,
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.top == other.top
            && self.embed_root == other.embed_root
            && self.pi == other.pi
    }
}

impl Eq for Tower {}

impl Tower {
    /// Builds `F_{p^u} ⊆ F_{p^{um}}`. Omitted moduli default to the
    /// minimal-encoding irreducibles; an omitted basis defaults to powers of
    /// the top field's generator.
    pub fn make(
        p: u32,
        u: u32,
        m: u32,
        moduli: Option<(Vec<u32>, Vec<u32>)>,
        pi_basis: Option<Vec<Elem>>,
    ) -> Result<Self> {
        if u == 0 || m == 0 {
            return Err(Error::Field("tower degrees must be at least 1".into()));
        }
        let e = u
            .checked_mul(m)
            .ok_or_else(|| Error::Field("tower degree overflow".into()))?;
        let (bm, tm) = match moduli {
            Some((b, t)) => (Some(b), Some(t)),
            None => (None, None),
        };
        let base = Field::make(p, u, bm)?;
        let top = Field::make(p, e, tm)?;
        let root = min_root(&top, &base.spec().modulus)
            .ok_or_else(|| Error::Internal("no embedding of the base field found".into()))?;
        Self::assemble(base, top, root, pi_basis)
    }

    pub fn from_spec(spec: &TowerSpec) -> Result<Self> {
        let base = Field::new(spec.base.clone())?;
        let top = Field::new(spec.top.clone())?;
        if base.p() != top.p() || top.e() % base.e() != 0 {
            return Err(Error::Field("base field is not a subfield of the top field".into()));
        }
        if spec.embed_root >= top.order() {
            return Err(Error::Field("embedding root out of range".into()));
        }
        let check = base
            .spec()
            .modulus
            .iter()
            .rev()
            .fold(0, |acc, &c| top.add(top.mul(acc, spec.embed_root), c));
        if check != 0 {
            return Err(Error::Field(
                "embed_root is not a root of the base modulus".into(),
            ));
        }
        Self::assemble(base, top, spec.embed_root, Some(spec.pi_basis.clone()))
    }

    fn assemble(base: Field, top: Field, root: Elem, pi: Option<Vec<Elem>>) -> Result<Self> {
        let p = base.p();
        let u = base.e() as usize;
        let m = (top.e() / base.e()) as usize;
        let prime = Field::make(p, 1, None)?;
        let embed = embedding_table(&base, &top, root);
        let basis_matrix = |pi: &[Elem]| -> Matrix {
            pi.iter()
                .flat_map(|&g| {
                    (0..u).map(|j| top.digits(top.mul(embed[(p as usize).pow(j as u32)], g)))
                        .collect::<Vec<_>>()
                })
                .collect()
        };
        let pi = match pi {
            Some(pi) => {
                if pi.len() != m || pi.iter().any(|&g| g >= top.order()) {
                    return Err(Error::Field(format!("basis must have {m} elements of the top field")));
                }
                pi
            }
            None => {
                let beta = top.generator();
                let powers: Vec<Elem> = (0..m as u64).map(|i| top.pow(beta, i)).collect();
                if linalg::rank(&prime, &basis_matrix(&powers)) == u * m {
                    powers
                } else {
                    let mut chosen: Vec<Elem> = Vec::new();
                    for g in top.elements().skip(1) {
                        let mut trial = chosen.clone();
                        trial.push(g);
                        if linalg::rank(&prime, &basis_matrix(&trial)) == u * trial.len() {
                            chosen = trial;
                            if chosen.len() == m {
                                break;
                            }
                        }
                    }
                    chosen
                }
            }
        };
        let coord_inv = linalg::inverse(&prime, &basis_matrix(&pi))
            .map_err(|_| Error::Field("basis is not independent over the base field".into()))?;
        let mut tower = Tower {
            prime,
            base,
            top,
            m,
            embed_root: root,
            embed,
            pi,
            coord_inv,
            coord_table: None,
        };
        if (tower.top.order() as u64) <= COORD_TABLE_LIMIT {
            let mut table = Vec::with_capacity(tower.top.order() as usize * m);
            for y in tower.top.elements() {
                table.extend(tower.coords_slow(y));
            }
            tower.coord_table = Some(table);
        }
        Ok(tower)
    }

    pub fn spec(&self) -> TowerSpec {
        TowerSpec {
            base: self.base.spec().clone(),
            top: self.top.spec().clone(),
            embed_root: self.embed_root,
            pi_basis: self.pi.clone(),
        }
    }

    /// Same tower with a different basis of the top field.
    pub fn with_basis(&self, pi: Vec<Elem>) -> Result<Self> {
        Self::assemble(self.base.clone(), self.top.clone(), self.embed_root, Some(pi))
    }

    pub fn prime(&self) -> &Field {
        &self.prime
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn q(&self) -> u32 {
        self.base.order()
    }

    /// Degree of the top field over the base field.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn embed_root(&self) -> Elem {
        self.embed_root
    }

    pub fn pi(&self) -> &[Elem] {
        &self.pi
    }

    #[inline]
    pub fn embed(&self, a: Elem) -> Elem {
        self.embed[a as usize]
    }

    /// Preimage of `y` under the embedding, if `y` lies in the base field.
    pub fn restrict(&self, y: Elem) -> Option<Elem> {
        self.base.elements().find(|&a| self.embed(a) == y)
    }

    /// `F_q`-coordinates of `y` with respect to the basis Π.
    pub fn coords(&self, y: Elem) -> Vec<Elem> {
        match &self.coord_table {
            Some(t) => t[y as usize * self.m..(y as usize + 1) * self.m].to_vec(),
            None => self.coords_slow(y),
        }
    }

    /// Coordinate `i` of `y`.
    #[inline]
    pub fn coord(&self, y: Elem, i: usize) -> Elem {
        match &self.coord_table {
            Some(t) => t[y as usize * self.m + i],
            None => self.coords_slow(y)[i],
        }
    }

    fn coords_slow(&self, y: Elem) -> Vec<Elem> {
        let u = self.base.e() as usize;
        let c = linalg::vec_mat(&self.prime, &self.top.digits(y), &self.coord_inv, u * self.m);
        c.chunks(u).map(|ch| self.base.from_digits(ch)).collect()
    }

    pub fn from_coords(&self, c: &[Elem]) -> Elem {
        c.iter()
            .zip(&self.pi)
            .fold(0, |acc, (&a, &g)| self.top.add(acc, self.top.mul(self.embed(a), g)))
    }

    /// Scalar action of the base field on the top field.
    #[inline]
    pub fn scale(&self, a: Elem, y: Elem) -> Elem {
        self.top.mul(self.embed(a), y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_in_f16_default_basis() {
        let t = Tower::make(2, 1, 4, None, None).unwrap();
        assert_eq!(t.pi(), &[1, 2, 4, 8]);
        for y in t.top().elements() {
            assert_eq!(t.from_coords(&t.coords(y)), y);
        }
    }

    #[test]
    fn trivial_tower() {
        let t = Tower::make(2, 1, 1, None, None).unwrap();
        assert_eq!(t.embed(0), 0);
        assert_eq!(t.embed(1), 1);
        assert_eq!(t.m(), 1);
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        for (p, u, m) in [(2, 2, 5), (2, 2, 2), (3, 2, 2), (2, 3, 2), (2, 4, 2)] {
            let t = Tower::make(p, u, m, None, None).unwrap();
            let (b, top) = (t.base(), t.top());
            assert_eq!(t.embed(1), 1);
            for x in b.elements() {
                for y in b.elements() {
                    assert_eq!(t.embed(b.mul(x, y)), top.mul(t.embed(x), t.embed(y)));
                    assert_eq!(t.embed(b.add(x, y)), top.add(t.embed(x), t.embed(y)));
                }
            }
        }
    }

    #[test]
    fn coordinates_are_base_linear() {
        let t = Tower::make(2, 2, 5, None, None).unwrap();
        assert_eq!(t.top().order(), 1024);
        for y in (0..1024).step_by(7) {
            let c = t.coords(y);
            assert_eq!(t.from_coords(&c), y);
            let a = 2;
            let scaled: Vec<Elem> = c.iter().map(|&x| t.base().mul(a, x)).collect();
            assert_eq!(t.coords(t.scale(a, y)), scaled);
        }
        assert_eq!(t.restrict(t.embed(3)), Some(3));
        assert_eq!(t.restrict(t.top().generator()), None);
    }

    #[test]
    fn dependent_basis_rejected() {
        assert!(Tower::make(2, 1, 2, None, Some(vec![1, 1])).is_err());
        let t = Tower::make(2, 1, 2, None, Some(vec![2, 3])).unwrap();
        assert!(Tower::from_spec(&t.spec()).unwrap() == t);
    }
}
