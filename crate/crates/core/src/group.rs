//! Group universes with exact element arithmetic, plus finite enumeration
//! helpers.

use std::collections::{HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{parse_rational, QI};

pub trait GroupUniverse: Send + Sync {
    type Element: Clone + Eq + Hash + Debug + Send + Sync;

    fn identity(&self) -> Self::Element;
    fn mul(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;
    fn inv(&self, a: &Self::Element) -> Self::Element;

    fn conj(&self, g: &Self::Element, x: &Self::Element) -> Self::Element {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    fn commutator(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        self.mul(&self.mul(a, b), &self.mul(&self.inv(a), &self.inv(b)))
    }
}

/// Closure of `generators` under multiplication; errors once more than `cap`
/// elements have been found.
pub fn closure<U: GroupUniverse>(u: &U, generators: &[U::Element], cap: usize) -> Result<Vec<U::Element>> {
    let id = u.identity();
    let mut seen: HashSet<U::Element> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = u.mul(g, &x);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(Error::Unsupported(format!("group has more than {cap} elements")));
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// `[G, G]` is all of `G`, decided by enumeration.
pub fn is_perfect<U: GroupUniverse>(u: &U, elements: &[U::Element]) -> Result<bool> {
    let mut comms: HashSet<U::Element> = HashSet::new();
    for a in elements {
        for b in elements {
            comms.insert(u.commutator(a, b));
        }
    }
    let gens: Vec<_> = comms.into_iter().collect();
    Ok(closure(u, &gens, elements.len())?.len() == elements.len())
}

/// Invertible square matrices over `Q(i)` of a fixed size.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub dim: usize,
}

impl GroupUniverse for MatrixGroup {
    type Element = Matrix;
    fn identity(&self) -> Matrix {
        Matrix::identity(self.dim)
    }
    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.mul(b)
    }
    fn inv(&self, a: &Matrix) -> Matrix {
        a.inverse().expect("group elements are invertible")
    }
}

/// Permutations of `{0, .., degree-1}`; `(p*q)(i) = p(q(i))`.
#[derive(Clone, Debug)]
pub struct Permutations {
    pub degree: usize,
}

pub type Perm = Vec<u8>;

impl Permutations {
    pub fn from_cycles(&self, cycles: &[&[u8]]) -> Perm {
        let mut p: Perm = (0..self.degree as u8).collect();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                p[x as usize] = c[(i + 1) % c.len()];
            }
        }
        p
    }

    pub fn matrix(p: &Perm) -> Matrix {
        Matrix::permutation(&p.iter().map(|&x| x as usize).collect::<Vec<_>>())
    }

    pub fn is_even(p: &Perm) -> bool {
        let mut seen = vec![false; p.len()];
        let mut transpositions = 0;
        for s in 0..p.len() {
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = p[i] as usize;
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }
}

impl GroupUniverse for Permutations {
    type Element = Perm;
    fn identity(&self) -> Perm {
        (0..self.degree as u8).collect()
    }
    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        b.iter().map(|&i| a[i as usize]).collect()
    }
    fn inv(&self, a: &Perm) -> Perm {
        let mut out = vec![0u8; a.len()];
        for (i, &j) in a.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        out
    }
}

/// `GL_2(Q)` with exact rational entries.
#[derive(Clone, Debug, Default)]
pub struct Gl2Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gl2 {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub d: BigRational,
}

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Gl2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Gl2 { a: ri(a), b: ri(b), c: ri(c), d: ri(d) }
    }

    pub fn from_rationals(e: [BigRational; 4]) -> Result<Self> {
        let [a, b, c, d] = e;
        let g = Gl2 { a, b, c, d };
        if g.det().is_zero() {
            return Err(Error::input("matrix is singular"));
        }
        Ok(g)
    }

    /// Parses `[[a,b],[c,d]]` with exact rational entries (numbers or strings).
    pub fn parse(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix {s:?}: {e}")))?;
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(|| Error::Parse(format!("expected 2x2 matrix: {s}")))?;
        let mut out = Vec::with_capacity(4);
        for r in rows {
            let r = r.as_array().filter(|r| r.len() == 2).ok_or_else(|| Error::Parse(format!("expected 2x2 matrix: {s}")))?;
            for x in r {
                let text = match x {
                    serde_json::Value::String(t) => t.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    _ => return Err(Error::Parse(format!("bad matrix entry {x}"))),
                };
                out.push(parse_rational(&text)?);
            }
        }
        let [a, b, c, d]: [BigRational; 4] = out.try_into().expect("four entries");
        Gl2::from_rationals([a, b, c, d])
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_integral(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|x| x.is_integer())
    }

    pub fn in_sl2z(&self) -> bool {
        self.is_integral() && self.det().is_one()
    }

    /// `self ≡ I (mod n)` entrywise, for integral matrices.
    pub fn congruent_identity(&self, n: u64) -> bool {
        if !self.is_integral() {
            return false;
        }
        let n = BigInt::from(n);
        let one = BigInt::one();
        let m = |x: &BigRational, t: &BigInt| (x.to_integer() - t).mod_floor(&n).is_zero();
        m(&self.a, &one) && m(&self.b, &BigInt::zero()) && m(&self.c, &BigInt::zero()) && m(&self.d, &one)
    }

    pub fn to_qi_matrix(&self) -> Matrix {
        Matrix::from_rows(vec![
            vec![QI::real(self.a.clone()), QI::real(self.b.clone())],
            vec![QI::real(self.c.clone()), QI::real(self.d.clone())],
        ])
        .expect("2x2")
    }
}

impl GroupUniverse for Gl2Rational {
    type Element = Gl2;
    fn identity(&self) -> Gl2 {
        Gl2::new(1, 0, 0, 1)
    }
    fn mul(&self, x: &Gl2, y: &Gl2) -> Gl2 {
        Gl2 {
            a: &x.a * &y.a + &x.b * &y.c,
            b: &x.a * &y.b + &x.b * &y.d,
            c: &x.c * &y.a + &x.d * &y.c,
            d: &x.c * &y.b + &x.d * &y.d,
        }
    }
    fn inv(&self, x: &Gl2) -> Gl2 {
        let det = x.det();
        Gl2 { a: &x.d / &det, b: -(&x.b / &det), c: -(&x.c / &det), d: &x.a / &det }
    }
}

/// The affine group `Q ⋊ Q^×` with `(x, y)(x', y') = (x + y x', y y')`.
#[derive(Clone, Debug, Default)]
pub struct AffineRational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Affine {
    pub x: BigRational,
    pub y: BigRational,
}

impl Affine {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        assert!(!y.is_zero(), "affine scale must be nonzero");
        Affine { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Affine::new(ri(x), ri(y))
    }
}

impl GroupUniverse for AffineRational {
    type Element = Affine;
    fn identity(&self) -> Affine {
        Affine::ints(0, 1)
    }
    fn mul(&self, a: &Affine, b: &Affine) -> Affine {
        Affine { x: &a.x + &a.y * &b.x, y: &a.y * &b.y }
    }
    fn inv(&self, a: &Affine) -> Affine {
        let yi = a.y.recip();
        Affine { x: -(&a.x * &yi), y: yi }
    }
}

/// p-adic valuation of a nonzero rational; `None` for zero (valuation +inf).
pub fn padic_valuation(r: &BigRational, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut k = 0;
        loop {
            let (q, rem) = n.div_rem(&p);
            if !rem.is_zero() {
                return k;
            }
            n = q;
            k += 1;
        }
    };
    Some(count(r.numer()) - count(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_orders() {
        let s4 = Permutations { degree: 4 };
        let gens = vec![s4.from_cycles(&[&[0, 1]]), s4.from_cycles(&[&[0, 1, 2, 3]])];
        let els = closure(&s4, &gens, 1000).unwrap();
        assert_eq!(els.len(), 24);
        assert!(!is_perfect(&s4, &els).unwrap());
        let s5 = Permutations { degree: 5 };
        let a5 = closure(&s5, &[s5.from_cycles(&[&[0, 1, 2]]), s5.from_cycles(&[&[0, 1, 2, 3, 4]])], 1000).unwrap();
        assert_eq!(a5.len(), 60);
        assert!(is_perfect(&s5, &a5).unwrap());
    }

    #[test]
    fn gl2_inverse_and_congruence() {
        let u = Gl2Rational;
        let g = Gl2::new(2, 1, 1, 1);
        assert_eq!(u.mul(&g, &u.inv(&g)), u.identity());
        assert!(Gl2::new(3, 2, 4, 3).congruent_identity(2));
        assert!(!Gl2::new(1, 1, 0, 1).congruent_identity(2));
        assert_eq!(Gl2::parse("[[1,0],[0,\"1/2\"]]").unwrap().d, BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn affine_law_and_valuation() {
        let u = AffineRational;
        let a = Affine::ints(3, 2);
        assert_eq!(u.mul(&a, &u.inv(&a)), u.identity());
        assert_eq!(padic_valuation(&BigRational::new(12.into(), 5.into()), 2), Some(2));
        assert_eq!(padic_valuation(&BigRational::new(12.into(), 5.into()), 5), Some(-1));
        assert_eq!(padic_valuation(&BigRational::zero(), 3), None);
    }
}
