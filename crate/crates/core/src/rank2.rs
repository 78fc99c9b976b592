//! Spherical (square -2) and isotropic (square 0) classes in rank-2 integer
//! lattices: sign classification, exhaustive box enumeration, and the
//! reflection recurrences generating the two branches of spherical classes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::mukai::MukaiVector;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Rank2Error {
    #[error("Gram matrix must be 2x2 symmetric with even diagonal")]
    BadGram,
    #[error("signature not realizable in a Mukai lattice (positive directions present)")]
    InvalidSignature,
    #[error("spherical pair must satisfy (s,t) >= 2, got {0}")]
    PairingTooSmall(BigInt),
    #[error("embedded basis is linearly dependent")]
    DependentBasis,
    #[error("vector does not lie in the span of the embedded basis")]
    NotInSpan,
}

/// Sign classification of a rank-2 lattice that can occur inside a Mukai
/// lattice of signature (2, rho).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank2Class {
    Hyperbolic,
    NegativeSemiDefinite,
    NegativeDefinite,
}

/// 2x2 symmetric even Gram matrix, optionally remembering an embedding into
/// an ambient Mukai lattice through a pair of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank2Lattice {
    gram: [[BigInt; 2]; 2],
    pub basis_vectors: Option<(MukaiVector, MukaiVector)>,
}

impl Rank2Lattice {
    pub fn new(gram: [[BigInt; 2]; 2]) -> Result<Self, Rank2Error> {
        if gram[0][1] != gram[1][0] || gram[0][0].is_odd() || gram[1][1].is_odd() {
            return Err(Rank2Error::BadGram);
        }
        Ok(Rank2Lattice {
            gram,
            basis_vectors: None,
        })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Self {
        Rank2Lattice::new([
            [BigInt::from(a), BigInt::from(b)],
            [BigInt::from(b), BigInt::from(c)],
        ])
        .expect("even symmetric gram")
    }

    /// The Gram `[[-2, m], [m, -2]]` of two spherical classes with pairing m.
    pub fn spherical_pair(m: i64) -> Self {
        Rank2Lattice::from_i64(-2, m, -2)
    }

    pub fn gram(&self) -> &[[BigInt; 2]; 2] {
        &self.gram
    }

    pub fn pair(&self, v: &(BigInt, BigInt), w: &(BigInt, BigInt)) -> BigInt {
        &v.0 * &self.gram[0][0] * &w.0
            + &v.0 * &self.gram[0][1] * &w.1
            + &v.1 * &self.gram[1][0] * &w.0
            + &v.1 * &self.gram[1][1] * &w.1
    }

    pub fn square(&self, v: &(BigInt, BigInt)) -> BigInt {
        self.pair(v, v)
    }

    pub fn det(&self) -> BigInt {
        &self.gram[0][0] * &self.gram[1][1] - &self.gram[0][1] * &self.gram[1][0]
    }

    /// Reflection `rho_a(b) = b + (a,b) a` inside this lattice; the caller
    /// is responsible for `a` being spherical.
    fn reflect(&self, a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> (BigInt, BigInt) {
        let c = self.pair(a, b);
        (&b.0 + &c * &a.0, &b.1 + &c * &a.1)
    }
}

/// Determinant and diagonal inspection. Positive-definite or mixed shapes
/// cannot embed in a lattice of signature (2, rho) alongside a positive
/// 2-plane, and are reported as invalid.
pub fn classify_rank2(lat: &Rank2Lattice) -> Result<Rank2Class, Rank2Error> {
    let det = lat.det();
    let a = &lat.gram()[0][0];
    let c = &lat.gram()[1][1];
    if det.is_negative() {
        Ok(Rank2Class::Hyperbolic)
    } else if det.is_zero() {
        if !a.is_positive() && !c.is_positive() {
            Ok(Rank2Class::NegativeSemiDefinite)
        } else {
            Err(Rank2Error::InvalidSignature)
        }
    } else if a.is_negative() {
        Ok(Rank2Class::NegativeDefinite)
    } else {
        Err(Rank2Error::InvalidSignature)
    }
}

/// All nonzero `(x, y)` with `|x|, |y| <= bound` and `q(x, y) = target`,
/// by exhaustive scan. Output lists each +/- pair with the positive
/// representative first, pairs ordered lexicographically.
pub fn enumerate_square_classes(
    lat: &Rank2Lattice,
    target: &BigInt,
    bound: u64,
) -> Vec<(BigInt, BigInt)> {
    let mut reps: Vec<(BigInt, BigInt)> = Vec::new();
    let use_small = bound <= 1_000_000
        && lat.gram().iter().flatten().all(|g| g.abs() <= BigInt::from(1_000_000u64))
        && target.abs() <= BigInt::from(i64::MAX);
    if use_small {
        // products stay below 4 * 10^6 * bound^2 <= 4*10^18 < i128::MAX
        let a = i128::try_from(&lat.gram()[0][0]).unwrap();
        let b = i128::try_from(&lat.gram()[0][1]).unwrap();
        let c = i128::try_from(&lat.gram()[1][1]).unwrap();
        let t = i128::try_from(target).unwrap();
        let bnd = bound as i128;
        for x in -bnd..=bnd {
            for y in -bnd..=bnd {
                if x == 0 && y == 0 {
                    continue;
                }
                if a * x * x + 2 * b * x * y + c * y * y == t
                    && is_positive_rep(&BigInt::from(x), &BigInt::from(y))
                {
                    reps.push((BigInt::from(x), BigInt::from(y)));
                }
            }
        }
    } else {
        let bnd = BigInt::from(bound);
        let mut x = -bnd.clone();
        while x <= bnd {
            let mut y = -bnd.clone();
            while y <= bnd {
                if !(x.is_zero() && y.is_zero())
                    && lat.square(&(x.clone(), y.clone())) == *target
                    && is_positive_rep(&x, &y)
                {
                    reps.push((x.clone(), y.clone()));
                }
                y += 1;
            }
            x += 1;
        }
    }
    reps.sort();
    let mut out = Vec::with_capacity(reps.len() * 2);
    for (x, y) in reps {
        let neg = (-&x, -&y);
        out.push((x, y));
        out.push(neg);
    }
    out
}

fn is_positive_rep(x: &BigInt, y: &BigInt) -> bool {
    x.is_positive() || (x.is_zero() && y.is_positive())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Upper,
    Lower,
}

/// Coordinates of square -2 classes along one branch, in recurrence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSequence {
    pub entries: Vec<(BigInt, BigInt)>,
    pub branch: Branch,
}

/// First `count` terms of the two branches of spherical classes in the
/// lattice spanned by spherical `s = (1,0)` and `t = (0,1)` with `(s,t) = m`:
/// upper starts `t, rho_t(s), ...` with `t_{i+1} = -rho_{t_i}(t_{i-1})`,
/// lower starts `s, rho_s(t), ...` with `s_{-i-1} = -rho_{s_{-i}}(s_{-i+1})`.
///
/// The terms are ordered by recurrence index; phase ordering is a property
/// of a stability condition and lives in the stability layer.
pub fn spherical_sequences(
    lat: &Rank2Lattice,
    count: usize,
) -> Result<(ClassSequence, ClassSequence), Rank2Error> {
    let s = (BigInt::one(), BigInt::zero());
    let t = (BigInt::zero(), BigInt::one());
    if lat.square(&s) != BigInt::from(-2) || lat.square(&t) != BigInt::from(-2) {
        return Err(Rank2Error::BadGram);
    }
    let m = lat.pair(&s, &t);
    if m < BigInt::from(2) {
        return Err(Rank2Error::PairingTooSmall(m));
    }
    let upper = branch_terms(lat, &t, &s, count, Branch::Upper);
    let lower = branch_terms(lat, &s, &t, count, Branch::Lower);
    Ok((upper, lower))
}

fn branch_terms(
    lat: &Rank2Lattice,
    first: &(BigInt, BigInt),
    other: &(BigInt, BigInt),
    count: usize,
    branch: Branch,
) -> ClassSequence {
    let mut entries: Vec<(BigInt, BigInt)> = Vec::with_capacity(count);
    if count >= 1 {
        entries.push(first.clone());
    }
    if count >= 2 {
        entries.push(lat.reflect(first, other));
    }
    while entries.len() < count {
        let n = entries.len();
        let refl = lat.reflect(&entries[n - 1], &entries[n - 2]);
        entries.push((-refl.0, -refl.1));
    }
    ClassSequence { entries, branch }
}

/// Cone coordinates of an integer pair in the standard basis: the pair
/// itself together with strict-positivity flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeCoords {
    pub x: BigRational,
    pub y: BigRational,
    pub cone_positive: bool,
}

pub fn cone_coordinates(v: &(BigInt, BigInt)) -> ConeCoords {
    let x = BigRational::from(v.0.clone());
    let y = BigRational::from(v.1.clone());
    let cone_positive = x.is_positive() && y.is_positive();
    ConeCoords { x, y, cone_positive }
}

/// Solves `v = x b1 + y b2` over the rationals for an embedded basis of
/// ambient Mukai vectors. Errors when the basis is dependent or the system
/// is inconsistent.
pub fn embedded_cone_coordinates(
    v: &MukaiVector,
    basis: (&MukaiVector, &MukaiVector),
) -> Result<ConeCoords, Rank2Error> {
    let b1 = basis.0.coords();
    let b2 = basis.1.coords();
    let target = v.coords();
    // find two coordinate rows making the 2x2 system invertible
    let n = target.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let det = &b1[i] * &b2[j] - &b1[j] * &b2[i];
            if det.is_zero() {
                continue;
            }
            let det = BigRational::from(det);
            let x = BigRational::from(&target[i] * &b2[j] - &target[j] * &b2[i]) / det.clone();
            let y = BigRational::from(&b1[i] * &target[j] - &b1[j] * &target[i]) / det;
            // verify on all coordinates
            for k in 0..n {
                let lhs = BigRational::from(target[k].clone());
                let rhs = &x * BigRational::from(b1[k].clone())
                    + &y * BigRational::from(b2[k].clone());
                if lhs != rhs {
                    return Err(Rank2Error::NotInSpan);
                }
            }
            let cone_positive = x.is_positive() && y.is_positive();
            return Ok(ConeCoords { x, y, cone_positive });
        }
    }
    Err(Rank2Error::DependentBasis)
}
