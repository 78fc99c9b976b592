//! The rank-2 lattice attached to a wall — the integral kernel of
//! `w -> Im(Z(w) conj(Z(v)))` — and the numerical classification of
//! wall-crossing behavior for spherical and isotropic vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::gcd_all;
use crate::mukai::{identity, MukaiVector, NSLattice};
use crate::rank2::{classify_rank2, enumerate_square_classes, Rank2Class, Rank2Lattice};
use crate::check::NamedCheck;
use crate::stability::{central_charge, StabParam, StabilityError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WallcrossError {
    #[error("central charge of the reference vector vanishes; not a stability parameter for it")]
    DegenerateCharge,
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error("vector is not contained in the wall lattice")]
    NotInLattice,
    #[error("classification requires square -2 or 0, got {0}")]
    BadSquare(BigInt),
    #[error("no spherical class found within enumeration bound {0}")]
    Unresolved(u64),
    #[error("wall kind is not the hyperbolic isotropic case")]
    NotIsotropicHyperbolic,
    #[error("rank-2 signature invalid for a Mukai sublattice")]
    InvalidSignature,
}

/// Rank-2 primitive sublattice attached to a wall, with an optional pair of
/// ambient basis vectors when it was computed from a stability parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallLattice {
    pub basis: Option<(MukaiVector, MukaiVector)>,
    pub rank2: Rank2Lattice,
    pub class: Rank2Class,
}

impl WallLattice {
    pub fn from_gram(gram: [[BigInt; 2]; 2]) -> Result<Self, WallcrossError> {
        let rank2 = Rank2Lattice::new(gram).map_err(|_| WallcrossError::InvalidSignature)?;
        let class = classify_rank2(&rank2).map_err(|_| WallcrossError::InvalidSignature)?;
        Ok(WallLattice {
            basis: None,
            rank2,
            class,
        })
    }

    pub fn from_gram_i64(a: i64, b: i64, c: i64) -> Result<Self, WallcrossError> {
        WallLattice::from_gram([
            [BigInt::from(a), BigInt::from(b)],
            [BigInt::from(b), BigInt::from(c)],
        ])
    }
}

/// Computes the integral kernel of the rational linear form
/// `w -> Im(Z(w) conj(Z(v)))` on `(r, c, s)`-space and returns it as a
/// primitive rank-2 sublattice together with the coordinates of `v` in the
/// returned basis.
pub fn wall_lattice_basis(
    p: &StabParam,
    lat: &NSLattice,
    v: &MukaiVector,
) -> Result<(WallLattice, (BigInt, BigInt)), WallcrossError> {
    let zv = central_charge(p, lat, v)?;
    if zv.is_zero() {
        return Err(WallcrossError::DegenerateCharge);
    }
    // Z(w) = A.w + i B.w with rational coefficient rows A, B on (r, c, s);
    // the form is (B.w) Re Z(v) - (A.w) Im Z(v).
    let d = BigRational::from(p.d.clone());
    let two = BigRational::from(BigInt::from(2));
    let a_row = [
        &d * (&p.alpha * &p.alpha - &p.beta * &p.beta),
        &two * &d * &p.beta,
        -BigRational::one(),
    ];
    let b_row = [
        -(&two * &d * &p.alpha * &p.beta),
        &two * &d * &p.alpha,
        BigRational::zero(),
    ];
    let mut form: Vec<BigRational> = (0..3)
        .map(|i| &b_row[i] * &zv.re - &a_row[i] * &zv.im)
        .collect();
    // clear denominators and divide out the content
    let denom_lcm = form
        .iter()
        .fold(BigInt::one(), |acc, f| num_integer::lcm(acc, f.denom().clone()));
    let mut int_form: Vec<BigInt> = form
        .drain(..)
        .map(|f| (f * BigRational::from(denom_lcm.clone())).to_integer())
        .collect();
    let content = gcd_all(int_form.iter());
    if content.is_zero() {
        return Err(WallcrossError::DegenerateCharge);
    }
    for x in &mut int_form {
        *x = &*x / &content;
    }

    let (b1, b2) = saturated_kernel_basis(&int_form);
    let b1 = MukaiVector::from_coords(&b1);
    let b2 = MukaiVector::from_coords(&b2);
    let coords = express_in_basis(v, &b1, &b2).ok_or(WallcrossError::NotInLattice)?;

    let gram = [
        [
            lat.mukai_pairing(&b1, &b1).map_err(StabilityError::from)?,
            lat.mukai_pairing(&b1, &b2).map_err(StabilityError::from)?,
        ],
        [
            lat.mukai_pairing(&b2, &b1).map_err(StabilityError::from)?,
            lat.mukai_pairing(&b2, &b2).map_err(StabilityError::from)?,
        ],
    ];
    let rank2 = Rank2Lattice::new(gram).map_err(|_| WallcrossError::InvalidSignature)?;
    let class = classify_rank2(&rank2).map_err(|_| WallcrossError::InvalidSignature)?;
    Ok((
        WallLattice {
            basis: Some((b1, b2)),
            rank2,
            class,
        },
        coords,
    ))
}

/// Basis of the saturated kernel of a primitive integer form on Z^3, via
/// the Smith normal form of the 1x3 matrix: the kernel is spanned by the
/// images of the last two standard basis vectors under the column
/// transform.
fn saturated_kernel_basis(form: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, _, q) = smith_normal_form(&[form.to_vec()]);
    let b1: Vec<BigInt> = (0..3).map(|i| q[i][1].clone()).collect();
    let b2: Vec<BigInt> = (0..3).map(|i| q[i][2].clone()).collect();
    debug_assert!(form
        .iter()
        .zip(&b1)
        .fold(BigInt::zero(), |acc, (f, x)| acc + f * x)
        .is_zero());
    debug_assert!(form
        .iter()
        .zip(&b2)
        .fold(BigInt::zero(), |acc, (f, x)| acc + f * x)
        .is_zero());
    (b1, b2)
}

/// Integer coordinates of `v` in the basis `(b1, b2)`, when they exist.
pub fn express_in_basis(
    v: &MukaiVector,
    b1: &MukaiVector,
    b2: &MukaiVector,
) -> Option<(BigInt, BigInt)> {
    let coords = crate::rank2::embedded_cone_coordinates(v, (b1, b2)).ok()?;
    if coords.x.is_integer() && coords.y.is_integer() {
        Some((coords.x.to_integer(), coords.y.to_integer()))
    } else {
        None
    }
}

/// Smith normal form `P A Q = D` with unimodular `P`, `Q`. Matrices here
/// are tiny (at most 3x4), so the textbook pivoting algorithm is fine.
pub fn smith_normal_form(
    a: &[Vec<BigInt>],
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = a.len();
    let cols = a[0].len();
    let mut d: Vec<Vec<BigInt>> = a.to_vec();
    let mut p = identity(rows);
    let mut q = identity(cols);

    let mut t = 0usize;
    while t < rows.min(cols) {
        // find a nonzero pivot with minimal absolute value
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        p.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in q.iter_mut() {
            row.swap(t, pj);
        }
        if d[t][t].is_negative() {
            for j in 0..cols {
                d[t][j] = -&d[t][j];
            }
            for j in 0..rows {
                p[t][j] = -&p[t][j];
            }
        }
        let mut clean = true;
        for i in (t + 1)..rows {
            if d[i][t].is_zero() {
                continue;
            }
            let qt = &d[i][t] / &d[t][t];
            if !qt.is_zero() {
                for j in 0..cols {
                    let sub = &qt * &d[t][j];
                    d[i][j] -= sub;
                }
                for j in 0..rows {
                    let sub = &qt * &p[t][j];
                    p[i][j] -= sub;
                }
            }
            if !d[i][t].is_zero() {
                clean = false;
            }
        }
        for j in (t + 1)..cols {
            if d[t][j].is_zero() {
                continue;
            }
            let qt = &d[t][j] / &d[t][t];
            if !qt.is_zero() {
                for i in 0..rows {
                    let sub = &qt * &d[i][t];
                    d[i][j] -= sub;
                }
                for i in 0..cols {
                    let sub = &qt * &q[i][t];
                    q[i][j] -= sub;
                }
            }
            if !d[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue; // remainders left; repeat with smaller pivot
        }
        // divisibility condition on the trailing block
        let mut fixed = false;
        'outer: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if !(&d[i][j] % &d[t][t]).is_zero() {
                    // fold row i into row t and restart this pivot
                    for jj in 0..cols {
                        let add = d[i][jj].clone();
                        d[t][jj] += add;
                    }
                    for jj in 0..rows {
                        let add = p[i][jj].clone();
                        p[t][jj] += add;
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if !fixed {
            t += 1;
        }
    }
    (p, d, q)
}

/// Index of the row span of `rows` inside its saturation: the product of
/// the elementary divisors. Equals 1 exactly when the span is primitive.
pub fn saturation_index(rows: &[Vec<BigInt>]) -> BigInt {
    let (_, d, _) = smith_normal_form(rows);
    let mut idx = BigInt::one();
    for (i, row) in d.iter().enumerate() {
        if i < row.len() && !row[i].is_zero() {
            idx *= row[i].abs();
        }
    }
    idx
}

/// Numerical wall-crossing type of a vector inside its wall lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallKind {
    /// Spherical vector: two spherical classes span, `m = (s, t) >= 2`.
    SphericalPair {
        s: (BigInt, BigInt),
        t: (BigInt, BigInt),
        m: BigInt,
    },
    /// Isotropic vector in a semi-definite lattice: `v = s + t`, `(s,t) = 2`.
    IsotropicSemiDefinite {
        s: (BigInt, BigInt),
        t: (BigInt, BigInt),
    },
    /// Isotropic vector in a hyperbolic lattice: unique spherical class up
    /// to sign, `a = -(s, v) > 0`, `w = v - a s` isotropic with `(s,w) = a`.
    IsotropicHyperbolic {
        s: (BigInt, BigInt),
        a: BigInt,
        w: (BigInt, BigInt),
    },
    /// The vertical wall: positive square with the point class in the lattice.
    HilbertChow,
    /// Positive square, no further classification at this layer.
    Unclassified { square: BigInt },
}

/// Classifies the wall kind of `v` (given in lattice coordinates) in `h`.
/// Spherical and isotropic vectors are resolved through class enumeration
/// within `bound`; positive-square vectors are only tagged.
pub fn classify_wall_kind(
    h: &WallLattice,
    v: &(BigInt, BigInt),
    bound: u64,
) -> Result<WallKind, WallcrossError> {
    let sq = h.rank2.square(v);
    if sq.is_positive() {
        if let Some((b1, b2)) = &h.basis {
            let point = MukaiVector::new(
                BigInt::zero(),
                vec![BigInt::zero(); b1.delta.len()],
                BigInt::one(),
            );
            if express_in_basis(&point, b1, b2).is_some() {
                return Ok(WallKind::HilbertChow);
            }
        }
        return Ok(WallKind::Unclassified { square: sq });
    }
    if sq == BigInt::from(-2) {
        return spherical_pair(h, v, bound);
    }
    if !sq.is_zero() {
        return Err(WallcrossError::BadSquare(sq));
    }
    match h.class {
        Rank2Class::NegativeSemiDefinite => {
            // v = s + t with (s, t) = 2
            let spherical = enumerate_square_classes(&h.rank2, &BigInt::from(-2), bound);
            for s in &spherical {
                let t = (&v.0 - &s.0, &v.1 - &s.1);
                if h.rank2.square(&t) == BigInt::from(-2)
                    && h.rank2.pair(s, &t) == BigInt::from(2)
                {
                    return Ok(WallKind::IsotropicSemiDefinite {
                        s: s.clone(),
                        t,
                    });
                }
            }
            Err(WallcrossError::Unresolved(bound))
        }
        Rank2Class::Hyperbolic => {
            let spherical = enumerate_square_classes(&h.rank2, &BigInt::from(-2), bound);
            let mut s = spherical
                .first()
                .cloned()
                .ok_or(WallcrossError::Unresolved(bound))?;
            // unique up to sign in the presence of an isotropic class
            debug_assert!(spherical.len() <= 2);
            let mut a = -h.rank2.pair(&s, v);
            if !a.is_positive() {
                s = (-&s.0, -&s.1);
                a = -a;
            }
            let w = (&v.0 - &a * &s.0, &v.1 - &a * &s.1);
            Ok(WallKind::IsotropicHyperbolic { s, a, w })
        }
        Rank2Class::NegativeDefinite => Err(WallcrossError::InvalidSignature),
    }
}

fn spherical_pair(
    h: &WallLattice,
    v: &(BigInt, BigInt),
    bound: u64,
) -> Result<WallKind, WallcrossError> {
    let spherical = enumerate_square_classes(&h.rank2, &BigInt::from(-2), bound);
    // seed pair: minimal pairing m >= 2 among pairs spanning v with
    // non-negative coefficients; strictly positive decompositions win ties
    type Key = (BigInt, bool, (BigInt, BigInt), (BigInt, BigInt));
    let mut best: Option<(Key, (BigInt, BigInt), (BigInt, BigInt), BigInt)> = None;
    for s in &spherical {
        for t in &spherical {
            if s == t {
                continue;
            }
            let m = h.rank2.pair(s, t);
            if m < BigInt::from(2) {
                continue;
            }
            // the pair must be a basis, not just independent: proper
            // sublattices inflate the pairing
            let det = &s.0 * &t.1 - &s.1 * &t.0;
            if !det.abs().is_one() {
                continue;
            }
            // v = x s + y t with x, y >= 0 integers
            let xn = &v.0 * &t.1 - &v.1 * &t.0;
            let yn = &s.0 * &v.1 - &s.1 * &v.0;
            if !(&xn % &det).is_zero() || !(&yn % &det).is_zero() {
                continue;
            }
            let x = xn / &det;
            let y = yn / &det;
            if x.is_negative() || y.is_negative() {
                continue;
            }
            let strict = x.is_positive() && y.is_positive();
            let key: Key = (m.clone(), !strict, s.clone(), t.clone());
            if best.as_ref().map(|(bk, ..)| &key < bk).unwrap_or(true) {
                best = Some((key, s.clone(), t.clone(), m));
            }
        }
    }
    match best {
        Some((_, s, t, m)) => Ok(WallKind::SphericalPair { s, t, m }),
        None => Err(WallcrossError::Unresolved(bound)),
    }
}

/// Verified numerical data of the hyperbolic isotropic case: the unique
/// spherical class (sign fixed by `a = -(s, v) > 0`), the multiplicity
/// `a`, and the isotropic complement `w = v - a s`. Such a wall is totally
/// semistable. Whether the spherical part sits as sub or quotient depends
/// on a chamber-side choice, so the filtration order is reported as
/// undetermined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JhReport {
    pub s: (BigInt, BigInt),
    pub a: BigInt,
    pub w: (BigInt, BigInt),
    pub checks: Vec<NamedCheck>,
    pub totally_semistable: bool,
    pub filtration_order_determined: bool,
}

pub fn isotropic_jh_data(
    h: &WallLattice,
    v: &(BigInt, BigInt),
    bound: u64,
) -> Result<JhReport, WallcrossError> {
    let kind = classify_wall_kind(h, v, bound)?;
    let WallKind::IsotropicHyperbolic { s, a, w } = kind else {
        return Err(WallcrossError::NotIsotropicHyperbolic);
    };
    let checks = vec![
        NamedCheck::new("a_equals_minus_pairing_s_v", a == -h.rank2.pair(&s, v)),
        NamedCheck::new("w_is_isotropic", h.rank2.square(&w).is_zero()),
        NamedCheck::new("pairing_s_w_equals_a", h.rank2.pair(&s, &w) == a),
        NamedCheck::new("a_positive", a.is_positive()),
    ];
    // failures here would contradict the defining algebra; surface loudly
    if checks.iter().any(|c| !c.ok) {
        return Err(WallcrossError::NotIsotropicHyperbolic);
    }
    Ok(JhReport {
        s,
        a,
        w,
        checks,
        totally_semistable: true,
        filtration_order_determined: false,
    })
}
