//! Central charges and slopes for the stability conditions sigma_{alpha,beta}
//! on a Picard-rank-one K3 surface, membership tests for the (beta, alpha)
//! domain, and the positivity predicates on complexified lattice vectors.
//!
//! Everything is exact rational arithmetic. Phase comparisons never go
//! through transcendental functions: the phase is 1/pi * arccot(slope), so
//! slope order (together with the quadrant of (re, im)) determines phase
//! order and is computed exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::mukai::{MukaiError, MukaiVector, NSLattice};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StabilityError {
    #[error("operation requires a rank-1 polarized lattice <2d>")]
    NotRankOne,
    #[error("alpha must be positive")]
    NonPositiveAlpha,
    #[error("d must be a positive integer")]
    BadDegree,
    #[error(transparent)]
    Lattice(#[from] MukaiError),
}

/// Exact rational parameters `(d, alpha, beta)` naming sigma_{alpha,beta}
/// on a surface with `H^2 = 2d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabParam {
    pub d: BigInt,
    pub alpha: BigRational,
    pub beta: BigRational,
}

impl StabParam {
    pub fn new(d: impl Into<BigInt>, alpha: BigRational, beta: BigRational) -> Result<Self, StabilityError> {
        let d = d.into();
        if !d.is_positive() {
            return Err(StabilityError::BadDegree);
        }
        if !alpha.is_positive() {
            return Err(StabilityError::NonPositiveAlpha);
        }
        Ok(StabParam { d, alpha, beta })
    }
}

/// Value of a central charge, as exact rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeValue {
    pub re: BigRational,
    pub im: BigRational,
}

impl ChargeValue {
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Quadrant index used for exact phase comparisons in the closed upper
    /// half plane: 0 on the positive real axis, 1 in the open upper half,
    /// 2 on the negative real axis, 3 below.
    pub fn quadrant(&self) -> u8 {
        if self.im.is_positive() {
            1
        } else if self.im.is_zero() {
            if self.re.is_positive() {
                0
            } else {
                2
            }
        } else {
            3
        }
    }
}

fn rat(i: &BigInt) -> BigRational {
    BigRational::from(i.clone())
}

fn rank1_data(lat: &NSLattice, v: &MukaiVector) -> Result<(BigInt, BigInt, BigInt, BigInt), StabilityError> {
    let d = lat.rank1_degree().ok_or(StabilityError::NotRankOne)?;
    if v.delta.len() != 1 {
        return Err(StabilityError::NotRankOne);
    }
    Ok((d, v.r.clone(), v.delta[0].clone(), v.s.clone()))
}

/// `Z_{alpha,beta}(r, cH, s) = dr(a^2-b^2) + 2dcb - s + i * 2d(c - rb)a`.
pub fn central_charge(p: &StabParam, lat: &NSLattice, v: &MukaiVector) -> Result<ChargeValue, StabilityError> {
    let (d, r, c, s) = rank1_data(lat, v)?;
    if d != p.d {
        return Err(StabilityError::NotRankOne);
    }
    let d = rat(&d);
    let (a, b) = (&p.alpha, &p.beta);
    let re = &d * rat(&r) * (a * a - b * b) + BigRational::from(BigInt::from(2)) * &d * rat(&c) * b
        - rat(&s);
    let im = BigRational::from(BigInt::from(2)) * &d * (rat(&c) - rat(&r) * b) * a;
    Ok(ChargeValue { re, im })
}

/// Slope `-re/im`, or infinite when the imaginary part vanishes.
///
/// The phase is `1/pi * arccot(slope)` on the heart; comparisons use the
/// exact slope value instead of the transcendental phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slope {
    Finite(BigRational),
    Infinite,
}

pub fn slope(p: &StabParam, lat: &NSLattice, v: &MukaiVector) -> Result<Slope, StabilityError> {
    let z = central_charge(p, lat, v)?;
    if z.im.is_zero() {
        Ok(Slope::Infinite)
    } else {
        Ok(Slope::Finite(-z.re / z.im))
    }
}

/// Cross-multiplied slope equality at a point of the upper half plane known
/// only through `alpha^2`. The imaginary part of the charge is `alpha`
/// times a rational linear form, so equality of slopes is equivalent to
/// `re(v) * imc(u) = re(u) * imc(v)` with `imc = im / alpha`, which is a
/// rational identity in `alpha^2`.
pub fn slopes_equal_at_alpha_sq(
    d: &BigInt,
    beta: &BigRational,
    alpha_sq: &BigRational,
    v: &MukaiVector,
    u: &MukaiVector,
) -> bool {
    let part = |w: &MukaiVector| -> (BigRational, BigRational) {
        let r = rat(&w.r);
        let c = rat(&w.delta[0]);
        let s = rat(&w.s);
        let d = rat(d);
        let two = BigRational::from(BigInt::from(2));
        let re = &d * &r * (alpha_sq - beta * beta) + &two * &d * &c * beta - s;
        let imc = &two * &d * (&c - &r * beta);
        (re, imc)
    };
    let (re_v, imc_v) = part(v);
    let (re_u, imc_u) = part(u);
    re_v * imc_u == re_u * imc_v
}

/// Outcome of the bounded spherical-class scan for membership in the
/// stability domain. `holds == false` comes with an explicit witness class;
/// `holds == true` is only complete within the reported bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InVReport {
    pub holds: bool,
    pub witness: Option<MukaiVector>,
    pub bound: u64,
}

/// Scans positive-rank spherical classes `(r, cH, s)` with `r <= bound`,
/// `c = r*beta` integral and `s = (dc^2+1)/r` integral; these are exactly
/// the classes with vanishing imaginary part. The parameter lies in the
/// domain iff no such class has non-positive real part.
pub fn in_v_check(p: &StabParam, bound: u64) -> InVReport {
    let lat = NSLattice::rank1(p.d.clone());
    for r in 1..=bound {
        let r_big = BigInt::from(r);
        let c_rat = rat(&r_big) * &p.beta;
        if !c_rat.is_integer() {
            continue;
        }
        let c = c_rat.to_integer();
        let num = &p.d * &c * &c + BigInt::one();
        if (&num % &r_big).is_zero() {
            let s = num / &r_big;
            let delta = MukaiVector::new(r_big, vec![c], s);
            let z = central_charge(p, &lat, &delta).expect("rank-1 by construction");
            debug_assert!(z.im.is_zero());
            if !z.re.is_positive() {
                return InVReport {
                    holds: false,
                    witness: Some(delta),
                    bound,
                };
            }
        }
    }
    InVReport {
        holds: true,
        witness: None,
        bound,
    }
}

/// Exact membership report for the vertical line `beta = -1/k`.
///
/// A spherical class with vanishing imaginary part on the line must satisfy
/// `r = -ck` and `c(dc + ks) = -1`, forcing `c = +-1` and `k | d + 1`.
/// When `k` does not divide `d + 1` the line carries no such class at any
/// `alpha`, so every point of the line lies in the stability domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalLineReport {
    pub d: BigInt,
    pub k: BigInt,
    pub divides: bool,
    pub wall_free: bool,
    pub witness: Option<MukaiVector>,
}

pub fn vertical_line_report(d: &BigInt, k: &BigInt) -> Result<VerticalLineReport, StabilityError> {
    if !d.is_positive() || !k.is_positive() {
        return Err(StabilityError::BadDegree);
    }
    let divides = ((d + BigInt::one()) % k).is_zero();
    // positive-rank witness: c = -1, r = k, s = (d+1)/k
    let witness = if divides {
        Some(MukaiVector::new(
            k.clone(),
            vec![BigInt::from(-1)],
            (d + BigInt::one()) / k,
        ))
    } else {
        None
    };
    Ok(VerticalLineReport {
        d: d.clone(),
        k: k.clone(),
        divides,
        wall_free: !divides,
        witness,
    })
}

/// A complexified lattice vector, stored as exact rational real and
/// imaginary coordinate vectors over the `(r, delta..., s)` basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaVector {
    pub re: Vec<BigRational>,
    pub im: Vec<BigRational>,
}

impl OmegaVector {
    /// `exp(beta H + i alpha H)` on the rank-1 lattice:
    /// `(1, (beta + i alpha) H, d (beta + i alpha)^2)`.
    pub fn exp_divisor(d: &BigInt, beta: &BigRational, alpha: &BigRational) -> Self {
        let d = rat(d);
        let two = BigRational::from(BigInt::from(2));
        OmegaVector {
            re: vec![
                BigRational::one(),
                beta.clone(),
                &d * (beta * beta - alpha * alpha),
            ],
            im: vec![BigRational::zero(), alpha.clone(), two * &d * alpha * beta],
        }
    }

    fn dim(&self) -> usize {
        self.re.len()
    }
}

fn pairing_rat(lat: &NSLattice, a: &[BigRational], b: &[BigRational]) -> BigRational {
    let n = lat.rank();
    let mut acc = BigRational::zero();
    for i in 0..n {
        for j in 0..n {
            acc += &a[1 + i] * rat(&lat.gram()[i][j]) * &b[1 + j];
        }
    }
    acc - &a[0] * &b[n + 1] - &b[0] * &a[n + 1]
}

/// Result of the positivity predicates on a complexified vector, with the
/// bound used by the spherical-class scan backing `in_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaFlags {
    pub in_p: bool,
    pub in_q: bool,
    pub in_l: bool,
    pub l_bound: u64,
    pub l_witness: Option<MukaiVector>,
}

/// Checks the three predicates:
/// - `in_p`: real and imaginary parts span a positive definite 2-plane;
/// - `in_q`: `(Omega, Omega) = 0`, `(Omega, conj Omega) > 0`, `r(Omega) = 1`;
/// - `in_l`: no positive-rank spherical class `delta` with `r <= bound`
///   (and `|c_i| <= bound`) pairs to a non-positive real number.
pub fn omega_predicates(lat: &NSLattice, omega: &OmegaVector, bound: u64) -> Result<OmegaFlags, StabilityError> {
    let n = lat.rank() + 2;
    if omega.dim() != n || omega.im.len() != n {
        return Err(StabilityError::NotRankOne);
    }
    let xx = pairing_rat(lat, &omega.re, &omega.re);
    let yy = pairing_rat(lat, &omega.im, &omega.im);
    let xy = pairing_rat(lat, &omega.re, &omega.im);

    // Gram of (Re, Im) positive definite
    let in_p = xx.is_positive() && (&xx * &yy - &xy * &xy).is_positive();

    // (Omega, Omega) = xx - yy + 2i xy; (Omega, conj Omega) = xx + yy
    let in_q = {
        let zero_sq = (&xx - &yy).is_zero() && xy.is_zero();
        let pos = (&xx + &yy).is_positive();
        let rank_one = omega.re[0].is_one() && omega.im[0].is_zero();
        zero_sq && pos && rank_one
    };

    let mut in_l = true;
    let mut l_witness = None;
    'outer: for delta in spherical_scan(lat, bound) {
        let coords: Vec<BigRational> = delta.coords().iter().map(rat).collect();
        let re_pair = pairing_rat(lat, &omega.re, &coords);
        let im_pair = pairing_rat(lat, &omega.im, &coords);
        if im_pair.is_zero() && !re_pair.is_positive() {
            in_l = false;
            l_witness = Some(delta);
            break 'outer;
        }
    }
    Ok(OmegaFlags {
        in_p,
        in_q,
        in_l,
        l_bound: bound,
        l_witness,
    })
}

/// Positive-rank spherical classes with `r <= bound` and divisor
/// coordinates in the box `|c_i| <= bound`; `s` is determined by the
/// square. Bounded and exhaustive within the box.
fn spherical_scan(lat: &NSLattice, bound: u64) -> Vec<MukaiVector> {
    let rank = lat.rank();
    let mut out = Vec::new();
    let bnd = bound as i64;
    let mut c = vec![-bnd; rank];
    loop {
        let delta: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let dsq = lat.divisor_pairing(&delta, &delta);
        for r in 1..=bound {
            // delta^2 - 2 r s = -2  =>  s = (delta^2 + 2) / (2r)
            let num = &dsq + BigInt::from(2);
            let den = BigInt::from(2) * BigInt::from(r);
            if (&num % &den).is_zero() {
                out.push(MukaiVector::new(BigInt::from(r), delta.clone(), num / den));
            }
        }
        // advance the box counter
        let mut i = 0;
        loop {
            if i == rank {
                return out;
            }
            c[i] += 1;
            if c[i] <= bnd {
                break;
            }
            c[i] = -bnd;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn param(d: i64, alpha: BigRational, beta: BigRational) -> StabParam {
        StabParam::new(d, alpha, beta).unwrap()
    }

    #[test]
    fn point_class_charge() {
        let lat = NSLattice::rank1(3);
        let p = param(3, r(7, 5), r(-2, 9));
        let v = MukaiVector::from_i64(0, &[0], 1);
        let z = central_charge(&p, &lat, &v).unwrap();
        assert_eq!(z.re, r(-1, 1));
        assert!(z.im.is_zero());
        assert_eq!(slope(&p, &lat, &v).unwrap(), Slope::Infinite);
    }

    #[test]
    fn quantized_imaginary_part_on_the_line() {
        // beta = -1/k makes im a multiple of 2 d alpha / k, with the
        // minimal positive value attained by (1, 0, 1-n).
        for (k, n) in [(2i64, 2i64), (2, 3), (3, 2), (4, 5)] {
            let d = k * k * (n - 1);
            let lat = NSLattice::rank1(d);
            let p = param(d, r(7, 3), r(-1, k));
            let unit = r(2 * d, k) * &p.alpha;
            for (rr, c, s) in [(3i64, 2i64, -5i64), (0, 1, 4), (-2, 0, 7), (5, -3, 1)] {
                let v = MukaiVector::from_i64(rr, &[c], s);
                let z = central_charge(&p, &lat, &v).unwrap();
                let q = z.im / unit.clone();
                assert!(q.is_integer());
                assert_eq!(q.to_integer(), BigInt::from(c * k + rr));
            }
            let hilb = MukaiVector::from_i64(1, &[0], 1 - n);
            let z = central_charge(&p, &lat, &hilb).unwrap();
            assert_eq!(z.im, unit);
        }
    }

    #[test]
    fn slope_example() {
        let lat = NSLattice::rank1(1);
        let p = param(1, r(1, 1), r(-1, 1));
        let v = MukaiVector::from_i64(1, &[0], -1);
        assert_eq!(slope(&p, &lat, &v).unwrap(), Slope::Finite(r(-1, 2)));
    }

    #[test]
    fn slopes_agree_on_the_wall_point() {
        let lat = NSLattice::rank1(1);
        let p = param(1, r(1, 2), r(-1, 2));
        let v = MukaiVector::from_i64(1, &[0], -1);
        let u = MukaiVector::from_i64(0, &[1], -3);
        assert_eq!(slope(&p, &lat, &v).unwrap(), Slope::Finite(r(-2, 1)));
        assert_eq!(slope(&p, &lat, &u).unwrap(), Slope::Finite(r(-2, 1)));
        let alpha_sq = r(1, 4);
        assert!(slopes_equal_at_alpha_sq(
            &BigInt::one(),
            &p.beta,
            &alpha_sq,
            &v,
            &u
        ));
    }

    #[test]
    fn charge_additive() {
        let lat = NSLattice::rank1(2);
        let p = param(2, r(3, 4), r(5, 7));
        let v = MukaiVector::from_i64(2, &[-1], 3);
        let w = MukaiVector::from_i64(-1, &[4], 0);
        let zv = central_charge(&p, &lat, &v).unwrap();
        let zw = central_charge(&p, &lat, &w).unwrap();
        let zs = central_charge(&p, &lat, &v.add(&w)).unwrap();
        assert_eq!(zs.re, zv.re + zw.re);
        assert_eq!(zs.im, zv.im + zw.im);
    }

    #[test]
    fn in_v_witness_and_recovery() {
        // alpha = 1 at beta = -1 on degree 2: the class (1, -H, 2) has
        // vanishing imaginary part and zero real part.
        let p = param(1, r(1, 1), r(-1, 1));
        let rep = in_v_check(&p, 100);
        assert!(!rep.holds);
        assert_eq!(rep.witness, Some(MukaiVector::from_i64(1, &[-1], 2)));

        let p2 = param(1, r(2, 1), r(-1, 1));
        assert!(in_v_check(&p2, 100).holds);
    }

    #[test]
    fn square_degree_lines_are_unobstructed() {
        for k in 2i64..=4 {
            for n in 2i64..=4 {
                let d = k * k * (n - 1);
                let p = param(d, r(13, 11), r(-1, k));
                assert!(in_v_check(&p, 200).holds, "k={k} n={n}");
                let rep = vertical_line_report(&BigInt::from(d), &BigInt::from(k)).unwrap();
                assert!(rep.wall_free);
            }
        }
        // k = 1 on d = 1 does hit an obstruction: k | d + 1.
        let rep = vertical_line_report(&BigInt::one(), &BigInt::one()).unwrap();
        assert!(!rep.wall_free);
        assert_eq!(rep.witness, Some(MukaiVector::from_i64(1, &[-1], 2)));
    }

    #[test]
    fn omega_exp_lies_on_quadric() {
        let lat = NSLattice::rank1(1);
        let om = OmegaVector::exp_divisor(&BigInt::one(), &r(-3, 7), &r(2, 5));
        let flags = omega_predicates(&lat, &om, 5).unwrap();
        assert!(flags.in_q);
        assert!(flags.in_p);
    }

    #[test]
    fn omega_degenerate_plane() {
        let lat = NSLattice::rank1(1);
        let mut om = OmegaVector::exp_divisor(&BigInt::one(), &r(0, 1), &r(1, 1));
        om.im = vec![BigRational::zero(); 3];
        let flags = omega_predicates(&lat, &om, 3).unwrap();
        assert!(!flags.in_p);
    }

    #[test]
    fn omega_l_witness_matches_domain_witness() {
        let lat = NSLattice::rank1(1);
        let om = OmegaVector::exp_divisor(&BigInt::one(), &r(-1, 1), &r(1, 1));
        let flags = omega_predicates(&lat, &om, 5).unwrap();
        assert!(!flags.in_l);
        assert_eq!(flags.l_witness, Some(MukaiVector::from_i64(1, &[-1], 2)));
    }

    #[test]
    fn quadrants() {
        let q = |re: i64, im: i64| ChargeValue {
            re: r(re, 1),
            im: r(im, 1),
        }
        .quadrant();
        assert_eq!(q(1, 0), 0);
        assert_eq!(q(-3, 2), 1);
        assert_eq!(q(-1, 0), 2);
        assert_eq!(q(0, -1), 3);
    }
}
