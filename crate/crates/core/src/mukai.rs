//! Exact integer arithmetic on the algebraic Mukai lattice of a K3 surface:
//! the pairing, squares, cohomological actions of autoequivalences,
//! reflections in spherical classes, and isometry verification.
//!
//! Coordinates are ordered `(r, delta..., s)`; the `r`-`s` block pairs
//! hyperbolically with `(r, s)` entry `-1`, and divisor classes pair through
//! the Néron-Severi Gram matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::gcd_all;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MukaiError {
    #[error("Gram matrix must be square and symmetric")]
    GramNotSymmetric,
    #[error("even lattice violated: diagonal entry {0} is odd")]
    OddDiagonal(BigInt),
    #[error("lattice mismatch: vector has {got} divisor coordinates, lattice has rank {want}")]
    LatticeMismatch { got: usize, want: usize },
    #[error("reflection class must have square -2, got {0}")]
    NotSpherical(BigInt),
    #[error("isometry matrix must be {want}x{want}")]
    BadMatrixSize { want: usize },
}

/// Integer Gram matrix of the algebraic divisor lattice, with basis labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NSLattice {
    gram: Vec<Vec<BigInt>>,
    labels: Vec<String>,
}

impl NSLattice {
    /// Accepts any even symmetric Gram matrix. The stability and wall
    /// operations further require one of the two named shapes; see
    /// [`NSLattice::rank1_degree`] and [`NSLattice::is_hyperbolic_u`].
    pub fn new(gram: Vec<Vec<BigInt>>, labels: Vec<String>) -> Result<Self, MukaiError> {
        let n = gram.len();
        if labels.len() != n {
            return Err(MukaiError::GramNotSymmetric);
        }
        for row in &gram {
            if row.len() != n {
                return Err(MukaiError::GramNotSymmetric);
            }
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(MukaiError::GramNotSymmetric);
                }
            }
            if gram[i][i].is_odd() {
                return Err(MukaiError::OddDiagonal(gram[i][i].clone()));
            }
        }
        Ok(NSLattice { gram, labels })
    }

    /// The rank-1 lattice `<2d>` with basis label `H`.
    pub fn rank1(d: impl Into<BigInt>) -> Self {
        let d = d.into();
        NSLattice {
            gram: vec![vec![BigInt::from(2) * d]],
            labels: vec!["H".to_owned()],
        }
    }

    /// The hyperbolic plane of an elliptic surface with a section,
    /// basis (section, fiber).
    pub fn hyperbolic_u() -> Self {
        NSLattice {
            gram: vec![
                vec![BigInt::from(-2), BigInt::one()],
                vec![BigInt::one(), BigInt::zero()],
            ],
            labels: vec!["s".to_owned(), "f".to_owned()],
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `Some(d)` when the Gram is `[[2d]]` with `d >= 1`.
    pub fn rank1_degree(&self) -> Option<BigInt> {
        if self.gram.len() != 1 {
            return None;
        }
        let two_d = &self.gram[0][0];
        if two_d.is_even() && two_d.is_positive() {
            Some(two_d / 2)
        } else {
            None
        }
    }

    /// True for the Gram `[[-2,1],[1,0]]` in the (section, fiber) basis.
    pub fn is_hyperbolic_u(&self) -> bool {
        self.gram.len() == 2
            && self.gram[0][0] == BigInt::from(-2)
            && self.gram[0][1].is_one()
            && self.gram[1][1].is_zero()
    }

    /// Intersection pairing of two divisor classes.
    pub fn divisor_pairing(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                acc += ai * &self.gram[i][j] * bj;
            }
        }
        acc
    }

    fn check(&self, v: &MukaiVector) -> Result<(), MukaiError> {
        if v.delta.len() != self.rank() {
            return Err(MukaiError::LatticeMismatch {
                got: v.delta.len(),
                want: self.rank(),
            });
        }
        Ok(())
    }

    /// `(v, w) = Delta.Delta' - r s' - r' s`.
    pub fn mukai_pairing(&self, v: &MukaiVector, w: &MukaiVector) -> Result<BigInt, MukaiError> {
        self.check(v)?;
        self.check(w)?;
        Ok(self.divisor_pairing(&v.delta, &w.delta) - &v.r * &w.s - &w.r * &v.s)
    }

    /// `v^2 = Delta^2 - 2 r s`; always even.
    pub fn square(&self, v: &MukaiVector) -> Result<BigInt, MukaiError> {
        self.mukai_pairing(v, v)
    }

    /// Multiplication with `exp(D)`: `(r, Delta + rD, r D^2/2 + Delta.D + s)`.
    pub fn tensor_by_divisor(&self, v: &MukaiVector, d: &[BigInt]) -> Result<MukaiVector, MukaiError> {
        self.check(v)?;
        if d.len() != self.rank() {
            return Err(MukaiError::LatticeMismatch {
                got: d.len(),
                want: self.rank(),
            });
        }
        let d_sq = self.divisor_pairing(d, d);
        let delta: Vec<BigInt> = v
            .delta
            .iter()
            .zip(d)
            .map(|(di, ci)| di + &v.r * ci)
            .collect();
        let s = &v.r * (d_sq / 2) + self.divisor_pairing(&v.delta, d) + &v.s;
        Ok(MukaiVector::new(v.r.clone(), delta, s))
    }

    /// Cohomological action of the shift, the spherical twist around the
    /// structure sheaf, or the (shifted derived) dual.
    pub fn basic_action(&self, v: &MukaiVector, kind: BasicAction) -> MukaiVector {
        match kind {
            BasicAction::Shift => MukaiVector::new(
                -&v.r,
                v.delta.iter().map(|x| -x).collect(),
                -&v.s,
            ),
            BasicAction::SphericalTwistO => {
                MukaiVector::new(-&v.s, v.delta.clone(), -&v.r)
            }
            BasicAction::Dual => MukaiVector::new(
                v.r.clone(),
                v.delta.iter().map(|x| -x).collect(),
                v.s.clone(),
            ),
        }
    }

    /// Reflection `v -> v + (delta, v) delta` in a class of square -2.
    pub fn reflect(&self, v: &MukaiVector, delta: &MukaiVector) -> Result<MukaiVector, MukaiError> {
        let d_sq = self.square(delta)?;
        if d_sq != BigInt::from(-2) {
            return Err(MukaiError::NotSpherical(d_sq));
        }
        let c = self.mukai_pairing(delta, v)?;
        Ok(MukaiVector::new(
            &v.r + &c * &delta.r,
            v.delta
                .iter()
                .zip(&delta.delta)
                .map(|(vi, di)| vi + &c * di)
                .collect(),
            &v.s + &c * &delta.s,
        ))
    }

    /// Gram matrix of the full Mukai pairing in `(r, delta..., s)` order.
    pub fn full_gram(&self) -> Vec<Vec<BigInt>> {
        let n = self.rank() + 2;
        let mut g = vec![vec![BigInt::zero(); n]; n];
        g[0][n - 1] = BigInt::from(-1);
        g[n - 1][0] = BigInt::from(-1);
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                g[1 + i][1 + j] = self.gram[i][j].clone();
            }
        }
        g
    }

    /// Matrix of a single generator on `(r, delta..., s)` coordinates.
    fn generator_matrix(&self, g: &IsoGen) -> Result<Vec<Vec<BigInt>>, MukaiError> {
        let n = self.rank() + 2;
        let mut m = identity(n);
        match g {
            IsoGen::Shift => {
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] = BigInt::from(-1);
                }
            }
            IsoGen::SphericalTwistO => {
                m[0][0] = BigInt::zero();
                m[n - 1][n - 1] = BigInt::zero();
                m[0][n - 1] = BigInt::from(-1);
                m[n - 1][0] = BigInt::from(-1);
            }
            IsoGen::Dual => {
                for i in 0..self.rank() {
                    m[1 + i][1 + i] = BigInt::from(-1);
                }
            }
            IsoGen::TensorBy(d) => {
                if d.len() != self.rank() {
                    return Err(MukaiError::LatticeMismatch {
                        got: d.len(),
                        want: self.rank(),
                    });
                }
                // delta_i column picks up r*D_i, the s row picks up
                // r*D^2/2 + (G D).delta.
                let d_sq = self.divisor_pairing(d, d);
                for i in 0..self.rank() {
                    m[1 + i][0] = d[i].clone();
                }
                m[n - 1][0] = d_sq / 2;
                for j in 0..self.rank() {
                    let mut gd = BigInt::zero();
                    for (i, di) in d.iter().enumerate() {
                        gd += &self.gram[j][i] * di;
                    }
                    m[n - 1][1 + j] = gd;
                }
            }
            IsoGen::Reflect(delta) => {
                let sq = self.square(delta)?;
                if sq != BigInt::from(-2) {
                    return Err(MukaiError::NotSpherical(sq));
                }
                // I + delta * (G_full delta)^T
                let full = self.full_gram();
                let coords = delta.coords();
                let mut gdelta = vec![BigInt::zero(); n];
                for i in 0..n {
                    for j in 0..n {
                        gdelta[i] += &full[i][j] * &coords[j];
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        let add = &coords[i] * &gdelta[j];
                        m[i][j] += add;
                    }
                }
            }
            IsoGen::FmAbstract => {}
        }
        Ok(m)
    }

    /// Composes a word of generators in chronological order: the first
    /// entry is applied first.
    pub fn isometry_from_word(&self, word: &[IsoGen]) -> Result<Isometry, MukaiError> {
        let n = self.rank() + 2;
        let mut matrix = identity(n);
        let mut anti = false;
        for g in word {
            matrix = mat_mul(&self.generator_matrix(g)?, &matrix);
            if matches!(g, IsoGen::Dual) {
                anti = !anti;
            }
        }
        Ok(Isometry {
            matrix,
            word: word.to_vec(),
            anti,
        })
    }

    /// True iff `M^T G M = G` for the full Mukai Gram and `det M = ±1`.
    pub fn verify_isometry(&self, iso: &Isometry) -> bool {
        let n = self.rank() + 2;
        if iso.matrix.len() != n || iso.matrix.iter().any(|row| row.len() != n) {
            return false;
        }
        let g = self.full_gram();
        let mt = transpose(&iso.matrix);
        let lhs = mat_mul(&mat_mul(&mt, &g), &iso.matrix);
        if lhs != g {
            return false;
        }
        let d = det(&iso.matrix);
        d == BigInt::one() || d == BigInt::from(-1)
    }

    /// Applies an isometry matrix to a vector.
    pub fn apply_isometry(&self, iso: &Isometry, v: &MukaiVector) -> Result<MukaiVector, MukaiError> {
        self.check(v)?;
        let n = self.rank() + 2;
        if iso.matrix.len() != n {
            return Err(MukaiError::BadMatrixSize { want: n });
        }
        let coords = v.coords();
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            for j in 0..n {
                out[i] += &iso.matrix[i][j] * &coords[j];
            }
        }
        Ok(MukaiVector::from_coords(&out))
    }
}

/// The three pointwise cohomological actions that need no divisor argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasicAction {
    Shift,
    SphericalTwistO,
    Dual,
}

/// Generator tags for isometry words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoGen {
    Shift,
    TensorBy(Vec<BigInt>),
    SphericalTwistO,
    Dual,
    Reflect(MukaiVector),
    FmAbstract,
}

/// An integer matrix acting on `(r, delta..., s)` together with the word of
/// generators it was composed from. `anti` marks anti-equivalences (an odd
/// number of duals); their cohomological action still preserves the pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    pub matrix: Vec<Vec<BigInt>>,
    pub word: Vec<IsoGen>,
    pub anti: bool,
}

/// Integer triple `(r, delta, s)` over a fixed divisor lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MukaiVector {
    pub r: BigInt,
    pub delta: Vec<BigInt>,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: impl Into<BigInt>, delta: Vec<BigInt>, s: impl Into<BigInt>) -> Self {
        MukaiVector {
            r: r.into(),
            delta,
            s: s.into(),
        }
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(r: i64, delta: &[i64], s: i64) -> Self {
        MukaiVector {
            r: BigInt::from(r),
            delta: delta.iter().map(|&x| BigInt::from(x)).collect(),
            s: BigInt::from(s),
        }
    }

    pub fn coords(&self) -> Vec<BigInt> {
        let mut c = Vec::with_capacity(self.delta.len() + 2);
        c.push(self.r.clone());
        c.extend(self.delta.iter().cloned());
        c.push(self.s.clone());
        c
    }

    pub fn from_coords(coords: &[BigInt]) -> Self {
        let n = coords.len();
        MukaiVector {
            r: coords[0].clone(),
            delta: coords[1..n - 1].to_vec(),
            s: coords[n - 1].clone(),
        }
    }

    /// gcd of all components equals 1.
    pub fn is_primitive(&self) -> bool {
        gcd_all(self.coords().iter()).is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.delta.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Self {
        MukaiVector {
            r: -&self.r,
            delta: self.delta.iter().map(|x| -x).collect(),
            s: -&self.s,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        MukaiVector {
            r: &self.r + &other.r,
            delta: self
                .delta
                .iter()
                .zip(&other.delta)
                .map(|(a, b)| a + b)
                .collect(),
            s: &self.s + &other.s,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        MukaiVector {
            r: c * &self.r,
            delta: self.delta.iter().map(|x| c * x).collect(),
            s: c * &self.s,
        }
    }
}

impl std::fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, [", self.r)?;
        for (i, d) in self.delta.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "], {})", self.s)
    }
}

pub(crate) fn identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub(crate) fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![BigInt::zero(); p]; n];
    for i in 0..n {
        for (k, bik) in b.iter().enumerate() {
            let aik = &a[i][k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += aik * &bik[j];
            }
        }
    }
    out
}

pub(crate) fn transpose(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = a[0].len();
    let mut out = vec![vec![BigInt::zero(); n]; m];
    for i in 0..n {
        for j in 0..m {
            out[j][i] = a[i][j].clone();
        }
    }
    out
}

/// Determinant by cofactor expansion; matrices here are at most 4x4.
pub(crate) fn det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    match n {
        0 => BigInt::one(),
        1 => a[0][0].clone(),
        2 => &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0],
        _ => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = &a[0][j] * det(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}
