//! Dense complex linear algebra at the two dimensions this crate needs:
//! a single qutrit (3) and a qutrit pair (9).
//!
//! Two-qutrit objects use the basis order `|00⟩, |01⟩, …, |22⟩` with Alice as
//! the slow (left) index, so `|k l⟩` sits at position `3k + l`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for algebraic identities.
pub const EPS: f64 = 1e-12;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// `ω^k` with `ω = e^{2iπ/3}`.
pub fn omega_pow(k: i64) -> Complex64 {
    match k.rem_euclid(3) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(-0.5, SQRT3_2),
        _ => Complex64::new(-0.5, -SQRT3_2),
    }
}

/// `ζ^k` with `ζ = e^{2iπ/12}`.
pub fn zeta_pow(k: i64) -> Complex64 {
    let k = k.rem_euclid(12);
    // multiples of 3 and 4 are exact quarter / third turns
    match k {
        0 => Complex64::new(1.0, 0.0),
        3 => Complex64::new(0.0, 1.0),
        6 => Complex64::new(-1.0, 0.0),
        9 => Complex64::new(0.0, -1.0),
        4 => omega_pow(1),
        8 => omega_pow(2),
        _ => Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 12.0),
    }
}

pub fn approx_eq(a: Complex64, b: Complex64, eps: f64) -> bool {
    (a - b).norm() <= eps
}

/// A cube root of unity `ω^e`, stored by its exponent `e ∈ {0, 1, 2}`.
///
/// Measurement outcomes are always one of these, so keeping the exponent
/// makes products and conjugates exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CubeRoot(u8);

impl CubeRoot {
    pub const ONE: CubeRoot = CubeRoot(0);
    pub const ALL: [CubeRoot; 3] = [CubeRoot(0), CubeRoot(1), CubeRoot(2)];

    pub fn from_exponent(e: i64) -> Self {
        CubeRoot(e.rem_euclid(3) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn value(self) -> Complex64 {
        omega_pow(self.0 as i64)
    }

    pub fn conj(self) -> Self {
        Self::from_exponent(-(self.0 as i64))
    }

    /// Recognise `z` as `ω^e` within `eps`.
    pub fn from_complex(z: Complex64, eps: f64) -> Result<Self> {
        CubeRoot::ALL
            .into_iter()
            .find(|r| approx_eq(r.value(), z, eps))
            .ok_or_else(|| Error::NotCubeRoot(format!("{z}")))
    }
}

impl Mul for CubeRoot {
    type Output = CubeRoot;
    fn mul(self, rhs: CubeRoot) -> CubeRoot {
        CubeRoot((self.0 + rhs.0) % 3)
    }
}

/// Square complex matrix of fixed dimension.
#[derive(Clone, Copy, PartialEq)]
pub struct Matrix<const N: usize> {
    entries: [[Complex64; N]; N],
}

pub type Matrix3 = Matrix<3>;
pub type Matrix9 = Matrix<9>;

impl<const N: usize> Matrix<N> {
    pub fn zeros() -> Self {
        Self {
            entries: [[Complex64::new(0.0, 0.0); N]; N],
        }
    }

    pub fn identity() -> Self {
        Self::from_fn(|r, c| if r == c { 1.0.into() } else { 0.0.into() })
    }

    pub fn from_rows(entries: [[Complex64; N]; N]) -> Self {
        Self { entries }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros();
        for r in 0..N {
            for c in 0..N {
                m.entries[r][c] = f(r, c);
            }
        }
        m
    }

    pub fn diagonal(diag: [Complex64; N]) -> Self {
        Self::from_fn(|r, c| if r == c { diag[r] } else { 0.0.into() })
    }

    pub const fn dim(&self) -> usize {
        N
    }

    pub fn rows(&self) -> &[[Complex64; N]; N] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(|r, c| self.entries[c][r].conj())
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self::from_fn(|r, c| self.entries[r][c].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_fn(|r, c| self.entries[r][c] * s)
    }

    pub fn apply(&self, v: &Ket<N>) -> Ket<N> {
        let mut out = [Complex64::new(0.0, 0.0); N];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|c| self.entries[r][c] * v.amplitudes[c]).sum();
        }
        Ket { amplitudes: out }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc * *self)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..N {
            for c in 0..N {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.max_abs_diff(other) <= eps
    }

    pub fn is_hermitian(&self, eps: f64) -> bool {
        self.approx_eq(&self.dagger(), eps)
    }

    pub fn is_unitary(&self, eps: f64) -> bool {
        (self.dagger() * *self).approx_eq(&Self::identity(), eps)
    }

    /// Real eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let m = DMatrix::<Complex64>::from_fn(N, N, |r, c| self.entries[r][c]);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

impl<const N: usize> Default for Matrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for Matrix<N> {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r][c]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Matrix<N> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r][c]
    }
}

impl<const N: usize> Mul for Matrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| (0..N).map(|k| self.entries[r][k] * rhs.entries[k][c]).sum())
    }
}

impl<const N: usize> Add for Matrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.entries[r][c] + rhs.entries[r][c])
    }
}

impl<const N: usize> Sub for Matrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|r, c| self.entries[r][c] - rhs.entries[r][c])
    }
}

impl<const N: usize> fmt::Debug for Matrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix<{N}> [")?;
        for row in &self.entries {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix3 {
    /// Kronecker product with `self` as the slow (Alice) factor.
    pub fn kron(&self, other: &Matrix3) -> Matrix9 {
        kron(self, other).expect("3 x 3 = 9")
    }
}

/// Kronecker product `a ⊗ b`, `a` being the slow index.
///
/// The output dimension `P` is chosen by the caller and must equal `M * N`
/// and be at most 9.
pub fn kron<const M: usize, const N: usize, const P: usize>(
    a: &Matrix<M>,
    b: &Matrix<N>,
) -> Result<Matrix<P>> {
    if M * N != P || P > 9 {
        return Err(Error::DimensionOverflow {
            left: M,
            right: N,
            target: P,
        });
    }
    Ok(Matrix::from_fn(|r, c| {
        a[(r / N, c / N)] * b[(r % N, c % N)]
    }))
}

/// `Tr(rho · o)` without validating `rho`.
pub fn expectation(rho: &Matrix9, o: &Matrix9) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..9 {
        for j in 0..9 {
            acc += rho[(i, j)] * o[(j, i)];
        }
    }
    acc
}

/// `Tr(rho · o)` after checking that `rho` is a density matrix.
pub fn expectation_checked(rho: &Matrix9, o: &Matrix9, eps: f64) -> Result<Complex64> {
    validate_density(rho, eps)?;
    Ok(expectation(rho, o))
}

/// Hermitian, unit trace and positive semidefinite, all within `eps`.
pub fn validate_density<const N: usize>(rho: &Matrix<N>, eps: f64) -> Result<()> {
    if !rho.is_hermitian(eps) {
        return Err(Error::InvalidDensity("not Hermitian".into()));
    }
    let tr = rho.trace();
    if !approx_eq(tr, 1.0.into(), eps * N as f64) {
        return Err(Error::InvalidDensity(format!("trace {tr}")));
    }
    let lowest = rho.hermitian_eigenvalues()[0];
    // eigen-solver round-off grows with the dimension
    if lowest < -eps * 10.0 * N as f64 {
        return Err(Error::InvalidDensity(format!(
            "negative eigenvalue {lowest}"
        )));
    }
    Ok(())
}

/// Column vector of fixed dimension.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Ket<const N: usize> {
    amplitudes: [Complex64; N],
}

pub type Ket3 = Ket<3>;
pub type Ket9 = Ket<9>;

impl<const N: usize> Ket<N> {
    pub fn from_amplitudes(amplitudes: [Complex64; N]) -> Self {
        Self { amplitudes }
    }

    /// `|k⟩`.
    pub fn basis(k: usize) -> Self {
        let mut amplitudes = [Complex64::new(0.0, 0.0); N];
        amplitudes[k] = 1.0.into();
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64; N] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_normalized(&self, eps: f64) -> bool {
        (self.norm() - 1.0).abs() <= eps
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            amplitudes: self.amplitudes.map(|a| a * s),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> Matrix<N> {
        Matrix::from_fn(|r, c| self.amplitudes[r] * other.amplitudes[c].conj())
    }

    pub fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(a, b)| approx_eq(*a, *b, eps))
    }
}

impl<const N: usize> Index<usize> for Ket<N> {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.amplitudes[i]
    }
}

impl Ket3 {
    pub fn kron(&self, other: &Ket3) -> Ket9 {
        let mut out = [Complex64::new(0.0, 0.0); 9];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.amplitudes[i / 3] * other.amplitudes[i % 3];
        }
        Ket9::from_amplitudes(out)
    }
}
