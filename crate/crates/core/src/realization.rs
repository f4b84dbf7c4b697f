//! Rational-case matrix realizations: clock/shift pairs, matrix-valued
//! Laurent sections of the algebra bundle, the generator maps to
//! `z_1 (x) S` and `z_2 (x) R^{-1}`, equivariance and the bundle trace.

use crate::error::{NctError, Result};
use crate::linalg::{czero, CMatrix};
use crate::phase::{ExactScalar, Phase, RationalAngle};
use crate::torus::TorusElement;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Dense square matrix whose entries keep amplitude and exact phase apart.
/// Products of clock/shift monomials stay phase-exact.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix {
    dim: usize,
    data: Vec<ExactScalar>,
}

impl PhaseMatrix {
    pub fn zeros(dim: usize) -> Self {
        PhaseMatrix {
            dim,
            data: vec![ExactScalar::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ExactScalar::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> ExactScalar {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactScalar) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(NctError::SizeMismatch(self.dim, other.dim));
        }
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.get(i, k);
                if a.is_zero(0.0) {
                    continue;
                }
                for j in 0..self.dim {
                    let b = other.get(k, j);
                    if b.is_zero(0.0) {
                        continue;
                    }
                    out.set(i, j, out.get(i, j).add(&a.mul(&b)));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(NctError::SizeMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for i in 0..self.dim * self.dim {
            out.data[i] = out.data[i].add(&other.data[i]);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = v.mul(c);
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i).value()).sum()
    }

    /// Hilbert-Schmidt pairing `tr(self^dagger other)`.
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        let mut acc = czero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.get(i, j).value().conj() * other.get(i, j).value();
            }
        }
        acc
    }

    pub fn to_cmatrix(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).value())
    }

    pub fn eq_phase_exact(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.eq_phase_exact(b, tol))
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.value() - b.value()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.value().norm()).fold(0.0, f64::max)
    }

    /// Deviation from being a scalar multiple of the identity, together with
    /// the extracted scalar `tr/dim`.
    pub fn scalar_part(&self) -> (Complex64, f64) {
        let c = self.trace() / self.dim as f64;
        let mut dev = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expect = if i == j { c } else { czero() };
                dev = dev.max((self.get(i, j).value() - expect).norm());
            }
        }
        (c, dev)
    }
}

/// The clock matrix `R = diag(1, lambda, ..., lambda^{dim-1})` and the cyclic
/// shift `S`, satisfying `R^dim = S^dim = 1` and `RS = lambda S R` exactly.
#[derive(Debug, Clone)]
pub struct ClockShiftPair {
    dim: usize,
    lambda: Phase,
}

impl ClockShiftPair {
    /// Standard pair for rational `theta = p/q`: `dim = q`, `lambda = e^{2 pi i p/q}`.
    pub fn new(theta: RationalAngle) -> Self {
        ClockShiftPair {
            dim: theta.q() as usize,
            lambda: theta.lambda(),
        }
    }

    /// Pair of the stated dimension with an arbitrary root-of-unity `lambda`
    /// (used by the double-covering realizations, where `R, S` live in
    /// `M_{2q}` or `M_{4q}`).
    pub fn with_dim(dim: usize, lambda: Phase) -> Self {
        ClockShiftPair { dim, lambda }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> Phase {
        self.lambda
    }

    pub fn r(&self) -> PhaseMatrix {
        self.r_pow(1)
    }

    pub fn s(&self) -> PhaseMatrix {
        self.s_pow(1)
    }

    /// `R^e` with the exponent reduced mod the matrix order.
    pub fn r_pow(&self, e: i64) -> PhaseMatrix {
        let mut m = PhaseMatrix::zeros(self.dim);
        for i in 0..self.dim {
            m.set(i, i, ExactScalar::from_phase(self.lambda.pow(e * i as i64)));
        }
        m
    }

    /// `S^e`: the cyclic shift `e_j -> e_{j+e mod dim}`.
    pub fn s_pow(&self, e: i64) -> PhaseMatrix {
        let d = self.dim as i64;
        let mut m = PhaseMatrix::zeros(self.dim);
        for j in 0..self.dim {
            let i = ((j as i64 + e).rem_euclid(d)) as usize;
            m.set(i, j, ExactScalar::one());
        }
        m
    }

    /// Fiber matrix of the monomial section `u^m v^n`: `S^m R^{-n}`.
    pub fn monomial_matrix(&self, m: i64, n: i64) -> PhaseMatrix {
        self.s_pow(m).mul(&self.r_pow(-n)).expect("same dim")
    }

    /// `rho_{a,b}(A) = R^a S^b A S^{-b} R^{-a}`.
    pub fn rho(&self, a: i64, b: i64, mat: &PhaseMatrix) -> Result<PhaseMatrix> {
        self.r_pow(a)
            .mul(&self.s_pow(b))?
            .mul(mat)?
            .mul(&self.s_pow(-b))?
            .mul(&self.r_pow(-a))
    }
}

/// Laurent polynomial in `(z_1, z_2)` with square matrix coefficients; the
/// global-components picture of sections of the bundle of matrix algebras.
#[derive(Debug, Clone)]
pub struct MatrixLaurentSection {
    cs: ClockShiftPair,
    coeffs: BTreeMap<(i64, i64), PhaseMatrix>,
}

impl MatrixLaurentSection {
    pub fn zero(cs: ClockShiftPair) -> Self {
        MatrixLaurentSection {
            cs,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unit(cs: ClockShiftPair) -> Self {
        let dim = cs.dim();
        let mut s = Self::zero(cs);
        s.add_coeff(0, 0, PhaseMatrix::identity(dim));
        s
    }

    pub fn clock_shift(&self) -> &ClockShiftPair {
        &self.cs
    }

    pub fn dim(&self) -> usize {
        self.cs.dim()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(i64, i64), &PhaseMatrix)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: i64, n: i64) -> PhaseMatrix {
        self.coeffs
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(|| PhaseMatrix::zeros(self.dim()))
    }

    pub fn modes(&self) -> impl Iterator<Item = &(i64, i64)> {
        self.coeffs.keys()
    }

    pub fn add_coeff(&mut self, m: i64, n: i64, mat: PhaseMatrix) {
        let cur = match self.coeffs.remove(&(m, n)) {
            Some(c) => c.add(&mat).expect("same dim"),
            None => mat,
        };
        if cur.max_abs() > crate::torus::PRUNE_THRESHOLD {
            self.coeffs.insert((m, n), cur);
        }
    }

    /// Monomial section `c * u^m v^n = c z_1^m z_2^n (x) S^m R^{-n}`.
    pub fn monomial(cs: ClockShiftPair, m: i64, n: i64, c: ExactScalar) -> Self {
        let mat = cs.monomial_matrix(m, n).scale(&c);
        let mut s = Self::zero(cs);
        s.add_coeff(m, n, mat);
        s
    }

    /// Laurent convolution with matrix products (pointwise multiplication of
    /// sections).
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(NctError::SizeMismatch(self.dim(), other.dim()));
        }
        let mut out = Self::zero(self.cs.clone());
        for (&(m, n), a) in &self.coeffs {
            for (&(r, s), b) in &other.coeffs {
                out.add_coeff(m + r, n + s, a.mul(b)?);
            }
        }
        Ok(out)
    }

    /// Pointwise Hermitian conjugation: mode `(m,n)` with matrix `A` goes to
    /// mode `(-m,-n)` with matrix `A^dagger`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.cs.clone());
        for (&(m, n), a) in &self.coeffs {
            out.add_coeff(-m, -n, a.adjoint());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(NctError::SizeMismatch(self.dim(), other.dim()));
        }
        let mut out = self.clone();
        for (&(m, n), a) in &other.coeffs {
            out.add_coeff(m, n, a.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = Self::zero(self.cs.clone());
        for (&(m, n), a) in &self.coeffs {
            out.add_coeff(m, n, a.scale(c));
        }
        out
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<_> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter()
            .map(|(m, n)| self.coeff(m, n).distance(&other.coeff(m, n)))
            .fold(0.0, f64::max)
    }

    pub fn eq_phase_exact(&self, other: &Self, tol: f64) -> bool {
        let keys: std::collections::BTreeSet<_> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter()
            .all(|(m, n)| self.coeff(m, n).eq_phase_exact(&other.coeff(m, n), tol))
    }

    /// Pointwise evaluation `sum z_1^m z_2^n A_{mn}`; arguments must be on
    /// the unit circle.
    pub fn evaluate(&self, z1: Complex64, z2: Complex64) -> Result<CMatrix> {
        for z in [z1, z2] {
            if (z.norm() - 1.0).abs() > 1e-12 {
                return Err(NctError::OffCircle(z.norm()));
            }
        }
        let mut acc = CMatrix::zeros(self.dim(), self.dim());
        for (&(m, n), a) in &self.coeffs {
            let w = z1.powi(m as i32) * z2.powi(n as i32);
            acc += a.to_cmatrix() * w;
        }
        Ok(acc)
    }

    /// Max deviation from the coefficient-level equivariance identity
    /// `lambda^{am+bn} A_{mn} = R^a S^b A_{mn} S^{-b} R^{-a}` over all modes
    /// and all `(a,b)` in the structure group.
    pub fn equivariance_deviation(&self) -> f64 {
        let g = self.dim() as i64;
        let mut dev = 0.0f64;
        for (&(m, n), mat) in &self.coeffs {
            for a in 0..g {
                for b in 0..g {
                    let lhs = mat.scale(&ExactScalar::from_phase(self.cs.lambda().pow(a * m + b * n)));
                    let rhs = self.cs.rho(a, b, mat).expect("same dim");
                    dev = dev.max(lhs.distance(&rhs));
                }
            }
        }
        dev
    }

    pub fn is_equivariant(&self, tol: f64) -> bool {
        self.equivariance_deviation() <= tol
    }

    /// Bundle trace: the Laurent coefficient of the basis monomial
    /// `xi_U^0 xi_V^0`, i.e. `tr(A_{00}) / dim`. Never computed by
    /// quadrature.
    pub fn trace_f(&self) -> Result<Complex64> {
        let dev = self.equivariance_deviation();
        if dev > 1e-10 {
            return Err(NctError::NonEquivariant(dev));
        }
        Ok(self.coeff(0, 0).trace() / self.dim() as f64)
    }

    /// Decompose an equivariant section into monomial coordinates: the
    /// coefficient of `u^m v^n` at mode `(m,n)` is `tr(M^dagger A)/dim` with
    /// `M = S^m R^{-n}`. Returns the coefficients and the max residual of
    /// the reconstruction.
    pub fn monomial_decomposition(&self) -> (BTreeMap<(i64, i64), Complex64>, f64) {
        let dim = self.dim() as f64;
        let mut out = BTreeMap::new();
        let mut residual = 0.0f64;
        for (&(m, n), a) in &self.coeffs {
            let basis = self.cs.monomial_matrix(m, n);
            let c = basis.hs_inner(a) / dim;
            if c.norm() > crate::torus::PRUNE_THRESHOLD {
                out.insert((m, n), c);
            }
            let recon = basis.scale(&ExactScalar::from_complex(c));
            residual = residual.max(recon.distance(a));
        }
        (out, residual)
    }

    /// JSON wire format `{q, terms: [{m, n, matrix: row-major re/im pairs}]}`.
    pub fn to_json(&self) -> SectionJson {
        SectionJson {
            q: self.dim(),
            terms: self
                .coeffs
                .iter()
                .map(|(&(m, n), a)| SectionTermJson {
                    m,
                    n,
                    matrix: (0..self.dim())
                        .flat_map(|i| (0..self.dim()).map(move |j| (i, j)))
                        .flat_map(|(i, j)| {
                            let v = a.get(i, j).value();
                            [v.re, v.im]
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct SectionJson {
    pub q: usize,
    pub terms: Vec<SectionTermJson>,
}

#[derive(Debug, serde::Serialize, serde::Deserialize)]
pub struct SectionTermJson {
    pub m: i64,
    pub n: i64,
    pub matrix: Vec<f64>,
}

/// The clock/shift pair for rational `theta`.
pub fn clock_shift(theta: RationalAngle) -> ClockShiftPair {
    ClockShiftPair::new(theta)
}

/// The generator map `U -> u = z_1 (x) S`, `V -> v = z_2 (x) R^{-1}`,
/// extended as an algebra homomorphism; star goes to pointwise Hermitian
/// conjugation.
pub fn map_t(a: &TorusElement) -> Result<MatrixLaurentSection> {
    let r = a.theta().as_rational()?;
    let cs = ClockShiftPair::new(r);
    let mut out = MatrixLaurentSection::zero(cs.clone());
    for (&(m, n), c) in a.terms() {
        out.add_coeff(m, n, cs.monomial_matrix(m, n).scale(c));
    }
    Ok(out)
}

/// The bundle-section map. Identical local components to [`map_t`]; kept as
/// a named alias so reports can reference the bundle picture separately.
pub fn map_q(a: &TorusElement) -> Result<MatrixLaurentSection> {
    map_t(a)
}

/// Scalar Laurent polynomial on the quotient torus (image of the center).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScalarLaurent {
    pub coeffs: BTreeMap<(i64, i64), Complex64>,
}

impl ScalarLaurent {
    pub fn unit() -> Self {
        let mut s = ScalarLaurent::default();
        s.coeffs.insert((0, 0), Complex64::new(1.0, 0.0));
        s
    }

    pub fn coeff(&self, m: i64, n: i64) -> Complex64 {
        self.coeffs.get(&(m, n)).copied().unwrap_or_else(czero)
    }
}

/// Center isomorphism `xi_U^q -> z_1^q`, `xi_V^q -> z_2^q`: for a central
/// element the local components are scalar matrices; those scalars are the
/// image.
pub fn center_iso(a: &TorusElement) -> Result<ScalarLaurent> {
    if !a.is_central()? {
        return Err(NctError::NonCentral);
    }
    let section = map_t(a)?;
    let mut out = ScalarLaurent::default();
    for (&(m, n), mat) in section.coeffs() {
        let (c, dev) = mat.scalar_part();
        if dev > 1e-12 {
            return Err(NctError::NonCentral);
        }
        out.coeffs.insert((m, n), c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Theta;
    use crate::torus::TorusElement;
    use num_complex::Complex64;

    fn angle(p: i64, q: i64) -> RationalAngle {
        RationalAngle::new(p, q).unwrap()
    }

    #[test]
    fn clock_shift_invariants_exact() {
        for (p, q) in [(0, 1), (1, 2), (1, 3), (2, 5)] {
            let cs = clock_shift(angle(p, q));
            let qd = q as i64;
            assert!(cs.r_pow(qd).eq_phase_exact(&PhaseMatrix::identity(cs.dim()), 0.0));
            assert!(cs.s_pow(qd).eq_phase_exact(&PhaseMatrix::identity(cs.dim()), 0.0));
            // RS = lambda SR, exact
            let rs = cs.r().mul(&cs.s()).unwrap();
            let sr = cs.s().mul(&cs.r()).unwrap();
            assert!(rs.eq_phase_exact(&sr.scale(&ExactScalar::from_phase(cs.lambda())), 0.0));
        }
    }

    #[test]
    fn clock_shift_q2_matches_display() {
        let cs = clock_shift(angle(1, 2));
        let r = cs.r().to_cmatrix();
        assert_eq!(r[(0, 0)], Complex64::new(1.0, 0.0));
        assert!((r[(1, 1)] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let s = cs.s().to_cmatrix();
        assert_eq!(s[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(s[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(s[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn map_t_on_generators() {
        let theta = Theta::rational(1, 3).unwrap();
        let u = TorusElement::generator_u(theta);
        let v = TorusElement::generator_v(theta);
        let su = map_t(&u).unwrap();
        let cs = su.clock_shift().clone();
        assert!(su.coeff(1, 0).eq_phase_exact(&cs.s(), 0.0));
        let sv = map_t(&v).unwrap();
        assert!(sv.coeff(0, 1).eq_phase_exact(&cs.r_pow(-1), 0.0));
        // unital
        let one = map_t(&TorusElement::one(theta)).unwrap();
        assert!(one.coeff(0, 0).eq_phase_exact(&PhaseMatrix::identity(3), 0.0));
    }

    #[test]
    fn exchange_rule_downstairs_phase_exact() {
        let theta = Theta::rational(1, 3).unwrap();
        let u = map_t(&TorusElement::generator_u(theta)).unwrap();
        let v = map_t(&TorusElement::generator_v(theta)).unwrap();
        let uv = u.multiply(&v).unwrap();
        let vu = v.multiply(&u).unwrap();
        let lam = ExactScalar::from_phase(u.clock_shift().lambda());
        assert!(uv.eq_phase_exact(&vu.scale(&lam), 0.0));
    }

    #[test]
    fn homomorphism_against_algebra_multiply() {
        let theta = Theta::rational(2, 5).unwrap();
        let a = TorusElement::monomial(theta, 1, 2, Complex64::new(0.5, 0.25))
            .add(&TorusElement::monomial(theta, -1, 0, Complex64::new(0.0, 1.0)))
            .unwrap();
        let b = TorusElement::monomial(theta, 2, -1, Complex64::new(1.0, -1.0))
            .add(&TorusElement::monomial(theta, 0, 3, Complex64::new(0.3, 0.0)))
            .unwrap();
        let lhs = map_t(&a.multiply(&b).unwrap()).unwrap();
        let rhs = map_t(&a).unwrap().multiply(&map_t(&b).unwrap()).unwrap();
        assert!(lhs.distance(&rhs) <= 1e-12);
        // star goes to pointwise hermitian conjugation
        let lhs = map_t(&a.star()).unwrap();
        let rhs = map_t(&a).unwrap().star();
        assert!(lhs.distance(&rhs) <= 1e-12);
    }

    #[test]
    fn equivariance_of_images_and_counterexample() {
        let theta = Theta::rational(1, 3).unwrap();
        let a = TorusElement::monomial(theta, 1, 1, Complex64::new(1.0, 0.5))
            .add(&TorusElement::monomial(theta, -2, 0, Complex64::new(0.7, 0.0)))
            .unwrap();
        let s = map_t(&a).unwrap();
        assert!(s.is_equivariant(1e-12));
        assert_eq!(s.equivariance_deviation(), 0.0);

        // constant section with matrix S (no z_1 factor) is not equivariant
        let cs = s.clock_shift().clone();
        let mut bad = MatrixLaurentSection::zero(cs.clone());
        bad.add_coeff(0, 0, cs.s());
        assert!(!bad.is_equivariant(1e-12));
        // zero section is
        assert!(MatrixLaurentSection::zero(cs).is_equivariant(0.0));
    }

    #[test]
    fn evaluation_is_pointwise_homomorphism() {
        let theta = Theta::rational(1, 3).unwrap();
        let a = TorusElement::monomial(theta, 1, 0, Complex64::new(1.0, 0.0))
            .add(&TorusElement::monomial(theta, 0, 2, Complex64::new(0.5, 0.5)))
            .unwrap();
        let b = TorusElement::monomial(theta, -1, 1, Complex64::new(0.25, 0.0));
        let sa = map_t(&a).unwrap();
        let sb = map_t(&b).unwrap();
        let sab = map_t(&a.multiply(&b).unwrap()).unwrap();
        // 8q-th roots of unity grid
        let q = 3usize;
        for i in 0..(8 * q) {
            for jj in [0usize, 3, 7, 11] {
                let z1 = Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / (8 * q) as f64);
                let z2 = Complex64::from_polar(1.0, std::f64::consts::TAU * jj as f64 / (8 * q) as f64);
                let lhs = sab.evaluate(z1, z2).unwrap();
                let rhs = sa.evaluate(z1, z2).unwrap() * sb.evaluate(z1, z2).unwrap();
                assert!((lhs - rhs).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-12);
            }
        }
        // evaluate(map_t(U), 1, 1) = S
        let u = map_t(&TorusElement::generator_u(theta)).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let s = u.clock_shift().s().to_cmatrix();
        assert!((u.evaluate(one, one).unwrap() - s).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-15);
        // off-circle rejected
        assert!(u.evaluate(Complex64::new(0.5, 0.0), one).is_err());
    }

    #[test]
    fn covariance_under_kappa_shift() {
        // evaluate at (lambda z1, z2) equals R evaluate(z1,z2) R^{-1} for sections
        let theta = Theta::rational(1, 3).unwrap();
        let a = TorusElement::monomial(theta, 2, 1, Complex64::new(1.0, -0.5));
        let s = map_t(&a).unwrap();
        let lam = s.clock_shift().lambda().value();
        let z1 = Complex64::from_polar(1.0, 0.91);
        let z2 = Complex64::from_polar(1.0, -1.37);
        let lhs = s.evaluate(lam * z1, z2).unwrap();
        let r = s.clock_shift().r().to_cmatrix();
        let rinv = s.clock_shift().r_pow(-1).to_cmatrix();
        let rhs = r * s.evaluate(z1, z2).unwrap() * rinv;
        assert!((lhs - rhs).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn bundle_trace_matches_algebra_trace() {
        let theta = Theta::rational(1, 3).unwrap();
        let one = TorusElement::one(theta);
        assert!((map_t(&one).unwrap().trace_f().unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let umvn = TorusElement::monomial(theta, 2, -1, Complex64::new(1.0, 0.0));
        assert!(map_t(&umvn).unwrap().trace_f().unwrap().norm() < 1e-15);
        let a = TorusElement::monomial(theta, 0, 0, Complex64::new(0.3, 0.7))
            .add(&TorusElement::monomial(theta, 3, 3, Complex64::new(1.0, 0.0)))
            .unwrap()
            .add(&TorusElement::monomial(theta, -1, 2, Complex64::new(0.0, -2.0)))
            .unwrap();
        let lhs = map_t(&a).unwrap().trace_f().unwrap();
        assert!((lhs - a.trace()).norm() <= 1e-13);
        // non-equivariant input rejected
        let cs = clock_shift(angle(1, 3));
        let mut bad = MatrixLaurentSection::zero(cs.clone());
        bad.add_coeff(0, 0, cs.s());
        assert!(bad.trace_f().is_err());
    }

    #[test]
    fn center_iso_examples() {
        let theta = Theta::rational(1, 3).unwrap();
        let uq = TorusElement::monomial(theta, 3, 0, Complex64::new(1.0, 0.0));
        let img = center_iso(&uq).unwrap();
        assert!((img.coeff(3, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        // S^q = identity at mode (q, 0)
        let s = map_t(&uq).unwrap();
        assert!(s.coeff(3, 0).eq_phase_exact(&PhaseMatrix::identity(3), 0.0));
        let one = center_iso(&TorusElement::one(theta)).unwrap();
        assert!((one.coeff(0, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(center_iso(&TorusElement::generator_u(theta)).is_err());
    }

    #[test]
    fn decomposition_round_trips() {
        let theta = Theta::rational(2, 5).unwrap();
        let a = TorusElement::monomial(theta, 4, -2, Complex64::new(0.3, 0.4))
            .add(&TorusElement::monomial(theta, -1, 1, Complex64::new(-1.0, 0.2)))
            .unwrap();
        let s = map_t(&a).unwrap();
        let (coeffs, residual) = s.monomial_decomposition();
        assert!(residual <= 1e-12);
        for (&(m, n), &c) in &coeffs {
            assert!((a.coefficient(m, n) - c).norm() <= 1e-12);
        }
    }
}
