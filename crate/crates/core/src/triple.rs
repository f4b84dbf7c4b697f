//! Even real spectral triples over the smooth torus algebra: truncated
//! Fourier bases, operator assembly (representation, Dirac, grading, real
//! structure), axiom verification with extracted KO signs, unitary
//! equivalence checks, and the product construction.
//!
//! Hilbert space model: one basis vector per Fourier mode and spinor slot,
//! `e_{m,n} (x) s` with `s` in `{+, -}`. Slot layout is `2 * mode_index +
//! spinor`, modes in lexicographic order.

use crate::error::{NctError, Result};
use crate::linalg::{
    cone, czero, deviation_norm, hermitian_eigenvalues, hermiticity_deviation, operator_norm,
    restrict_columns, CMatrix,
};
use crate::phase::{ExactScalar, Theta};
use crate::realization::{map_t, MatrixLaurentSection};
use crate::torus::TorusElement;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Fourier modes retained in a finite-dimensional truncation, with an
/// interior sub-box on which operator identities hold without edge loss.
///
/// Matrix identities involving products of assembled operators are exact
/// only on columns whose mode stays inside the box under every intermediate
/// factor; `margin` must cover the total mode displacement of the identity
/// being checked.
#[derive(Debug, Clone)]
pub struct TruncatedBasis {
    theta: Theta,
    modes: Vec<(i64, i64)>,
    index: BTreeMap<(i64, i64), usize>,
    interior: Vec<bool>,
}

impl TruncatedBasis {
    /// Square box `|m|, |n| <= cutoff`; interior `|m|, |n| <= cutoff - margin`.
    pub fn standard(theta: Theta, cutoff: i64, margin: i64) -> Result<Self> {
        if cutoff < 0 || margin < 0 || margin > cutoff {
            return Err(NctError::InvalidParameter(format!(
                "need 0 <= margin <= cutoff, got cutoff={cutoff} margin={margin}"
            )));
        }
        let mut modes = Vec::new();
        let mut interior = Vec::new();
        for m in -cutoff..=cutoff {
            for n in -cutoff..=cutoff {
                modes.push((m, n));
                interior.push(m.abs() <= cutoff - margin && n.abs() <= cutoff - margin);
            }
        }
        Ok(Self::from_modes(theta, modes, interior))
    }

    /// Caller-supplied mode list (used by the spin-structure bases, whose
    /// boxes are shifted so that the adjoint permutes them).
    pub fn from_modes(theta: Theta, modes: Vec<(i64, i64)>, interior: Vec<bool>) -> Self {
        assert_eq!(modes.len(), interior.len());
        let index = modes.iter().enumerate().map(|(i, &mn)| (mn, i)).collect();
        TruncatedBasis {
            theta,
            modes,
            index,
            interior,
        }
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn modes(&self) -> &[(i64, i64)] {
        &self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Hilbert space dimension: two spinor slots per mode.
    pub fn dim(&self) -> usize {
        2 * self.modes.len()
    }

    pub fn mode_index(&self, m: i64, n: i64) -> Option<usize> {
        self.index.get(&(m, n)).copied()
    }

    pub fn slot(&self, mode_idx: usize, spinor: usize) -> usize {
        debug_assert!(spinor < 2);
        2 * mode_idx + spinor
    }

    pub fn is_interior_mode(&self, mode_idx: usize) -> bool {
        self.interior[mode_idx]
    }

    /// Per-slot interior mask, for column restriction.
    pub fn interior_slots(&self) -> Vec<bool> {
        let mut keep = vec![false; self.dim()];
        for (k, &flag) in self.interior.iter().enumerate() {
            keep[self.slot(k, 0)] = flag;
            keep[self.slot(k, 1)] = flag;
        }
        keep
    }

    pub fn interior_count(&self) -> usize {
        self.interior.iter().filter(|f| **f).count()
    }
}

/// Antilinear operator stored by its linear part: `x -> linear * conj(x)`.
#[derive(Debug, Clone)]
pub struct AntilinearOp {
    pub linear: CMatrix,
}

impl AntilinearOp {
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        &self.linear * x.map(|c| c.conj())
    }

    /// Linear part of the square: `A * conj(A)`.
    pub fn square(&self) -> CMatrix {
        &self.linear * self.linear.map(|c| c.conj())
    }

    /// `|| A^dagger A - I ||`; zero iff the operator is antiunitary.
    pub fn antiunitarity_deviation(&self) -> f64 {
        let n = self.linear.ncols();
        deviation_norm(&(self.linear.adjoint() * &self.linear - CMatrix::identity(n, n)), 1e-13)
    }

    /// Linear part of `J b J^{-1}` for a linear operator `b`. Valid when the
    /// operator is antiunitary (inverse taken as the adjoint-conjugate).
    pub fn conjugate(&self, b: &CMatrix) -> CMatrix {
        &self.linear * b.map(|c| c.conj()) * self.linear.adjoint()
    }
}

/// Left regular representation `pi(a) (x) 1_2` on the truncated basis.
/// Output modes falling outside the box are dropped; columns are exact.
pub fn assemble_rep(a: &TorusElement, basis: &TruncatedBasis) -> Result<CMatrix> {
    assemble_mult(a, basis, false)
}

/// Right multiplication `h -> h a`, spinor-diagonal.
pub fn assemble_right_mult(a: &TorusElement, basis: &TruncatedBasis) -> Result<CMatrix> {
    assemble_mult(a, basis, true)
}

fn assemble_mult(a: &TorusElement, basis: &TruncatedBasis, from_right: bool) -> Result<CMatrix> {
    let d = basis.dim();
    let mut out = CMatrix::zeros(d, d);
    for (k, &(bm, bn)) in basis.modes().iter().enumerate() {
        let mono = TorusElement::monomial(basis.theta(), bm, bn, cone());
        let prod = if from_right {
            mono.multiply(a)?
        } else {
            a.multiply(&mono)?
        };
        for (&(rm, rn), c) in prod.terms() {
            if let Some(kk) = basis.mode_index(rm, rn) {
                let v = c.value();
                out[(basis.slot(kk, 0), basis.slot(k, 0))] += v;
                out[(basis.slot(kk, 1), basis.slot(k, 1))] += v;
            }
        }
    }
    Ok(out)
}

/// Dirac operator with a caller-supplied mode weight `(m, n) -> (a, b)`:
/// block `[[0, -a + i b], [-a - i b, 0]]` on each mode. Hermitian, with
/// eigenvalues `+- sqrt(a^2 + b^2)`.
pub fn assemble_dirac_general(
    basis: &TruncatedBasis,
    weight: impl Fn(i64, i64) -> (f64, f64),
) -> CMatrix {
    let d = basis.dim();
    let mut out = CMatrix::zeros(d, d);
    for (k, &(m, n)) in basis.modes().iter().enumerate() {
        let (a, b) = weight(m, n);
        out[(basis.slot(k, 0), basis.slot(k, 1))] = Complex64::new(-a, b);
        out[(basis.slot(k, 1), basis.slot(k, 0))] = Complex64::new(-a, -b);
    }
    out
}

/// Flat Dirac operator of the standard triple: weights are the derivation
/// eigenvalues `(m, n)`.
pub fn assemble_dirac(basis: &TruncatedBasis) -> CMatrix {
    assemble_dirac_general(basis, |m, n| (m as f64, n as f64))
}

/// Grading `+1` on the first spinor slot, `-1` on the second.
pub fn assemble_grading(basis: &TruncatedBasis) -> CMatrix {
    let d = basis.dim();
    CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            if i % 2 == 0 {
                cone()
            } else {
                -cone()
            }
        } else {
            czero()
        }
    })
}

/// Real structure: the adjoint on the algebra factor tensored with charge
/// conjugation on spinors. On the monomial at `(m, n)` the adjoint produces
/// the phase `lambda^{-mn}` and the mode `(-m, -n)`; modes whose negation
/// leaves the box get a zero column.
pub fn real_structure(basis: &TruncatedBasis) -> AntilinearOp {
    let d = basis.dim();
    let mut a = CMatrix::zeros(d, d);
    for (k, &(m, n)) in basis.modes().iter().enumerate() {
        if let Some(kk) = basis.mode_index(-m, -n) {
            let phase = basis.theta().lambda_pow(-(m * n)).value();
            a[(basis.slot(kk, 1), basis.slot(k, 0))] = phase;
            a[(basis.slot(kk, 0), basis.slot(k, 1))] = -phase;
        }
    }
    AntilinearOp { linear: a }
}

/// Representation on the matrix-realization side, for rational `theta`:
/// multiply sections, then read coordinates back through the
/// Hilbert-Schmidt projection onto the monomial fiber matrices. Independent
/// of the upstairs multiplication path.
pub fn matrix_rep(a: &TorusElement, basis: &TruncatedBasis) -> Result<CMatrix> {
    let section = map_t(a)?;
    let cs = section.clock_shift().clone();
    let d = basis.dim();
    let mut out = CMatrix::zeros(d, d);
    for (k, &(bm, bn)) in basis.modes().iter().enumerate() {
        let mono = MatrixLaurentSection::monomial(cs.clone(), bm, bn, ExactScalar::one());
        let prod = section.multiply(&mono)?;
        let (coeffs, residual) = prod.monomial_decomposition();
        if residual > 1e-10 {
            return Err(NctError::NonEquivariant(residual));
        }
        for (&(rm, rn), &c) in &coeffs {
            if let Some(kk) = basis.mode_index(rm, rn) {
                out[(basis.slot(kk, 0), basis.slot(k, 0))] += c;
                out[(basis.slot(kk, 1), basis.slot(k, 1))] += c;
            }
        }
    }
    Ok(out)
}

/// Real structure on the matrix-realization side, built from the section
/// star (pointwise Hermitian conjugation) rather than the upstairs adjoint.
pub fn matrix_real_structure(basis: &TruncatedBasis) -> Result<AntilinearOp> {
    let theta = basis.theta().as_rational()?;
    let cs = crate::realization::clock_shift(theta);
    let d = basis.dim();
    let mut a = CMatrix::zeros(d, d);
    for (k, &(bm, bn)) in basis.modes().iter().enumerate() {
        let mono = MatrixLaurentSection::monomial(cs.clone(), bm, bn, ExactScalar::one());
        let (coeffs, residual) = mono.star().monomial_decomposition();
        if residual > 1e-10 {
            return Err(NctError::NonEquivariant(residual));
        }
        for (&(rm, rn), &c) in &coeffs {
            if let Some(kk) = basis.mode_index(rm, rn) {
                a[(basis.slot(kk, 1), basis.slot(k, 0))] += c;
                a[(basis.slot(kk, 0), basis.slot(k, 1))] -= c;
            }
        }
    }
    Ok(AntilinearOp { linear: a })
}

/// `|| [D, pi(a)] ||` with columns restricted to the interior sub-box.
pub fn commutator_norm(dirac: &CMatrix, rep_a: &CMatrix, basis: &TruncatedBasis) -> f64 {
    let c = dirac * rep_a - rep_a * dirac;
    operator_norm(&restrict_columns(&c, &basis.interior_slots()))
}

/// Eigenvalues of a Hermitian operator; rejects inputs further than `tol`
/// from Hermitian, then symmetrizes.
pub fn spectrum(op: &CMatrix, tol: f64) -> Result<Vec<f64>> {
    let dev = hermiticity_deviation(op);
    if dev > tol {
        return Err(NctError::NonHermitian(dev));
    }
    let sym = (op + op.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(hermitian_eigenvalues(&sym))
}

/// One sign of the KO table, measured rather than assumed: whichever of
/// `lhs = +rhs`, `lhs = -rhs` fits better, with the residual.
fn extract_sign(lhs: &CMatrix, rhs: &CMatrix) -> (i8, f64) {
    let dev_plus = deviation_norm(&(lhs - rhs), 1e-12);
    let dev_minus = deviation_norm(&(lhs + rhs), 1e-12);
    if dev_plus <= dev_minus {
        (1, dev_plus)
    } else {
        (-1, dev_minus)
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct KoSigns {
    pub epsilon: i8,
    pub epsilon_prime: i8,
    pub epsilon_double_prime: i8,
    pub deviations: [f64; 3],
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomReport {
    pub dirac_hermiticity: f64,
    pub grading_squares_to_one: f64,
    pub grading_anticommutes_dirac: f64,
    pub grading_commutes_rep: f64,
    pub j_antiunitarity: f64,
    pub ko: KoSigns,
    pub zeroth_order: f64,
    pub first_order: f64,
    pub max_commutator_norm: f64,
}

impl AxiomReport {
    /// Largest deviation across all checked identities.
    pub fn max_deviation(&self) -> f64 {
        [
            self.dirac_hermiticity,
            self.grading_squares_to_one,
            self.grading_anticommutes_dirac,
            self.grading_commutes_rep,
            self.j_antiunitarity,
            self.ko.deviations[0],
            self.ko.deviations[1],
            self.ko.deviations[2],
            self.zeroth_order,
            self.first_order,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol && self.max_commutator_norm.is_finite()
    }
}

/// Check the even real spectral triple identities on the truncation.
///
/// Commutant and first-order checks restrict to interior columns; the
/// caller's margin must cover the summed mode degree of any sample pair.
pub fn verify_axioms(
    basis: &TruncatedBasis,
    dirac: &CMatrix,
    grading: &CMatrix,
    j: &AntilinearOp,
    rep: &mut dyn FnMut(&TorusElement) -> Result<CMatrix>,
    samples: &[TorusElement],
) -> Result<AxiomReport> {
    let d = basis.dim();
    let eye = CMatrix::identity(d, d);
    let keep = basis.interior_slots();

    let reps: Vec<CMatrix> = samples.iter().map(&mut *rep).collect::<Result<_>>()?;
    let conj_reps: Vec<CMatrix> = reps.iter().map(|b| j.conjugate(b)).collect();

    let grading_commutes_rep = reps
        .iter()
        .map(|p| deviation_norm(&(grading * p - p * grading), 1e-12))
        .fold(0.0, f64::max);

    // KO signs: J^2 = eps, J D = eps' D J, J chi = eps'' chi J
    let (epsilon, dev_e) = extract_sign(&j.square(), &eye);
    let (epsilon_prime, dev_ep) = extract_sign(
        &(&j.linear * dirac.map(|c| c.conj())),
        &(dirac * &j.linear),
    );
    let (epsilon_dp, dev_edp) = extract_sign(
        &(&j.linear * grading.map(|c| c.conj())),
        &(grading * &j.linear),
    );

    let mut zeroth = 0.0f64;
    let mut first = 0.0f64;
    let mut max_comm = 0.0f64;
    for p in &reps {
        let dp = dirac * p - p * dirac;
        max_comm = max_comm.max(operator_norm(&restrict_columns(&dp, &keep)));
        for q in &conj_reps {
            let z = p * q - q * p;
            zeroth = zeroth.max(operator_norm(&restrict_columns(&z, &keep)));
            let f = &dp * q - q * &dp;
            first = first.max(operator_norm(&restrict_columns(&f, &keep)));
        }
    }

    Ok(AxiomReport {
        dirac_hermiticity: hermiticity_deviation(dirac),
        grading_squares_to_one: deviation_norm(&(grading * grading - &eye), 1e-12),
        grading_anticommutes_dirac: deviation_norm(&(grading * dirac + dirac * grading), 1e-12),
        grading_commutes_rep,
        j_antiunitarity: j.antiunitarity_deviation(),
        ko: KoSigns {
            epsilon,
            epsilon_prime,
            epsilon_double_prime: epsilon_dp,
            deviations: [dev_e, dev_ep, dev_edp],
        },
        zeroth_order: zeroth,
        first_order: first,
        max_commutator_norm: max_comm,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct IsoReport {
    pub t_unitarity: f64,
    pub dirac: f64,
    pub grading: f64,
    pub real_structure: f64,
    pub rep: f64,
}

impl IsoReport {
    pub fn max_deviation(&self) -> f64 {
        [
            self.t_unitarity,
            self.dirac,
            self.grading,
            self.real_structure,
            self.rep,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}

/// Check that `t` intertwines two triples: `T D_1 = D_2 T`,
/// `T chi_1 = chi_2 T`, `T J_1 = J_2 T` (as antilinear maps:
/// `T A_1 = A_2 conj(T)`), and `T pi_1(a) = pi_2(a) T` over the samples.
#[allow(clippy::too_many_arguments)]
pub fn verify_isomorphism(
    t: &CMatrix,
    d1: &CMatrix,
    d2: &CMatrix,
    g1: &CMatrix,
    g2: &CMatrix,
    j1: &AntilinearOp,
    j2: &AntilinearOp,
    rep1: &mut dyn FnMut(&TorusElement) -> Result<CMatrix>,
    rep2: &mut dyn FnMut(&TorusElement) -> Result<CMatrix>,
    samples: &[TorusElement],
) -> Result<IsoReport> {
    let n = t.ncols();
    let eye = CMatrix::identity(n, n);
    let mut rep_dev = 0.0f64;
    for a in samples {
        let p1 = rep1(a)?;
        let p2 = rep2(a)?;
        rep_dev = rep_dev.max(deviation_norm(&(t * p1 - p2 * t), 1e-12));
    }
    Ok(IsoReport {
        t_unitarity: deviation_norm(&(t.adjoint() * t - eye), 1e-13),
        dirac: deviation_norm(&(t * d1 - d2 * t), 1e-12),
        grading: deviation_norm(&(t * g1 - g2 * t), 1e-12),
        real_structure: deviation_norm(&(t * &j1.linear - &j2.linear * t.map(|c| c.conj())), 1e-12),
        rep: rep_dev,
    })
}

/// Direct-sum-of-tensor-products data of the product of two even triples.
#[derive(Debug, Clone)]
pub struct ProductTriple {
    /// `D_1 (x) 1 + chi_1 (x) D_2`.
    pub dirac: CMatrix,
    /// `D_1 (x) chi_2 + 1 (x) D_2`; unitarily equivalent to `dirac`.
    pub dirac_alt: CMatrix,
    pub grading: CMatrix,
    pub j: AntilinearOp,
}

pub fn product_triple(
    d1: &CMatrix,
    g1: &CMatrix,
    j1: &AntilinearOp,
    d2: &CMatrix,
    g2: &CMatrix,
    j2: &AntilinearOp,
) -> ProductTriple {
    let i1 = CMatrix::identity(d1.nrows(), d1.ncols());
    let i2 = CMatrix::identity(d2.nrows(), d2.ncols());
    ProductTriple {
        dirac: d1.kronecker(&i2) + g1.kronecker(d2),
        dirac_alt: d1.kronecker(g2) + i1.kronecker(d2),
        grading: g1.kronecker(g2),
        // product of antilinears: linear parts tensor, conjugation shared
        j: AntilinearOp {
            linear: j1.linear.kronecker(&j2.linear),
        },
    }
}
