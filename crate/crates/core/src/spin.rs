//! The four spin structures: double coverings of the torus algebra, parity
//! characters, lifted derivations, the associated Dirac operators, and
//! their rational matrix realizations.
//!
//! Labels `(j, k)` in `{0,1}^2`. For `(0,0)` the covering algebra is two
//! copies of the base algebra with the swap grading; otherwise it is the
//! torus algebra at `theta/2` (one label set) or `theta/4` (both set), with
//! the base embedded by doubling the flagged exponent. The spinor sector is
//! the parity-odd part; its monomials carry covering exponents
//! `(2m+1, n)`, `(m, 2n+1)` or `(2m+1, 2n+1)` over a base mode `(m, n)`.

use crate::error::{NctError, Result};
use crate::linalg::CMatrix;
use crate::phase::Theta;
use crate::torus::{Axis, TorusElement};
use crate::triple::{assemble_dirac_general, AntilinearOp, TruncatedBasis};
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SpinLabel {
    pub j: u8,
    pub k: u8,
}

impl SpinLabel {
    pub fn new(j: u8, k: u8) -> Result<Self> {
        if j > 1 || k > 1 {
            return Err(NctError::InvalidParameter(format!(
                "spin labels are 0 or 1, got ({j},{k})"
            )));
        }
        Ok(SpinLabel { j, k })
    }

    pub fn all() -> [SpinLabel; 4] {
        [
            SpinLabel { j: 0, k: 0 },
            SpinLabel { j: 1, k: 0 },
            SpinLabel { j: 0, k: 1 },
            SpinLabel { j: 1, k: 1 },
        ]
    }

    pub fn is_trivial(&self) -> bool {
        self.j == 0 && self.k == 0
    }

    /// Deformation parameter of the covering algebra.
    pub fn covering_theta(&self, theta: Theta) -> Theta {
        match (self.j, self.k) {
            (0, 0) => theta,
            (1, 0) | (0, 1) => theta.half(),
            _ => theta.quarter(),
        }
    }

    /// Covering exponents of the embedded base monomial `(m, n)`.
    pub fn embedded_exponents(&self, m: i64, n: i64) -> (i64, i64) {
        (
            if self.j == 1 { 2 * m } else { m },
            if self.k == 1 { 2 * n } else { n },
        )
    }

    /// Covering exponents of the odd-sector basis monomial over base mode
    /// `(m, n)`.
    pub fn odd_exponents(&self, m: i64, n: i64) -> (i64, i64) {
        (
            if self.j == 1 { 2 * m + 1 } else { m },
            if self.k == 1 { 2 * n + 1 } else { n },
        )
    }

    /// Inverse of [`Self::odd_exponents`]; `None` when the covering mode is
    /// not in the odd sector's image.
    pub fn base_mode(&self, cm: i64, cn: i64) -> Option<(i64, i64)> {
        let m = if self.j == 1 {
            if cm.rem_euclid(2) != 1 {
                return None;
            }
            (cm - 1) / 2
        } else {
            cm
        };
        let n = if self.k == 1 {
            if cn.rem_euclid(2) != 1 {
                return None;
            }
            (cn - 1) / 2
        } else {
            cn
        };
        Some((m, n))
    }

    /// Mode weights seen by the Dirac operator: `(m + j/2, n + k/2)`.
    pub fn dirac_weight(&self, m: i64, n: i64) -> (f64, f64) {
        (
            m as f64 + self.j as f64 / 2.0,
            n as f64 + self.k as f64 / 2.0,
        )
    }
}

/// Element of the covering algebra. `Pair` is the `(0,0)` case (two copies
/// with the swap grading); `Single` lives over `theta/2` or `theta/4`.
#[derive(Debug, Clone)]
pub enum CoveringElement {
    Single(TorusElement),
    Pair(TorusElement, TorusElement),
}

impl CoveringElement {
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (CoveringElement::Single(a), CoveringElement::Single(b)) => {
                Ok(CoveringElement::Single(a.multiply(b)?))
            }
            (CoveringElement::Pair(a1, a2), CoveringElement::Pair(b1, b2)) => Ok(
                CoveringElement::Pair(a1.multiply(b1)?, a2.multiply(b2)?),
            ),
            _ => Err(NctError::InvalidParameter(
                "covering elements of different shapes".into(),
            )),
        }
    }

    pub fn star(&self) -> Self {
        match self {
            CoveringElement::Single(a) => CoveringElement::Single(a.star()),
            CoveringElement::Pair(a, b) => CoveringElement::Pair(a.star(), b.star()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (CoveringElement::Single(a), CoveringElement::Single(b)) => {
                Ok(CoveringElement::Single(a.add(b)?))
            }
            (CoveringElement::Pair(a1, a2), CoveringElement::Pair(b1, b2)) => {
                Ok(CoveringElement::Pair(a1.add(b1)?, a2.add(b2)?))
            }
            _ => Err(NctError::InvalidParameter(
                "covering elements of different shapes".into(),
            )),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        match self {
            CoveringElement::Single(a) => CoveringElement::Single(a.scale(c)),
            CoveringElement::Pair(a, b) => CoveringElement::Pair(a.scale(c), b.scale(c)),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        match (self, other) {
            (CoveringElement::Single(a), CoveringElement::Single(b)) => a.distance(b),
            (CoveringElement::Pair(a1, a2), CoveringElement::Pair(b1, b2)) => {
                a1.distance(b1).max(a2.distance(b2))
            }
            _ => f64::INFINITY,
        }
    }
}

/// Parity involution of the covering algebra: the swap for `(0,0)`, the
/// character `(-1)^{jm + kn... }` on covering monomials otherwise
/// (exponent-flag product for `(1,1)`). Embedded elements are even; spinor
/// monomials are odd.
pub fn parity(x: &CoveringElement, label: SpinLabel) -> CoveringElement {
    match x {
        CoveringElement::Pair(a, b) => CoveringElement::Pair(b.clone(), a.clone()),
        CoveringElement::Single(a) => {
            let mut out = TorusElement::zero(a.theta());
            for (&(m, n), c) in a.terms() {
                let sign = match (label.j, label.k) {
                    (1, 0) => m,
                    (0, 1) => n,
                    (1, 1) => m * n,
                    _ => 0,
                };
                let c = if sign.rem_euclid(2) == 1 { c.neg() } else { *c };
                out.add_term(m, n, c);
            }
            CoveringElement::Single(out)
        }
    }
}

/// Embed the base algebra into the covering: diagonally for `(0,0)`, by
/// doubling the flagged exponents otherwise. A star-homomorphism.
pub fn embed(a: &TorusElement, label: SpinLabel) -> Result<CoveringElement> {
    if label.is_trivial() {
        return Ok(CoveringElement::Pair(a.clone(), a.clone()));
    }
    let up_theta = label.covering_theta(a.theta());
    let mut out = TorusElement::zero(up_theta);
    for (&(m, n), c) in a.terms() {
        let (cm, cn) = label.embedded_exponents(m, n);
        out.add_term(cm, cn, rebased(*c, up_theta)?);
    }
    Ok(CoveringElement::Single(out))
}

/// Spinor-sector monomial over base mode `(m, n)` with coefficient `c`.
pub fn odd_monomial(theta: Theta, label: SpinLabel, m: i64, n: i64, c: Complex64) -> CoveringElement {
    if label.is_trivial() {
        let a = TorusElement::monomial(theta, m, n, c);
        let b = a.scale(Complex64::new(-1.0, 0.0));
        return CoveringElement::Pair(a, b);
    }
    let (cm, cn) = label.odd_exponents(m, n);
    CoveringElement::Single(TorusElement::monomial(
        label.covering_theta(theta),
        cm,
        cn,
        c,
    ))
}

fn rebased(c: crate::phase::ExactScalar, up_theta: Theta) -> Result<crate::phase::ExactScalar> {
    match up_theta {
        // covering grid is a multiple of the base grid
        Theta::Rational(r) => c.rebase(r.grid()),
        Theta::Real(_) => Ok(crate::phase::ExactScalar::from_complex(c.value())),
    }
}

/// Lifted derivation `(1/2)^{j or k}` times the covering derivation; makes
/// the square
/// `embed . derivation = lifted_derivation . embed` commute.
pub fn lifted_derivation(x: &CoveringElement, axis: Axis, label: SpinLabel) -> CoveringElement {
    let halve = match axis {
        Axis::One => label.j == 1,
        Axis::Two => label.k == 1,
    };
    let d = match x {
        CoveringElement::Single(a) => CoveringElement::Single(a.derivation(axis)),
        CoveringElement::Pair(a, b) => {
            CoveringElement::Pair(a.derivation(axis), b.derivation(axis))
        }
    };
    if halve {
        d.scale(Complex64::new(0.5, 0.0))
    } else {
        d
    }
}

/// Spinor-sector coordinates of a covering element, keyed by base modes.
/// For `(0,0)` expects the antidiagonal form `(a, -a)`; otherwise every
/// covering mode must sit in the odd sector.
pub fn to_base_modes(
    x: &CoveringElement,
    label: SpinLabel,
) -> Result<BTreeMap<(i64, i64), Complex64>> {
    let mut out = BTreeMap::new();
    match x {
        CoveringElement::Pair(a, b) => {
            if a.distance(&b.scale(Complex64::new(-1.0, 0.0))) > 1e-12 {
                return Err(NctError::InvalidParameter(
                    "not in the odd sector of the trivial covering".into(),
                ));
            }
            for (&(m, n), c) in a.terms() {
                out.insert((m, n), c.value());
            }
        }
        CoveringElement::Single(a) => {
            for (&(cm, cn), c) in a.terms() {
                let (m, n) = label.base_mode(cm, cn).ok_or_else(|| {
                    NctError::InvalidParameter(format!(
                        "covering mode ({cm},{cn}) outside the odd sector"
                    ))
                })?;
                out.insert((m, n), c.value());
            }
        }
    }
    Ok(out)
}

/// Base-mode box for the spin triple. Along a flagged direction the box is
/// `[-cutoff, cutoff - 1]`, so that the covering adjoint
/// (`m -> -m - 1` on base modes) permutes it.
pub fn spin_basis(theta: Theta, label: SpinLabel, cutoff: i64, margin: i64) -> Result<TruncatedBasis> {
    if cutoff < 1 || margin < 0 || margin >= cutoff {
        return Err(NctError::InvalidParameter(format!(
            "need 0 <= margin < cutoff, cutoff >= 1, got cutoff={cutoff} margin={margin}"
        )));
    }
    let range = |flag: u8| {
        if flag == 1 {
            -cutoff..=(cutoff - 1)
        } else {
            -cutoff..=cutoff
        }
    };
    let inner = |flag: u8, v: i64| {
        if flag == 1 {
            v >= -cutoff + margin && v <= cutoff - 1 - margin
        } else {
            v.abs() <= cutoff - margin
        }
    };
    let mut modes = Vec::new();
    let mut interior = Vec::new();
    for m in range(label.j) {
        for n in range(label.k) {
            modes.push((m, n));
            interior.push(inner(label.j, m) && inner(label.k, n));
        }
    }
    Ok(TruncatedBasis::from_modes(theta, modes, interior))
}

/// Representation on the spinor sector: multiply by the embedded element
/// upstairs, read coordinates back along base modes. Spinor-diagonal.
pub fn assemble_spin_rep(
    a: &TorusElement,
    basis: &TruncatedBasis,
    label: SpinLabel,
) -> Result<CMatrix> {
    let up = embed(a, label)?;
    let d = basis.dim();
    let mut out = CMatrix::zeros(d, d);
    for (k, &(bm, bn)) in basis.modes().iter().enumerate() {
        let x = odd_monomial(basis.theta(), label, bm, bn, Complex64::new(1.0, 0.0));
        let prod = up.multiply(&x)?;
        for ((rm, rn), v) in to_base_modes(&prod, label)? {
            if let Some(kk) = basis.mode_index(rm, rn) {
                out[(basis.slot(kk, 0), basis.slot(k, 0))] += v;
                out[(basis.slot(kk, 1), basis.slot(k, 1))] += v;
            }
        }
    }
    Ok(out)
}

/// Dirac operator assembled from the lifted derivations (the weights are
/// extracted from their action, not hard-coded).
pub fn assemble_spin_dirac(basis: &TruncatedBasis, label: SpinLabel) -> Result<CMatrix> {
    let mut weights: BTreeMap<(i64, i64), (f64, f64)> = BTreeMap::new();
    for &(m, n) in basis.modes() {
        let x = odd_monomial(basis.theta(), label, m, n, Complex64::new(1.0, 0.0));
        let mut w = [0.0f64; 2];
        for (slot, axis) in [(0usize, Axis::One), (1usize, Axis::Two)] {
            let dx = lifted_derivation(&x, axis, label);
            let coeffs = to_base_modes(&dx, label)?;
            // derivations are diagonal on monomials: i * weight * x
            let c = coeffs.get(&(m, n)).copied().unwrap_or_default();
            if coeffs.len() > 1 || c.re.abs() > 1e-13 {
                return Err(NctError::InvalidParameter(
                    "lifted derivation is not diagonal on spinor monomials".into(),
                ));
            }
            w[slot] = c.im;
        }
        weights.insert((m, n), (w[0], w[1]));
    }
    Ok(assemble_dirac_general(basis, |m, n| weights[&(m, n)]))
}

/// Closed-form Dirac spectrum on the same box:
/// `+- sqrt((m + j/2)^2 + (n + k/2)^2)` over the base modes, ascending.
pub fn spectrum_formula(basis: &TruncatedBasis, label: SpinLabel) -> Vec<f64> {
    let mut out = Vec::with_capacity(basis.dim());
    for &(m, n) in basis.modes() {
        let (a, b) = label.dirac_weight(m, n);
        let r = (a * a + b * b).sqrt();
        out.push(r);
        out.push(-r);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Real structure from the covering adjoint on the spinor sector, tensored
/// with charge conjugation on spinor slots.
pub fn spin_real_structure(basis: &TruncatedBasis, label: SpinLabel) -> Result<AntilinearOp> {
    let d = basis.dim();
    let mut a = CMatrix::zeros(d, d);
    for (k, &(bm, bn)) in basis.modes().iter().enumerate() {
        let x = odd_monomial(basis.theta(), label, bm, bn, Complex64::new(1.0, 0.0));
        for ((rm, rn), v) in to_base_modes(&x.star(), label)? {
            if let Some(kk) = basis.mode_index(rm, rn) {
                a[(basis.slot(kk, 1), basis.slot(k, 0))] += v;
                a[(basis.slot(kk, 0), basis.slot(k, 1))] -= v;
            }
        }
    }
    Ok(AntilinearOp { linear: a })
}

/// Literal fiber dimension of the rational realization: `q`, `2q`, `2q`,
/// `4q` for the four labels (kept literal even when the covering angle
/// reduces).
pub fn fiber_dimension(theta: Theta, label: SpinLabel) -> Result<usize> {
    let q = theta.as_rational()?.q() as usize;
    Ok(match (label.j, label.k) {
        (0, 0) => q,
        (1, 1) => 4 * q,
        _ => 2 * q,
    })
}

/// Clock/shift pair of the covering realization, at the literal dimension
/// and the unreduced unit phase `p / (fiber dim)`.
pub fn covering_clock_shift(theta: Theta, label: SpinLabel) -> Result<crate::realization::ClockShiftPair> {
    let r = theta.as_rational()?;
    let dim = fiber_dimension(theta, label)?;
    Ok(crate::realization::ClockShiftPair::with_dim(
        dim,
        crate::phase::Phase::new(r.p(), dim as i64),
    ))
}

/// Representation through the covering matrix realization: embedded
/// sections act on odd-sector monomial sections; coordinates are read back
/// by Hilbert-Schmidt projection in the literal fiber. Rational `theta`
/// only.
pub fn spin_matrix_rep(
    a: &TorusElement,
    basis: &TruncatedBasis,
    label: SpinLabel,
) -> Result<CMatrix> {
    use crate::phase::ExactScalar;
    use crate::realization::MatrixLaurentSection;
    let cs = covering_clock_shift(basis.theta(), label)?;
    // embedded section of a
    let mut sec = MatrixLaurentSection::zero(cs.clone());
    for (&(m, n), c) in a.terms() {
        let (cm, cn) = label.embedded_exponents(m, n);
        sec.add_coeff(cm, cn, cs.monomial_matrix(cm, cn).scale(&ExactScalar::from_complex(c.value())));
    }
    let d = basis.dim();
    let mut out = CMatrix::zeros(d, d);
    for (k, &(bm, bn)) in basis.modes().iter().enumerate() {
        let (cm, cn) = label.odd_exponents(bm, bn);
        let mono = MatrixLaurentSection::monomial(cs.clone(), cm, cn, ExactScalar::one());
        let prod = sec.multiply(&mono)?;
        let (coeffs, residual) = prod.monomial_decomposition();
        if residual > 1e-10 {
            return Err(NctError::NonEquivariant(residual));
        }
        for (&(rm, rn), &c) in &coeffs {
            if let Some((m, n)) = label.base_mode(rm, rn) {
                if let Some(kk) = basis.mode_index(m, n) {
                    out[(basis.slot(kk, 0), basis.slot(k, 0))] += c;
                    out[(basis.slot(kk, 1), basis.slot(k, 1))] += c;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{deviation_norm, max_pairwise_deviation, operator_norm, restrict_columns};
    use crate::sample::{random_element, rng_from_seed, verification_samples};
    use crate::triple::{assemble_grading, assemble_rep, spectrum, verify_axioms, verify_isomorphism};

    fn thetas() -> Vec<Theta> {
        vec![
            Theta::rational(0, 1).unwrap(),
            Theta::rational(1, 3).unwrap(),
            Theta::rational(2, 5).unwrap(),
        ]
    }

    #[test]
    fn embedding_is_star_homomorphism() {
        for theta in thetas() {
            for label in SpinLabel::all() {
                let mut rng = rng_from_seed(17);
                let a = random_element(theta, 3, 4, &mut rng);
                let b = random_element(theta, 3, 4, &mut rng);
                let lhs = embed(&a.multiply(&b).unwrap(), label).unwrap();
                let rhs = embed(&a, label)
                    .unwrap()
                    .multiply(&embed(&b, label).unwrap())
                    .unwrap();
                assert!(lhs.distance(&rhs) <= 1e-12, "{label:?}");
                let lhs = embed(&a.star(), label).unwrap();
                let rhs = embed(&a, label).unwrap().star();
                assert!(lhs.distance(&rhs) <= 1e-12, "{label:?}");
            }
        }
    }

    #[test]
    fn derivation_diagram_commutes() {
        for theta in [Theta::rational(1, 3).unwrap(), Theta::Real(0.3f64.sqrt())] {
            for label in SpinLabel::all() {
                let a = random_element(theta, 3, 5, &mut rng_from_seed(23));
                for axis in [Axis::One, Axis::Two] {
                    let lhs = embed(&a.derivation(axis), label).unwrap();
                    let rhs = lifted_derivation(&embed(&a, label).unwrap(), axis, label);
                    assert!(lhs.distance(&rhs) <= 1e-12, "{label:?} {axis:?}");
                }
            }
        }
    }

    #[test]
    fn parity_grades_the_covering() {
        let theta = Theta::rational(1, 3).unwrap();
        for label in SpinLabel::all() {
            let a = random_element(theta, 2, 4, &mut rng_from_seed(5));
            let up = embed(&a, label).unwrap();
            assert!(parity(&up, label).distance(&up) <= 1e-13, "{label:?}");
            let x = odd_monomial(theta, label, 1, -2, Complex64::new(0.4, 0.7));
            assert!(
                parity(&x, label)
                    .distance(&x.scale(Complex64::new(-1.0, 0.0)))
                    <= 1e-13,
                "{label:?}"
            );
            // odd times odd is even and reaches the unit
            let y = x.multiply(&x.star()).unwrap();
            assert!(parity(&y, label).distance(&y) <= 1e-13);
            let unit_coeff = to_base_modes_even_unit(&y);
            assert!((unit_coeff.norm() - x_norm_sq()).abs() <= 1e-12, "{label:?}");
        }
    }

    fn x_norm_sq() -> f64 {
        Complex64::new(0.4, 0.7).norm_sqr()
    }

    fn to_base_modes_even_unit(y: &CoveringElement) -> Complex64 {
        match y {
            CoveringElement::Single(a) => a.coefficient(0, 0),
            CoveringElement::Pair(a, _) => a.coefficient(0, 0),
        }
    }

    #[test]
    fn dirac_spectra_match_closed_form_and_are_theta_independent() {
        let mut reference: Option<[Vec<f64>; 4]> = None;
        for theta in thetas() {
            let mut all = Vec::new();
            for label in SpinLabel::all() {
                let basis = spin_basis(theta, label, 3, 1).unwrap();
                let d = assemble_spin_dirac(&basis, label).unwrap();
                let got = spectrum(&d, 1e-12).unwrap();
                let want = spectrum_formula(&basis, label);
                assert!(max_pairwise_deviation(&got, &want) <= 1e-12, "{label:?}");
                all.push(got);
            }
            let all: [Vec<f64>; 4] = all.try_into().unwrap();
            if let Some(prev) = &reference {
                for i in 0..4 {
                    assert!(max_pairwise_deviation(&prev[i], &all[i]) <= 1e-12);
                }
            } else {
                reference = Some(all);
            }
        }
    }

    #[test]
    fn trivial_label_reduces_to_standard_triple() {
        let theta = Theta::rational(1, 3).unwrap();
        let label = SpinLabel::new(0, 0).unwrap();
        let basis = spin_basis(theta, label, 3, 2).unwrap();
        let a = random_element(theta, 1, 4, &mut rng_from_seed(2));
        let lhs = assemble_spin_rep(&a, &basis, label).unwrap();
        let rhs = assemble_rep(&a, &basis).unwrap();
        assert!(deviation_norm(&(lhs - rhs), 1e-13) <= 1e-13);
        let d = assemble_spin_dirac(&basis, label).unwrap();
        let d_std = crate::triple::assemble_dirac(&basis);
        assert!(deviation_norm(&(d - d_std), 1e-13) <= 1e-13);
        let j = spin_real_structure(&basis, label).unwrap();
        let j_std = crate::triple::real_structure(&basis);
        assert!(deviation_norm(&(&j.linear - &j_std.linear), 1e-13) <= 1e-13);
    }

    #[test]
    fn axioms_hold_for_all_labels() {
        let theta = Theta::rational(1, 3).unwrap();
        for label in SpinLabel::all() {
            let basis = spin_basis(theta, label, 4, 3).unwrap();
            let d = assemble_spin_dirac(&basis, label).unwrap();
            let g = assemble_grading(&basis);
            let j = spin_real_structure(&basis, label).unwrap();
            let samples = verification_samples(theta, 1, 2, 31);
            let mut rep = |a: &TorusElement| assemble_spin_rep(a, &basis, label);
            let report = verify_axioms(&basis, &d, &g, &j, &mut rep, &samples).unwrap();
            assert!(report.passes(1e-12), "{label:?}: {report:?}");
            assert_eq!(
                (
                    report.ko.epsilon,
                    report.ko.epsilon_prime,
                    report.ko.epsilon_double_prime
                ),
                (-1, 1, -1),
                "{label:?}"
            );
        }
    }

    #[test]
    fn structures_are_mutually_distinct() {
        let theta = Theta::rational(1, 3).unwrap();
        let spec = |label: SpinLabel| {
            let basis = spin_basis(theta, label, 3, 0).unwrap();
            spectrum(&assemble_spin_dirac(&basis, label).unwrap(), 1e-12).unwrap()
        };
        let s00 = spec(SpinLabel::new(0, 0).unwrap());
        let s10 = spec(SpinLabel::new(1, 0).unwrap());
        let s01 = spec(SpinLabel::new(0, 1).unwrap());
        let s11 = spec(SpinLabel::new(1, 1).unwrap());
        // only the trivial structure has a kernel; only (1,1) starts at 1/sqrt(2)
        assert!(s00.iter().any(|x| x.abs() < 1e-12));
        for s in [&s10, &s01, &s11] {
            assert!(s.iter().all(|x| x.abs() > 0.49));
        }
        assert!(s11.iter().all(|x| x.abs() > 0.7));
        // (1,0) and (0,1) are isospectral but differ in which derivation
        // carries half-integer weights
        assert!(max_pairwise_deviation(&s10, &s01) <= 1e-12);
        let b10 = spin_basis(theta, SpinLabel::new(1, 0).unwrap(), 3, 0).unwrap();
        let b01 = spin_basis(theta, SpinLabel::new(0, 1).unwrap(), 3, 0).unwrap();
        let w10: Vec<f64> = b10
            .modes()
            .iter()
            .map(|&(m, n)| SpinLabel::new(1, 0).unwrap().dirac_weight(m, n).0)
            .collect();
        let w01: Vec<f64> = b01
            .modes()
            .iter()
            .map(|&(m, n)| SpinLabel::new(0, 1).unwrap().dirac_weight(m, n).0)
            .collect();
        assert!(w10.iter().all(|w| (w - w.round()).abs() > 0.4));
        assert!(w01.iter().all(|w| (w - w.round()).abs() < 1e-12));
    }

    #[test]
    fn covering_realization_relations_are_exact() {
        let theta = Theta::rational(2, 5).unwrap();
        for label in [SpinLabel::new(1, 0).unwrap(), SpinLabel::new(1, 1).unwrap()] {
            let cs = covering_clock_shift(theta, label).unwrap();
            let dim = fiber_dimension(theta, label).unwrap();
            assert_eq!(cs.dim(), dim);
            let rs = cs.r().mul(&cs.s()).unwrap();
            let sr = cs.s().mul(&cs.r()).unwrap();
            let lam = crate::phase::ExactScalar::from_phase(cs.lambda());
            assert!(rs.eq_phase_exact(&sr.scale(&lam), 0.0));
            // squared generators reproduce the base exchange phase
            let u2 = cs.s_pow(2);
            let v1 = cs.r_pow(-1);
            let uv = u2.mul(&v1).unwrap();
            let vu = v1.mul(&u2).unwrap();
            let base_lam = crate::phase::ExactScalar::from_phase(cs.lambda().pow(2));
            assert!(uv.eq_phase_exact(&vu.scale(&base_lam), 0.0));
        }
    }

    #[test]
    fn matrix_realization_intertwines_rep_and_dirac() {
        for theta in [Theta::rational(1, 2).unwrap(), Theta::rational(1, 3).unwrap()] {
            for label in SpinLabel::all() {
                if label.is_trivial() {
                    continue;
                }
                let basis = spin_basis(theta, label, 3, 2).unwrap();
                let d = assemble_spin_dirac(&basis, label).unwrap();
                let g = assemble_grading(&basis);
                let j = spin_real_structure(&basis, label).unwrap();
                let t = CMatrix::identity(basis.dim(), basis.dim());
                let samples = verification_samples(theta, 1, 2, 13);
                let mut r1 = |a: &TorusElement| assemble_spin_rep(a, &basis, label);
                let mut r2 = |a: &TorusElement| spin_matrix_rep(a, &basis, label);
                let report = verify_isomorphism(
                    &t, &d, &d, &g, &g, &j, &j, &mut r1, &mut r2, &samples,
                )
                .unwrap();
                assert!(report.passes(1e-10), "{label:?}: {report:?}");
            }
        }
    }

    #[test]
    fn spin_rep_is_homomorphism_on_interior() {
        let theta = Theta::rational(1, 3).unwrap();
        for label in SpinLabel::all() {
            let basis = spin_basis(theta, label, 4, 2).unwrap();
            let mut rng = rng_from_seed(9);
            let a = random_element(theta, 1, 3, &mut rng);
            let b = random_element(theta, 1, 3, &mut rng);
            let pa = assemble_spin_rep(&a, &basis, label).unwrap();
            let pb = assemble_spin_rep(&b, &basis, label).unwrap();
            let pab = assemble_spin_rep(&a.multiply(&b).unwrap(), &basis, label).unwrap();
            let dev = operator_norm(&restrict_columns(&(pa * pb - pab), &basis.interior_slots()));
            assert!(dev <= 1e-12, "{label:?}");
        }
    }
}
