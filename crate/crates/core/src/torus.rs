//! Fourier-series model of the smooth noncommutative torus.
//!
//! Elements are finitely supported series `sum a_{mn} U^m V^n` kept in normal
//! order, with the reordering rule `V^n U^r = lambda^{-nr} U^r V^n` applied
//! in exact phase arithmetic.

use crate::error::{NctError, Result};
use crate::phase::{ExactScalar, Phase, Theta};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Amplitudes below this are pruned after arithmetic, keeping supports finite.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Derivation axis: the two commuting infinitesimal torus actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    One,
    Two,
}

/// A finitely supported element of `C^inf(T^2_theta)` in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusElement {
    theta: Theta,
    terms: BTreeMap<(i64, i64), ExactScalar>,
}

impl TorusElement {
    pub fn zero(theta: Theta) -> Self {
        TorusElement {
            theta,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(theta: Theta) -> Self {
        Self::monomial(theta, 0, 0, Complex64::new(1.0, 0.0))
    }

    /// `c * U^m V^n`; a zero coefficient yields the zero element.
    pub fn monomial(theta: Theta, m: i64, n: i64, c: Complex64) -> Self {
        let mut e = Self::zero(theta);
        e.add_term(m, n, ExactScalar::from_complex(c));
        e
    }

    pub fn generator_u(theta: Theta) -> Self {
        Self::monomial(theta, 1, 0, Complex64::new(1.0, 0.0))
    }

    pub fn generator_v(theta: Theta) -> Self {
        Self::monomial(theta, 0, 1, Complex64::new(1.0, 0.0))
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &ExactScalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &(i64, i64)> {
        self.terms.keys()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: i64, n: i64) -> Complex64 {
        self.terms
            .get(&(m, n))
            .map(|s| s.value())
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn coefficient_exact(&self, m: i64, n: i64) -> ExactScalar {
        self.terms.get(&(m, n)).copied().unwrap_or(ExactScalar::zero())
    }

    pub fn add_term(&mut self, m: i64, n: i64, c: ExactScalar) {
        let entry = self
            .terms
            .entry((m, n))
            .or_insert(ExactScalar::zero())
            .add(&c);
        if entry.is_zero(PRUNE_THRESHOLD) {
            self.terms.remove(&(m, n));
        } else {
            self.terms.insert((m, n), entry);
        }
    }

    fn check_theta(&self, other: &Self) -> Result<()> {
        if self.theta == other.theta {
            Ok(())
        } else {
            Err(NctError::ThetaMismatch(
                self.theta.describe(),
                other.theta.describe(),
            ))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        let mut out = self.clone();
        for (&(m, n), c) in &other.terms {
            out.add_term(m, n, *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.scale_exact(ExactScalar::from_complex(c))
    }

    pub fn scale_exact(&self, c: ExactScalar) -> Self {
        let mut out = Self::zero(self.theta);
        for (&(m, n), t) in &self.terms {
            out.add_term(m, n, t.mul(&c));
        }
        out
    }

    /// Normal-ordered product. `(U^m V^n)(U^r V^s) = lambda^{-nr} U^{m+r} V^{n+s}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_theta(other)?;
        let mut out = Self::zero(self.theta);
        for (&(m, n), a) in &self.terms {
            for (&(r, s), b) in &other.terms {
                let swap = self.theta.lambda_pow(-n * r);
                out.add_term(m + r, n + s, a.mul(b).mul(&swap));
            }
        }
        Ok(out)
    }

    /// `(sum a_{mn} U^m V^n)* = sum conj(a_{mn}) lambda^{-mn} U^{-m} V^{-n}`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.theta);
        for (&(m, n), c) in &self.terms {
            let twist = self.theta.lambda_pow(-m * n);
            out.add_term(-m, -n, c.conj().mul(&twist));
        }
        out
    }

    /// The tracial state: coefficient of the unit.
    pub fn trace(&self) -> Complex64 {
        self.coefficient(0, 0)
    }

    /// `<a|b> = t(a* b)`, antilinear in the first slot.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        Ok(self.star().multiply(other)?.trace())
    }

    pub fn norm(&self) -> f64 {
        // nonnegative root of t(a* a)
        self.terms.values().map(|c| c.amp.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Seminorm as printed in the defining condition:
    /// `sup (1+m^2+n^2)^k |a_{mn}|^2`.
    ///
    /// Note the square on `|a_{mn}|`; the conventional Schwartz seminorm
    /// (without the square) is [`TorusElement::seminorm_conventional`].
    pub fn seminorm(&self, k: u32) -> f64 {
        self.terms
            .iter()
            .map(|(&(m, n), c)| {
                (1.0 + (m * m + n * n) as f64).powi(k as i32) * c.amp.norm_sqr()
            })
            .fold(0.0, f64::max)
    }

    /// Schwartz-style variant with `|a_{mn}|` to the first power.
    pub fn seminorm_conventional(&self, k: u32) -> f64 {
        self.terms
            .iter()
            .map(|(&(m, n), c)| (1.0 + (m * m + n * n) as f64).powi(k as i32) * c.amp.norm())
            .fold(0.0, f64::max)
    }

    /// `delta_1(U^m V^n) = i m U^m V^n`, `delta_2(U^m V^n) = i n U^m V^n`.
    pub fn derivation(&self, axis: Axis) -> Self {
        let mut out = Self::zero(self.theta);
        for (&(m, n), c) in &self.terms {
            let factor = match axis {
                Axis::One => Complex64::new(0.0, m as f64),
                Axis::Two => Complex64::new(0.0, n as f64),
            };
            out.add_term(m, n, c.mul(&ExactScalar::from_complex(factor)));
        }
        out
    }

    /// True iff every supported mode has both exponents divisible by `q`.
    pub fn is_central(&self) -> Result<bool> {
        let r = self.theta.as_rational()?;
        let q = r.q();
        Ok(self.terms.keys().all(|&(m, n)| m % q == 0 && n % q == 0))
    }

    /// Exact-phase equality: same support, phase parts equal on a common
    /// grid, amplitudes within `tol`.
    pub fn eq_exact(&self, other: &Self, tol: f64) -> bool {
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|&(m, n)| {
            self.coefficient_exact(m, n)
                .eq_phase_exact(&other.coefficient_exact(m, n), tol)
        })
    }

    /// Max modulus of the coefficient-wise difference.
    pub fn distance(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|&(m, n)| (self.coefficient(m, n) - other.coefficient(m, n)).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|&(m, n)| m.abs().max(n.abs()))
            .max()
            .unwrap_or(0)
    }
}

/// JSON wire format: `{theta, terms: [{m, n, re, im, phase_num, phase_den}]}`.
///
/// Phases round-trip bit-exactly; amplitudes are IEEE doubles.
#[derive(Debug, Serialize, Deserialize)]
pub struct TorusElementJson {
    pub theta: String,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub m: i64,
    pub n: i64,
    pub re: f64,
    pub im: f64,
    pub phase_num: i64,
    pub phase_den: i64,
}

impl TorusElement {
    pub fn to_json(&self) -> TorusElementJson {
        TorusElementJson {
            theta: self.theta.describe(),
            terms: self
                .terms
                .iter()
                .map(|(&(m, n), c)| TermJson {
                    m,
                    n,
                    re: c.amp.re,
                    im: c.amp.im,
                    phase_num: c.phase.num(),
                    phase_den: c.phase.modulus(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &TorusElementJson) -> Result<Self> {
        let theta = Theta::parse(&j.theta)?;
        let mut e = Self::zero(theta);
        for t in &j.terms {
            e.add_term(
                t.m,
                t.n,
                ExactScalar::new(Complex64::new(t.re, t.im), Phase::new(t.phase_num, t.phase_den)),
            );
        }
        Ok(e)
    }
}
