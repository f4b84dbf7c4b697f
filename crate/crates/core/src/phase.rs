//! Exact arithmetic for roots of unity.
//!
//! Every phase that appears in the rational-torus computations is a power of
//! `lambda = e^{2 pi i p/q}` or of its half/quarter-parameter relatives, so a
//! phase is stored as an integer numerator modulo a grid `N` that is a
//! multiple of `4q`. Multiplying phases is integer addition mod `N`;
//! conversion to `Complex64` is the only lossy step and happens at
//! evaluation/assembly boundaries.

use crate::error::{NctError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rational deformation angle `theta = p/q` with its exact phase grid.
///
/// The grid `N` is a multiple of `4q` so that powers of `lambda` at
/// parameters `theta`, `theta/2` and `theta/4` (the double-covering
/// parameters) all live exactly on one grid or on a refinement of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalAngle {
    p: i64,
    q: i64,
    grid: i64,
}

impl RationalAngle {
    /// Reduced angle `p/q` in `[0, 1)`, grid `N = 4q`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q <= 0 {
            return Err(NctError::InvalidParameter(format!(
                "denominator must be positive, got {q}"
            )));
        }
        let p = p.rem_euclid(q);
        let g = gcd(p, q).max(1);
        let (p, q) = (p / g, q / g);
        Ok(RationalAngle { p, q, grid: 4 * q })
    }

    pub fn zero() -> Self {
        RationalAngle { p: 0, q: 1, grid: 4 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn grid(&self) -> i64 {
        self.grid
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `lambda = e^{2 pi i p/q}` as an exact phase.
    pub fn lambda(&self) -> Phase {
        Phase::new(self.p * (self.grid / self.q), self.grid)
    }

    pub fn lambda_pow(&self, e: i64) -> Phase {
        self.lambda().pow(e)
    }

    pub fn unit_phase(&self) -> Phase {
        Phase::new(0, self.grid)
    }

    /// Covering parameter `theta/2`.
    pub fn half(&self) -> Self {
        Self::new(self.p, 2 * self.q).expect("positive denominator")
    }

    /// Covering parameter `theta/4`.
    pub fn quarter(&self) -> Self {
        Self::new(self.p, 4 * self.q).expect("positive denominator")
    }

    pub fn to_string_frac(&self) -> String {
        format!("{}/{}", self.p, self.q)
    }
}

/// `e^{2 pi i num / modulus}` with exact integer bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase {
    num: i64,
    modulus: i64,
}

impl Phase {
    pub fn new(num: i64, modulus: i64) -> Self {
        debug_assert!(modulus >= 1);
        Phase {
            num: num.rem_euclid(modulus),
            modulus,
        }
    }

    /// The trivial phase on a one-point grid; absorbs into any grid.
    pub fn one() -> Self {
        Phase { num: 0, modulus: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.num == 0
    }

    fn align(a: Self, b: Self) -> (i64, i64, i64) {
        if a.modulus == b.modulus {
            (a.num, b.num, a.modulus)
        } else {
            // rebase both onto the lcm grid
            let g = gcd(a.modulus, b.modulus);
            let l = a.modulus / g * b.modulus;
            (a.num * (l / a.modulus), b.num * (l / b.modulus), l)
        }
    }

    pub fn mul(self, other: Self) -> Self {
        let (x, y, m) = Self::align(self, other);
        Phase::new(x + y, m)
    }

    pub fn inv(self) -> Self {
        Phase::new(-self.num, self.modulus)
    }

    pub fn pow(self, e: i64) -> Self {
        Phase::new((self.num as i128 * e as i128).rem_euclid(self.modulus as i128) as i64, self.modulus)
    }

    /// Express the same phase on a finer grid (target must be a multiple).
    pub fn rebase(self, modulus: i64) -> Result<Self> {
        if modulus % self.modulus != 0 {
            return Err(NctError::InvalidParameter(format!(
                "phase grid {} does not refine {}",
                modulus, self.modulus
            )));
        }
        Ok(Phase::new(self.num * (modulus / self.modulus), modulus))
    }

    pub fn eq_exact(self, other: Self) -> bool {
        let (x, y, _) = Self::align(self, other);
        x == y
    }

    pub fn value(self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.num as f64 / self.modulus as f64)
    }
}

/// Deformation parameter: exact rational or floating irrational.
///
/// All phase bookkeeping is exact in the rational case. In the irrational
/// case phases are folded into floating amplitudes; rational-only operations
/// (matrix realization, centrality) reject it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Theta {
    Rational(RationalAngle),
    Real(f64),
}

impl Theta {
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        Ok(Theta::Rational(RationalAngle::new(p, q)?))
    }

    pub fn value(&self) -> f64 {
        match self {
            Theta::Rational(r) => r.value(),
            Theta::Real(t) => *t,
        }
    }

    pub fn as_rational(&self) -> Result<RationalAngle> {
        match self {
            Theta::Rational(r) => Ok(*r),
            Theta::Real(t) => Err(NctError::IrrationalTheta(*t)),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Theta::Rational(_))
    }

    /// `lambda^e` as an exact-phase scalar (rational) or a floating one.
    pub fn lambda_pow(&self, e: i64) -> ExactScalar {
        match self {
            Theta::Rational(r) => ExactScalar::from_phase(r.lambda_pow(e)),
            Theta::Real(t) => ExactScalar::from_complex(Complex64::from_polar(1.0, TAU * t * e as f64)),
        }
    }

    pub fn half(&self) -> Theta {
        match self {
            Theta::Rational(r) => Theta::Rational(r.half()),
            Theta::Real(t) => Theta::Real(t / 2.0),
        }
    }

    pub fn quarter(&self) -> Theta {
        match self {
            Theta::Rational(r) => Theta::Rational(r.quarter()),
            Theta::Real(t) => Theta::Real(t / 4.0),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Theta::Rational(r) => r.to_string_frac(),
            Theta::Real(t) => format!("{t}"),
        }
    }

    /// Parse "p/q" or a bare float.
    pub fn parse(s: &str) -> Result<Self> {
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad_theta(s))?;
            let q: i64 = q.trim().parse().map_err(|_| bad_theta(s))?;
            return Theta::rational(p, q);
        }
        if let Ok(n) = s.trim().parse::<i64>() {
            return Theta::rational(n, 1);
        }
        let t: f64 = s.trim().parse().map_err(|_| bad_theta(s))?;
        Ok(Theta::Real(t))
    }
}

fn bad_theta(s: &str) -> NctError {
    NctError::InvalidParameter(format!("cannot parse theta from {s:?}"))
}

/// Scalar split as floating amplitude times exact phase.
///
/// Products keep the phase part exact; sums of terms with unequal phases
/// collapse to a pure amplitude (the lossy path).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactScalar {
    pub amp: Complex64,
    pub phase: Phase,
}

impl ExactScalar {
    pub fn new(amp: Complex64, phase: Phase) -> Self {
        ExactScalar { amp, phase }
    }

    pub fn from_phase(phase: Phase) -> Self {
        ExactScalar {
            amp: Complex64::new(1.0, 0.0),
            phase,
        }
    }

    pub fn from_complex(amp: Complex64) -> Self {
        ExactScalar {
            amp,
            phase: Phase::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_complex(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::from_complex(Complex64::new(1.0, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        if self.phase.is_trivial() {
            self.amp
        } else {
            self.amp * self.phase.value()
        }
    }

    pub fn is_zero(&self, threshold: f64) -> bool {
        self.amp.norm() <= threshold
    }

    pub fn mul(&self, other: &Self) -> Self {
        ExactScalar {
            amp: self.amp * other.amp,
            phase: self.phase.mul(other.phase),
        }
    }

    pub fn conj(&self) -> Self {
        ExactScalar {
            amp: self.amp.conj(),
            phase: self.phase.inv(),
        }
    }

    pub fn neg(&self) -> Self {
        ExactScalar {
            amp: -self.amp,
            phase: self.phase,
        }
    }

    /// Addition; exact when the phases agree, otherwise collapses to a
    /// trivial-phase amplitude.
    pub fn add(&self, other: &Self) -> Self {
        if self.phase.eq_exact(other.phase) {
            ExactScalar {
                amp: self.amp + other.amp,
                // keep the representative with the coarser normal form
                phase: self.phase,
            }
        } else if self.amp.norm() == 0.0 {
            *other
        } else if other.amp.norm() == 0.0 {
            *self
        } else {
            ExactScalar::from_complex(self.value() + other.value())
        }
    }

    /// Exact equality of the phase parts plus amplitude agreement to `tol`.
    pub fn eq_phase_exact(&self, other: &Self, tol: f64) -> bool {
        if self.phase.eq_exact(other.phase) {
            (self.amp - other.amp).norm() <= tol
        } else {
            self.amp.norm() <= tol && other.amp.norm() <= tol
        }
    }

    pub fn rebase(self, modulus: i64) -> Result<Self> {
        Ok(ExactScalar {
            amp: self.amp,
            phase: self.phase.rebase(modulus)?,
        })
    }
}
