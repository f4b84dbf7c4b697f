//! Seeded random algebra elements for property tests, verification sample
//! sets, and the CLI.

use crate::phase::Theta;
use crate::torus::TorusElement;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random element with modes in the `[-max_deg, max_deg]` box and
/// coefficients of unit scale.
pub fn random_element<R: Rng>(theta: Theta, max_deg: i64, terms: usize, rng: &mut R) -> TorusElement {
    let mut a = TorusElement::zero(theta);
    for _ in 0..terms {
        let m = rng.gen_range(-max_deg..=max_deg);
        let n = rng.gen_range(-max_deg..=max_deg);
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        a = a
            .add(&TorusElement::monomial(theta, m, n, c))
            .expect("same theta");
    }
    a
}

/// Random self-adjoint element (`a + a*` of a random draw).
pub fn random_selfadjoint<R: Rng>(
    theta: Theta,
    max_deg: i64,
    terms: usize,
    rng: &mut R,
) -> TorusElement {
    let a = random_element(theta, max_deg, terms, rng);
    a.add(&a.star()).expect("same theta").scale(Complex64::new(0.5, 0.0))
}

/// Deterministic sample set for verification runs: the generators, a couple
/// of fixed words, and seeded random draws.
pub fn verification_samples(theta: Theta, max_deg: i64, extra: usize, seed: u64) -> Vec<TorusElement> {
    let mut rng = rng_from_seed(seed);
    let mut out = vec![
        TorusElement::generator_u(theta),
        TorusElement::generator_v(theta),
        TorusElement::generator_u(theta)
            .multiply(&TorusElement::generator_v(theta))
            .expect("same theta"),
        TorusElement::monomial(theta, 1, -1, Complex64::new(0.5, -0.25))
            .add(&TorusElement::one(theta))
            .expect("same theta"),
    ];
    for _ in 0..extra {
        out.push(random_element(theta, max_deg, 4, &mut rng));
    }
    out
}
