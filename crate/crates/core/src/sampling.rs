//! Seeded sampling of rational parameters.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Polynomial, Rational};
use crate::stationary::{indeterminacy_locus, make_rational_function, RationalFunction};
use crate::vanishing::{germ_reports, VanishingError};

/// Bound on numerators and denominators of sampled coordinates.
pub const HEIGHT: i64 = 97;

/// Deterministic source of rational samples.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Nonzero rational with numerator in `[-97, 97]` and denominator in `[1, 97]`.
    pub fn nonzero(&mut self) -> Rational {
        loop {
            let n = self.rng.gen_range(-HEIGHT..=HEIGHT);
            if n != 0 {
                let d = self.rng.gen_range(1..=HEIGHT);
                return Rational::new(n.into(), d.into());
            }
        }
    }

    /// Point with both coordinates nonzero.
    pub fn point(&mut self) -> (Rational, Rational) {
        (self.nonzero(), self.nonzero())
    }

    /// Rational in `[-1, 1]` with denominator `97`.
    pub fn unit(&mut self) -> Rational {
        Rational::new(self.rng.gen_range(-HEIGHT..=HEIGHT).into(), HEIGHT.into())
    }

    /// Perturbation of size at most `radius` in each coordinate, not both zero.
    pub fn perturbation(&mut self, radius: &Rational) -> (Rational, Rational) {
        loop {
            let d = (self.unit() * radius, self.unit() * radius);
            if !(d.0.is_zero() && d.1.is_zero()) {
                return d;
            }
        }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Polynomial in `x, y` of degree in `1..=max_deg` with 2 to 4 small integer terms,
    /// one of them of full degree.
    pub fn small_polynomial(&mut self, max_deg: u32) -> Polynomial {
        let deg = self.rng.gen_range(1..=max_deg);
        let nterms = self.rng.gen_range(2..=4);
        let i = self.rng.gen_range(0..=deg);
        let mut terms = vec![(vec![i, deg - i], Rational::from_integer(self.rng.gen_range(1..=5i64).into()))];
        for _ in 1..nterms {
            let d = self.rng.gen_range(0..=deg);
            let i = self.rng.gen_range(0..=d);
            terms.push((vec![i, d - i], Rational::from_integer(self.rng.gen_range(-5..=5i64).into())));
        }
        Polynomial::from_terms(&["x", "y"], terms)
    }

    /// Reduced `P/Q` of degrees at most 4 with nonconstant `Q`, finite indeterminacy locus
    /// and isolated incidence solutions over it.
    pub fn rational_function(&mut self) -> RationalFunction {
        let one = Rational::from_integer(1.into());
        loop {
            let p = self.small_polynomial(4);
            let q = self.small_polynomial(4);
            if q.is_constant() || p.is_zero() {
                continue;
            }
            let Ok(f) = make_rational_function(&p, &q) else { continue };
            if f.reduced || indeterminacy_locus(&f).is_err() {
                continue;
            }
            if germ_reports(&f, &(one.clone(), one.clone())) == Err(VanishingError::NonIsolatedSolution) {
                continue;
            }
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a: Vec<_> = (0..5)
            .map({
                let mut s = Sampler::new(7);
                move |_| s.point()
            })
            .collect();
        let mut s = Sampler::new(7);
        let b: Vec<_> = (0..5).map(|_| s.point()).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|(x, y)| !x.is_zero() && !y.is_zero()));
    }
}
