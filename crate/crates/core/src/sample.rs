//! Seeded random elements of the interval lattice on a rational grid.

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interval::{IntervalSet, StepDensity};
use crate::rank::{fmt_q, q, Q};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of generated sets: up to `max_pieces` intervals with endpoints on
/// the grid `k/den` inside `(0, end]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSampler {
    end: Q,
    den: i64,
    max_pieces: usize,
    slots: i64,
}

impl GridSampler {
    pub fn new(end: Q, den: i64, max_pieces: usize) -> Result<Self> {
        let scaled = &end * Q::from_integer(den.into());
        if den <= 0 || !scaled.is_integer() || scaled <= Q::zero() {
            return Err(Error::Precondition(format!(
                "grid 1/{den} does not tile (0, {}]",
                fmt_q(&end)
            )));
        }
        let slots = scaled
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::Precondition("grid too fine".into()))?;
        Ok(GridSampler {
            end,
            den,
            max_pieces,
            slots,
        })
    }

    pub fn end(&self) -> &Q {
        &self.end
    }

    fn point(&self, k: i64) -> Q {
        q(k, self.den)
    }

    fn piece(&self, rng: &mut SampleRng) -> (Q, Q) {
        let a = rng.gen_range(0..self.slots);
        let b = rng.gen_range(a + 1..=self.slots);
        (self.point(a), self.point(b))
    }

    /// A union of `0..=max_pieces` random grid intervals.
    pub fn set(&self, rng: &mut SampleRng) -> IntervalSet {
        let k = rng.gen_range(0..=self.max_pieces);
        let raw = (0..k).map(|_| self.piece(rng)).collect();
        IntervalSet::normalize(raw).expect("grid pieces are nonempty")
    }

    /// `w < z` with `z = w ∨ u` for random `u`.
    pub fn comparable_pair(&self, rng: &mut SampleRng) -> (IntervalSet, IntervalSet) {
        loop {
            let w = self.set(rng);
            let z = w.join(&self.set(rng));
            if z != w {
                return (w, z);
            }
        }
    }

    /// `w ≤ z` allowing equality.
    pub fn ordered_pair(&self, rng: &mut SampleRng) -> (IntervalSet, IntervalSet) {
        let w = self.set(rng);
        let z = w.join(&self.set(rng));
        (w, z)
    }

    /// A set with `ν = c`, built by cutting random grid pieces at density
    /// breakpoints and spending the mass `c` across them in shuffled order.
    pub fn level_element(
        &self,
        rng: &mut SampleRng,
        f: &StepDensity,
        c: &Q,
    ) -> Result<IntervalSet> {
        if f.end() != &self.end {
            return Err(Error::AmbientMismatch(
                "density and sampler disagree on the ambient".into(),
            ));
        }
        if c > &f.total() || c <= &Q::zero() {
            return Err(Error::Precondition(format!(
                "level {} outside (0, ν(1̂)]",
                fmt_q(c)
            )));
        }
        let mut base = self.set(rng);
        while &f.integrate(&base) < c {
            base = base.join(&IntervalSet::normalize(vec![self.piece(rng)])?);
        }
        let mut cuts: Vec<(Q, Q, Q)> = Vec::new();
        for (a, b) in base.parts() {
            let mut lo = a.clone();
            for (i, v) in f.values().iter().enumerate() {
                let (s, e) = (&f.breakpoints()[i], &f.breakpoints()[i + 1]);
                let hi = if b < e { b.clone() } else { e.clone() };
                if s < b && lo < hi {
                    cuts.push((lo.clone(), hi.clone(), v.clone()));
                    lo = hi;
                }
            }
        }
        cuts.shuffle(rng);
        let mut left = c.clone();
        let mut raw = Vec::new();
        for (a, b, v) in cuts {
            let mass = (&b - &a) * &v;
            if mass < left {
                left -= mass;
                raw.push((a, b));
            } else {
                let stop = &a + &left / &v;
                raw.push((a, stop));
                break;
            }
        }
        IntervalSet::normalize(raw)
    }

    /// A random set whose `ν` differs from `c`.
    pub fn off_level_element(&self, rng: &mut SampleRng, f: &StepDensity, c: &Q) -> IntervalSet {
        loop {
            let u = self.set(rng);
            if &f.integrate(&u) != c {
                return u;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::qi;

    fn two_step() -> StepDensity {
        StepDensity::new(vec![qi(0), qi(1), qi(2)], vec![qi(1), qi(2)]).unwrap()
    }

    #[test]
    fn same_seed_same_sets() {
        let s = GridSampler::new(qi(2), 8, 3).unwrap();
        let (mut a, mut b) = (rng(5), rng(5));
        for _ in 0..20 {
            assert_eq!(s.set(&mut a), s.set(&mut b));
        }
    }

    #[test]
    fn sets_stay_on_the_grid_and_inside() {
        let s = GridSampler::new(qi(2), 8, 4).unwrap();
        let mut r = rng(1);
        for _ in 0..200 {
            let u = s.set(&mut r);
            for x in u.endpoints() {
                assert!(x >= &qi(0) && x <= &qi(2));
                assert!((x * qi(8)).is_integer());
            }
        }
    }

    #[test]
    fn pairs_are_strictly_ordered() {
        let s = GridSampler::new(qi(2), 4, 2).unwrap();
        let mut r = rng(2);
        for _ in 0..100 {
            let (w, z) = s.comparable_pair(&mut r);
            assert!(w.is_subset(&z) && w != z);
        }
    }

    #[test]
    fn level_elements_carry_exact_mass() {
        let f = two_step();
        let s = GridSampler::new(qi(2), 16, 3).unwrap();
        let mut r = rng(3);
        for c in [qi(1), q(1, 3), q(5, 2)] {
            for _ in 0..50 {
                let u = s.level_element(&mut r, &f, &c).unwrap();
                assert_eq!(f.integrate(&u), c);
            }
        }
        assert!(s.level_element(&mut r, &f, &qi(4)).is_err());
        assert!(GridSampler::new(q(1, 3), 2, 1).is_err());
    }
}
