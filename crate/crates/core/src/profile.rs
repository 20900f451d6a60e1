//! Continuous piecewise-linear functions with exact rational knots.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rank::{fmt_q, Q};

/// One affine piece `y = slope·x + intercept` on `[start, end]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    #[serde(with = "crate::rank::serde_q")]
    pub start: Q,
    #[serde(with = "crate::rank::serde_q")]
    pub end: Q,
    #[serde(with = "crate::rank::serde_q")]
    pub slope: Q,
    #[serde(with = "crate::rank::serde_q")]
    pub intercept: Q,
}

/// A continuous function given by its values at strictly increasing knots,
/// linear in between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinearProfile {
    knots: Vec<(Q, Q)>,
}

impl PiecewiseLinearProfile {
    pub fn from_knots(knots: Vec<(Q, Q)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Precondition(
                "profile needs at least one knot".into(),
            ));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Precondition(
                "profile knots must be strictly increasing".into(),
            ));
        }
        Ok(PiecewiseLinearProfile { knots })
    }

    pub fn knots(&self) -> &[(Q, Q)] {
        &self.knots
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &Q> {
        self.knots.iter().map(|(x, _)| x)
    }

    pub fn domain(&self) -> (&Q, &Q) {
        (&self.knots[0].0, &self.knots[self.knots.len() - 1].0)
    }

    pub fn start_value(&self) -> &Q {
        &self.knots[0].1
    }

    pub fn end_value(&self) -> &Q {
        &self.knots[self.knots.len() - 1].1
    }

    /// `end_value − start_value`.
    pub fn rise(&self) -> Q {
        self.end_value() - self.start_value()
    }

    pub fn pieces(&self) -> Vec<Piece> {
        self.knots
            .windows(2)
            .map(|w| {
                let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
                let slope = (y1 - y0) / (x1 - x0);
                let intercept = y0 - &slope * x0;
                Piece {
                    start: x0.clone(),
                    end: x1.clone(),
                    slope,
                    intercept,
                }
            })
            .collect()
    }

    pub fn slopes(&self) -> Vec<Q> {
        self.pieces().into_iter().map(|p| p.slope).collect()
    }

    pub fn eval(&self, x: &Q) -> Result<Q> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::OutOfRange {
                value: fmt_q(x),
                range: format!("[{}, {}]", fmt_q(lo), fmt_q(hi)),
            });
        }
        let i = self.knots.partition_point(|(k, _)| k < x);
        let (xi, yi) = &self.knots[i];
        if xi == x {
            return Ok(yi.clone());
        }
        let (x0, y0) = &self.knots[i - 1];
        Ok(y0 + (yi - y0) * (x - x0) / (xi - x0))
    }

    pub fn is_weakly_increasing(&self) -> bool {
        self.knots.windows(2).all(|w| w[0].1 <= w[1].1)
    }

    /// Largest `|slope|` over all pieces.
    pub fn lipschitz_constant(&self) -> Q {
        self.slopes()
            .into_iter()
            .map(|s| s.abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Smallest `x` with `f(x) = c`, for a weakly increasing profile.
    pub fn min_preimage(&self, c: &Q) -> Option<Q> {
        let i = self.knots.iter().position(|(_, y)| y >= c)?;
        let (xi, yi) = &self.knots[i];
        if yi == c || i == 0 {
            return (yi == c).then(|| xi.clone());
        }
        let (x0, y0) = &self.knots[i - 1];
        Some(x0 + (c - y0) * (xi - x0) / (yi - y0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::{q, qi};

    fn ramp() -> PiecewiseLinearProfile {
        // 0 on [0,1], slope 2 on [1,2].
        PiecewiseLinearProfile::from_knots(vec![(qi(0), qi(0)), (qi(1), qi(0)), (qi(2), qi(2))])
            .unwrap()
    }

    #[test]
    fn evaluation_interpolates_exactly() {
        let p = ramp();
        assert_eq!(p.eval(&q(3, 2)).unwrap(), qi(1));
        assert_eq!(p.eval(&q(1, 2)).unwrap(), qi(0));
        assert!(p.eval(&qi(3)).is_err());
        assert_eq!(p.slopes(), vec![qi(0), qi(2)]);
        assert_eq!(p.pieces()[1].intercept, qi(-2));
    }

    #[test]
    fn minimal_preimage_skips_plateaus() {
        let p = ramp();
        assert_eq!(p.min_preimage(&qi(0)), Some(qi(0)));
        assert_eq!(p.min_preimage(&qi(1)), Some(q(3, 2)));
        assert_eq!(p.min_preimage(&qi(2)), Some(qi(2)));
        assert_eq!(p.min_preimage(&qi(3)), None);
        assert_eq!(p.min_preimage(&qi(-1)), None);
        let step = PiecewiseLinearProfile::from_knots(vec![
            (qi(0), qi(0)),
            (qi(1), qi(1)),
            (qi(2), qi(1)),
        ])
        .unwrap();
        assert_eq!(step.min_preimage(&qi(1)), Some(qi(1)));
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(PiecewiseLinearProfile::from_knots(vec![(qi(1), qi(0)), (qi(1), qi(1))]).is_err());
        assert!(PiecewiseLinearProfile::from_knots(vec![]).is_err());
    }
}
