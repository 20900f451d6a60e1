//! `ℝ × ℝ ∪ {0̂, 1̂}` graded by `ρ(a, b) = a + b`.
//!
//! Every element is rank modular, yet meets along the chain `{(0, b)}` are
//! not continuous at `±∞`. The lattice is infinite and exists only for the
//! discontinuity demo; it has no chain enumeration.

use serde::{Deserialize, Serialize};

use crate::lattice::GradedLattice;
use crate::rank::{q, Rank, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductPlanePoint {
    Bottom,
    Pair(
        #[serde(with = "crate::rank::serde_q")] Q,
        #[serde(with = "crate::rank::serde_q")] Q,
    ),
    Top,
}

impl ProductPlanePoint {
    pub fn pair(a: Q, b: Q) -> Self {
        ProductPlanePoint::Pair(a, b)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProductPlane;

impl GradedLattice for ProductPlane {
    type Elem = ProductPlanePoint;

    fn meet(&self, x: &ProductPlanePoint, y: &ProductPlanePoint) -> ProductPlanePoint {
        use ProductPlanePoint::*;
        match (x, y) {
            (Bottom, _) | (_, Bottom) => Bottom,
            (Top, e) | (e, Top) => e.clone(),
            (Pair(a, b), Pair(c, d)) => Pair(a.min(c).clone(), b.min(d).clone()),
        }
    }

    fn join(&self, x: &ProductPlanePoint, y: &ProductPlanePoint) -> ProductPlanePoint {
        use ProductPlanePoint::*;
        match (x, y) {
            (Top, _) | (_, Top) => Top,
            (Bottom, e) | (e, Bottom) => e.clone(),
            (Pair(a, b), Pair(c, d)) => Pair(a.max(c).clone(), b.max(d).clone()),
        }
    }

    fn rank(&self, x: &ProductPlanePoint) -> Rank {
        match x {
            ProductPlanePoint::Bottom => Rank::NegInf,
            ProductPlanePoint::Top => Rank::PosInf,
            ProductPlanePoint::Pair(a, b) => Rank::Finite(a + b),
        }
    }

    fn bottom(&self) -> Option<ProductPlanePoint> {
        Some(ProductPlanePoint::Bottom)
    }

    fn top(&self) -> Option<ProductPlanePoint> {
        Some(ProductPlanePoint::Top)
    }
}

/// Result of scanning `b ↦ ρ((0,b) ∧ (1,0))` upward and
/// `b ↦ ρ((0,b) ∨ (−1,0))` downward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductPlaneDemo {
    /// `(b, ρ((0,b) ∧ (1,0)))` for each scanned `b`.
    pub meet_scan: Vec<(Rank, Rank)>,
    pub meet_sup: Rank,
    /// `ρ(1̂ ∧ (1,0))`.
    pub meet_at_top: Rank,
    /// `(−b, ρ((0,−b) ∨ (−1,0)))` for each scanned `b`.
    pub join_scan: Vec<(Rank, Rank)>,
    pub join_inf: Rank,
    /// `ρ(0̂ ∨ (−1,0))`.
    pub join_at_bottom: Rank,
}

impl ProductPlaneDemo {
    pub fn discontinuous_at_pos_inf(&self) -> bool {
        self.meet_sup != self.meet_at_top
    }

    pub fn discontinuous_at_neg_inf(&self) -> bool {
        self.join_inf != self.join_at_bottom
    }
}

pub fn product_plane_limit_demo(b_values: &[Q]) -> ProductPlaneDemo {
    let l = ProductPlane;
    let zero = q(0, 1);
    let probe = ProductPlanePoint::pair(q(1, 1), zero.clone());
    let dual_probe = ProductPlanePoint::pair(q(-1, 1), zero.clone());
    let meet_scan: Vec<(Rank, Rank)> = b_values
        .iter()
        .map(|b| {
            let c = ProductPlanePoint::pair(zero.clone(), b.clone());
            (Rank::Finite(b.clone()), l.rank(&l.meet(&c, &probe)))
        })
        .collect();
    let join_scan: Vec<(Rank, Rank)> = b_values
        .iter()
        .map(|b| {
            let c = ProductPlanePoint::pair(zero.clone(), -b.clone());
            (Rank::Finite(-b.clone()), l.rank(&l.join(&c, &dual_probe)))
        })
        .collect();
    let meet_sup = meet_scan
        .iter()
        .map(|(_, r)| r.clone())
        .max()
        .unwrap_or(Rank::NegInf);
    let join_inf = join_scan
        .iter()
        .map(|(_, r)| r.clone())
        .min()
        .unwrap_or(Rank::PosInf);
    ProductPlaneDemo {
        meet_scan,
        meet_sup,
        meet_at_top: l.rank(&l.meet(&ProductPlanePoint::Top, &probe)),
        join_scan,
        join_inf,
        join_at_bottom: l.rank(&l.join(&ProductPlanePoint::Bottom, &dual_probe)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rank_modular_defect;
    use crate::rank::qi;

    #[test]
    fn meets_plateau_below_the_top_value() {
        let demo = product_plane_limit_demo(&[qi(1), qi(10), qi(100)]);
        assert!(demo.meet_scan.iter().all(|(_, r)| *r == Rank::zero()));
        assert_eq!(demo.meet_sup, Rank::zero());
        assert_eq!(demo.meet_at_top, Rank::int(1));
        assert!(demo.discontinuous_at_pos_inf());
        assert_eq!(demo.join_inf, Rank::zero());
        assert_eq!(demo.join_at_bottom, Rank::int(-1));
        assert!(demo.discontinuous_at_neg_inf());
    }

    #[test]
    fn negative_b_sits_below_the_plateau() {
        let demo = product_plane_limit_demo(&[q(-5, 2)]);
        assert_eq!(demo.meet_scan[0].1, Rank::ratio(-5, 2));
    }

    #[test]
    fn infinite_extrema_are_rank_modular_without_indeterminate_forms() {
        let l = ProductPlane;
        let x = ProductPlanePoint::pair(qi(3), qi(-2));
        for m in [ProductPlanePoint::Top, ProductPlanePoint::Bottom] {
            assert_eq!(rank_modular_defect(&l, &m, &x).unwrap(), Rank::zero());
        }
        let y = ProductPlanePoint::pair(qi(-1), qi(5));
        assert_eq!(rank_modular_defect(&l, &x, &y).unwrap(), Rank::zero());
    }

    #[test]
    fn json_shape() {
        let p = ProductPlanePoint::pair(q(1, 2), qi(0));
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"pair":["1/2","0/1"]}"#
        );
        assert_eq!(
            serde_json::to_string(&ProductPlanePoint::Top).unwrap(),
            r#""top""#
        );
        let back: ProductPlanePoint = serde_json::from_str(r#"{"pair":["1/2","0/1"]}"#).unwrap();
        assert_eq!(back, p);
    }
}
