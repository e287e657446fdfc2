//! Majorization preorders on positive shape vectors.
//!
//! All three relations are evaluated on increasing rearrangements:
//!
//! * `x` majorizes `y` when every prefix sum of `x` is at most the matching
//!   prefix sum of `y` and the totals agree;
//! * weak supermajorization drops the equal-total requirement;
//! * weak submajorization compares suffix sums the other way round.
//!
//! Comparisons carry a relative tolerance of `1e-12 * n` scaled by the
//! larger total.

use crate::error::{ensure_positive, Error, Result};

/// A non-empty vector of strictly positive reals.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeVector(Vec<f64>);

impl ShapeVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Dimension {
                expected: 1,
                found: 0,
            });
        }
        for &e in &entries {
            ensure_positive("entry", e)?;
        }
        Ok(Self(entries))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    fn ascending(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

impl TryFrom<Vec<f64>> for ShapeVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl TryFrom<&[f64]> for ShapeVector {
    type Error = Error;

    fn try_from(v: &[f64]) -> Result<Self> {
        Self::new(v.to_vec())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationResult {
    majorizes: bool,
    weak_super: bool,
    weak_sub: bool,
    partial_sum_slack: Vec<f64>,
}

impl MajorizationResult {
    /// `x` majorizes `y`.
    pub fn majorizes(&self) -> bool {
        self.majorizes
    }

    /// `x` weakly supermajorizes `y` (prefix sums of `x` never exceed `y`'s).
    pub fn weak_super(&self) -> bool {
        self.weak_super
    }

    /// `x` weakly submajorizes `y` (suffix sums of `x` never fall below `y`'s).
    pub fn weak_sub(&self) -> bool {
        self.weak_sub
    }

    /// `sum_{i<=j} y_(i) - sum_{i<=j} x_(i)` for `j = 1..=n`.
    pub fn partial_sum_slack(&self) -> &[f64] {
        &self.partial_sum_slack
    }
}

/// Evaluates all three majorization relations of `x` over `y`.
pub fn compare(x: &ShapeVector, y: &ShapeVector) -> Result<MajorizationResult> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            found: y.len(),
        });
    }
    let n = x.len();
    let xs = x.ascending();
    let ys = y.ascending();

    let prefix = |v: &[f64]| -> Vec<f64> {
        v.iter()
            .scan(0.0, |acc, &e| {
                *acc += e;
                Some(*acc)
            })
            .collect()
    };
    let px = prefix(&xs);
    let py = prefix(&ys);
    let total_x = px[n - 1];
    let total_y = py[n - 1];
    let tol = 1e-12 * n as f64 * total_x.max(total_y);

    let slack: Vec<f64> = py.iter().zip(&px).map(|(b, a)| b - a).collect();
    let weak_super = slack.iter().all(|&s| s >= -tol);
    // suffix sums from position j: total - prefix(j-1)
    let weak_sub = (0..n).all(|j| {
        let sx = total_x - if j == 0 { 0.0 } else { px[j - 1] };
        let sy = total_y - if j == 0 { 0.0 } else { py[j - 1] };
        sx >= sy - tol
    });
    let equal_totals = (total_x - total_y).abs() <= tol;
    let majorizes = equal_totals && slack[..n - 1].iter().all(|&s| s >= -tol);

    Ok(MajorizationResult {
        majorizes,
        weak_super: weak_super || majorizes,
        weak_sub: weak_sub || majorizes,
        partial_sum_slack: slack,
    })
}

/// Nonincreasing with strictly positive entries.
pub fn in_d_plus(x: &[f64]) -> bool {
    x.iter().all(|&e| e > 0.0) && x.windows(2).all(|w| w[0] >= w[1])
}

/// Nondecreasing with strictly positive entries.
pub fn in_e_plus(x: &[f64]) -> bool {
    x.iter().all(|&e| e > 0.0) && x.windows(2).all(|w| w[0] <= w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[f64]) -> ShapeVector {
        ShapeVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn first_counterexample_vectors() {
        let r = compare(&sv(&[6.2, 4.1, 2.0]), &sv(&[5.2, 5.1, 2.0])).unwrap();
        assert!(r.majorizes() && r.weak_super() && r.weak_sub());
        assert!(!compare(&sv(&[5.2, 5.1, 2.0]), &sv(&[6.2, 4.1, 2.0]))
            .unwrap()
            .majorizes());
    }

    #[test]
    fn small_magnitude_vectors() {
        let r = compare(&sv(&[0.005, 0.004, 0.001]), &sv(&[0.0045, 0.0045, 0.001])).unwrap();
        assert!(r.majorizes());
        let r = compare(&sv(&[0.003, 0.004, 0.005]), &sv(&[0.0035, 0.0035, 0.005])).unwrap();
        assert!(r.majorizes());
    }

    #[test]
    fn permutations_majorize_each_other() {
        let a = sv(&[3.0, 1.0, 2.0, 7.5]);
        let b = sv(&[7.5, 2.0, 3.0, 1.0]);
        assert!(compare(&a, &b).unwrap().majorizes());
        assert!(compare(&b, &a).unwrap().majorizes());
    }

    #[test]
    fn weak_relations_without_equal_totals() {
        let r = compare(&sv(&[1.0, 2.0, 3.0]), &sv(&[1.0, 1.0, 1.0])).unwrap();
        assert!(!r.majorizes());
        assert!(r.weak_sub());
        assert!(!r.weak_super());
        assert_eq!(r.partial_sum_slack(), &[0.0, -1.0, -3.0]);
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            compare(&sv(&[1.0, 2.0]), &sv(&[1.0])),
            Err(Error::Dimension {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn rejects_nonpositive_entries() {
        assert!(ShapeVector::new(vec![1.0, 0.0]).is_err());
        assert!(ShapeVector::new(vec![]).is_err());
    }

    #[test]
    fn cones() {
        assert!(in_d_plus(&[6.2, 4.1, 2.0]));
        assert!(!in_d_plus(&[1.0, 2.0, 3.0]));
        assert!(in_d_plus(&[2.0, 2.0, 2.0]));
        assert!(in_e_plus(&[1.0, 2.0, 3.0]));
        assert!(!in_e_plus(&[6.2, 4.1, 2.0]));
        assert!(in_e_plus(&[0.003, 0.004, 0.005]));
        assert!(!in_e_plus(&[0.0, 1.0]));
    }
}
