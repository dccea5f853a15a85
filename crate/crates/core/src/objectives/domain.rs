use crate::error::{Error, Result};

/// Axis-aligned box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::InvalidArgument(format!(
                "box bounds must be nonempty and of equal length (got {} and {})",
                lo.len(),
                hi.len()
            )));
        }
        for (i, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if !(l.is_finite() && h.is_finite() && l < h) {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {i}: need finite lo < hi, got [{l}, {h}]"
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self, i: usize) -> f64 {
        self.lo[i]
    }

    pub fn hi(&self, i: usize) -> f64 {
        self.hi[i]
    }

    pub fn width(&self, i: usize) -> f64 {
        self.hi[i] - self.lo[i]
    }

    pub fn clamp(&self, i: usize, v: f64) -> f64 {
        v.clamp(self.lo[i], self.hi[i])
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().enumerate().all(|(i, &v)| v >= self.lo[i] && v <= self.hi[i])
    }

    /// Euclidean projection onto the box.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "point has dimension {}, domain has {}",
                x.len(),
                self.dim()
            )));
        }
        x.iter()
            .enumerate()
            .map(|(i, &v)| {
                if v.is_finite() {
                    Ok(self.clamp(i, v))
                } else {
                    Err(Error::NonFinite(i))
                }
            })
            .collect()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| 0.5 * (l + h)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn projection_examples() {
        let unit = BoxDomain::cube(2, 0.0, 1.0).unwrap();
        assert_eq!(unit.project(&[0.5, 0.5]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(unit.project(&[-0.2, 1.7]).unwrap(), vec![0.0, 1.0]);
        let sym = BoxDomain::cube(1, -1.0, 1.0).unwrap();
        assert_eq!(sym.project(&[-1.0]).unwrap(), vec![-1.0]);
    }

    #[test]
    fn projection_rejects_non_finite() {
        let unit = BoxDomain::cube(2, 0.0, 1.0).unwrap();
        assert!(matches!(unit.project(&[0.1, f64::NAN]), Err(Error::NonFinite(1))));
        assert!(unit.project(&[f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn degenerate_boxes_are_rejected() {
        assert!(BoxDomain::new(vec![0.0], vec![0.0]).is_err());
        assert!(BoxDomain::new(vec![1.0], vec![0.0]).is_err());
        assert!(BoxDomain::new(vec![], vec![]).is_err());
    }

    proptest! {
        #[test]
        fn projection_lands_inside_and_is_idempotent(
            x in prop::collection::vec(-10.0f64..10.0, 3),
        ) {
            let dom = BoxDomain::new(vec![-1.0, 0.0, 2.0], vec![1.0, 0.5, 3.0]).unwrap();
            let p = dom.project(&x).unwrap();
            prop_assert!(dom.contains(&p));
            prop_assert_eq!(dom.project(&p).unwrap(), p);
        }
    }
}
