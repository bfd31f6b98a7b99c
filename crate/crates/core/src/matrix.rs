use std::fmt;
use std::ops::Mul;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, q, qstr, Q};
use crate::stability::ChargeValue;

/// Row-major `[[m11, m12], [m21, m22]]`, acting on `(Re, Im)` column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mat2 {
    #[serde(with = "qstr")]
    pub m11: Q,
    #[serde(with = "qstr")]
    pub m12: Q,
    #[serde(with = "qstr")]
    pub m21: Q,
    #[serde(with = "qstr")]
    pub m22: Q,
}

impl Mat2 {
    pub fn new(m11: Q, m12: Q, m21: Q, m22: Q) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Self::new(q(1), q(0), q(0), q(1))
    }

    pub fn det(&self) -> Q {
        &self.m11 * &self.m22 - &self.m12 * &self.m21
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat2::new(&self.m22 / &det, -&self.m12 / &det, -&self.m21 / &det, &self.m11 / &det))
    }

    pub fn apply(&self, z: &ChargeValue) -> ChargeValue {
        ChargeValue { re: &self.m11 * &z.re + &self.m12 * &z.im, im: &self.m21 * &z.re + &self.m22 * &z.im }
    }

    pub fn scale(&self, t: &Q) -> Mat2 {
        Mat2::new(&self.m11 * t, &self.m12 * t, &self.m21 * t, &self.m22 * t)
    }

    pub fn rows(&self) -> [[&Q; 2]; 2] {
        [[&self.m11, &self.m12], [&self.m21, &self.m22]]
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, r: &Mat2) -> Mat2 {
        Mat2::new(
            &self.m11 * &r.m11 + &self.m12 * &r.m21,
            &self.m11 * &r.m12 + &self.m12 * &r.m22,
            &self.m21 * &r.m11 + &self.m22 * &r.m21,
            &self.m21 * &r.m12 + &self.m22 * &r.m22,
        )
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", fmt_q(&self.m11), fmt_q(&self.m12), fmt_q(&self.m21), fmt_q(&self.m22))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn inverse_and_product() {
        let t = Mat2::new(qf(-3, 8), qf(23, 32), q(-1), qf(-3, 4));
        assert_eq!(t.det(), q(1));
        let inv = t.inverse().unwrap();
        assert_eq!(&inv * &t, Mat2::identity());
        assert_eq!(&t * &inv, Mat2::identity());
        assert!(Mat2::new(q(1), q(2), q(2), q(4)).inverse().is_none());
    }

    #[test]
    fn apply_is_matrix_vector_product() {
        let t = Mat2::new(q(1), q(2), q(3), q(4));
        let z = ChargeValue { re: q(5), im: q(-1) };
        assert_eq!(t.apply(&z), ChargeValue { re: q(3), im: q(11) });
    }
}
