use super::{MultiPoly, Rational};

/// Power series in one formal variable `t`, truncated after `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<MultiPoly>,
}

impl Series {
    pub fn zero(order: usize) -> Series {
        Series {
            coeffs: vec![MultiPoly::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Series {
        let mut s = Series::zero(order);
        s.coeffs[0] = MultiPoly::one();
        s
    }

    /// Series with the given leading coefficients, padded or cut to `order`.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = MultiPoly>, order: usize) -> Series {
        let mut s = Series::zero(order);
        for (i, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[i] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^n`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> MultiPoly {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn add(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series {
            coeffs: (0..=order)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.scale(&super::rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        let mut out = Series::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(self.order());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Series {
        if self.order() == 0 {
            return Series::zero(0);
        }
        Series {
            coeffs: (1..self.coeffs.len())
                .map(|i| self.coeffs[i].scale(&super::rat(i as i64)))
                .collect(),
        }
    }

    /// `1 / (1 - self)` for a series without constant term.
    pub fn geometric(&self) -> Series {
        assert!(
            self.coeffs[0].is_zero(),
            "geometric series needs a vanishing constant term"
        );
        let mut acc = Series::one(self.order());
        let mut power = Series::one(self.order());
        for _ in 0..self.order() {
            power = power.mul(self);
            acc = acc.add(&power);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn geometric_inverts() {
        let c = Series::from_coeffs(
            [MultiPoly::zero(), "x1".parse().unwrap(), "x2".parse().unwrap()],
            5,
        );
        let one_minus = Series::one(5).sub(&c);
        assert_eq!(one_minus.mul(&c.geometric()), Series::one(5));
    }

    #[test]
    fn derivative_of_power() {
        let t = Series::from_coeffs([MultiPoly::zero(), MultiPoly::one()], 4);
        let cube = t.pow(3);
        assert_eq!(cube.derivative().coeff(2), MultiPoly::constant(rat(3)));
    }
}
