use rug::{Complex, Float};

use crate::numeric::cabs;

/// A 2×2 complex matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix2 {
    pub m: [[Complex; 2]; 2],
}

impl Matrix2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Matrix2 { m: [[a, b], [c, d]] }
    }

    pub fn identity(prec: u32) -> Self {
        let one = Complex::with_val(prec, 1);
        let zero = Complex::with_val(prec, 0);
        Self::new(one.clone(), zero.clone(), zero, one)
    }

    fn prec(&self) -> u32 {
        self.m[0][0].prec().0
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        let f = |z: &Complex| Complex::with_val(prec, z);
        Self::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }

    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        let p = self.prec();
        let e = |i: usize, j: usize| {
            Complex::with_val(p, &self.m[i][0] * &o.m[0][j]) + Complex::with_val(p, &self.m[i][1] * &o.m[1][j])
        };
        Self::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn det(&self) -> Complex {
        let p = self.prec();
        Complex::with_val(p, &self.m[0][0] * &self.m[1][1]) - Complex::with_val(p, &self.m[0][1] * &self.m[1][0])
    }

    pub fn trace(&self) -> Complex {
        Complex::with_val(self.prec(), &self.m[0][0] + &self.m[1][1])
    }

    pub fn inverse(&self) -> Matrix2 {
        let p = self.prec();
        let d = self.det();
        let f = |z: &Complex| Complex::with_val(p, z / &d);
        Self::new(f(&self.m[1][1]), -f(&self.m[0][1]), -f(&self.m[1][0]), f(&self.m[0][0]))
    }

    pub fn scale(&self, s: &Complex) -> Matrix2 {
        let p = self.prec();
        let f = |z: &Complex| Complex::with_val(p, z * s);
        Self::new(f(&self.m[0][0]), f(&self.m[0][1]), f(&self.m[1][0]), f(&self.m[1][1]))
    }

    pub fn max_abs(&self) -> Float {
        self.m
            .iter()
            .flatten()
            .map(cabs)
            .fold(Float::with_val(self.prec(), 0), |a, b| if b > a { b } else { a })
    }

    pub fn max_distance(&self, o: &Matrix2) -> Float {
        let p = self.prec();
        let mut best = Float::with_val(p, 0);
        for i in 0..2 {
            for j in 0..2 {
                let d = cabs(&Complex::with_val(p, &self.m[i][j] - &o.m[i][j]));
                if d > best {
                    best = d;
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_times_self_is_identity() {
        let p = 128;
        let m = Matrix2::new(
            Complex::with_val(p, (1, 2)),
            Complex::with_val(p, (0, -1)),
            Complex::with_val(p, 3),
            Complex::with_val(p, (2, 1)),
        );
        let i = m.mul(&m.inverse());
        assert!(i.max_distance(&Matrix2::identity(p)) < 1e-35);
    }
}
