//! 2×2 matrices over any ring (plain scalars or jets).

use std::ops::{Add, Mul, Sub};

/// `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self { a, b, c, d }
    }

    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> Mat2<U> {
        Mat2::new(f(self.a), f(self.b), f(self.c), f(self.d))
    }
}

impl<T> Mat2<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    pub fn diagonal(p: T, q: T, zero: T) -> Self {
        Self::new(p, zero.clone(), zero, q)
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(
            self.a.clone() * s.clone(),
            self.b.clone() * s.clone(),
            self.c.clone() * s.clone(),
            self.d.clone() * s.clone(),
        )
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let m = |x: &T, y: &T, u: &T, v: &T| x.clone() * y.clone() + u.clone() * v.clone();
        Self::new(
            m(&self.a, &rhs.a, &self.b, &rhs.c),
            m(&self.a, &rhs.b, &self.b, &rhs.d),
            m(&self.c, &rhs.a, &self.d, &rhs.c),
            m(&self.c, &rhs.b, &self.d, &rhs.d),
        )
    }
}

impl Mat2<f64> {
    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    /// Inverse of a unit-determinant matrix (the adjugate).
    pub fn inverse_unimodular(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl<T> Mul for &Mat2<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    type Output = Mat2<T>;
    fn mul(self, rhs: &Mat2<T>) -> Mat2<T> {
        self.matmul(rhs)
    }
}
