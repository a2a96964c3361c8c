//! Second-order forward-mode jets in two variables.
//!
//! A [`ScalarJet`] carries a value together with its gradient and Hessian
//! with respect to `(x, y)`. Arithmetic propagates all six entries by the
//! chain rule, so evaluating an expression tree on the seed jets of `x` and
//! `y` yields exact (truncated Taylor) derivatives with no step-size error.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScalarJet {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl ScalarJet {
    pub const fn constant(v: f64) -> Self {
        Self {
            v,
            dx: 0.0,
            dy: 0.0,
            dxx: 0.0,
            dxy: 0.0,
            dyy: 0.0,
        }
    }

    pub const fn var_x(x: f64) -> Self {
        Self {
            v: x,
            dx: 1.0,
            dy: 0.0,
            dxx: 0.0,
            dxy: 0.0,
            dyy: 0.0,
        }
    }

    pub const fn var_y(y: f64) -> Self {
        Self {
            v: y,
            dx: 0.0,
            dy: 1.0,
            dxx: 0.0,
            dxy: 0.0,
            dyy: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite()
            && self.dx.is_finite()
            && self.dy.is_finite()
            && self.dxx.is_finite()
            && self.dxy.is_finite()
            && self.dyy.is_finite()
    }

    /// Applies a scalar function with derivatives `f0 = f(v)`, `f1 = f'(v)`,
    /// `f2 = f''(v)`.
    #[inline]
    fn compose(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            v: f0,
            dx: f1 * self.dx,
            dy: f1 * self.dy,
            dxx: f2 * self.dx * self.dx + f1 * self.dxx,
            dxy: f2 * self.dx * self.dy + f1 * self.dxy,
            dyy: f2 * self.dy * self.dy + f1 * self.dyy,
        }
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.compose(e, e, e)
    }

    /// Natural logarithm; non-positive arguments produce non-finite jets.
    pub fn ln(self) -> Self {
        if self.v <= 0.0 {
            return self.compose(f64::NAN, f64::NAN, f64::NAN);
        }
        let r = 1.0 / self.v;
        self.compose(self.v.ln(), r, -r * r)
    }

    pub fn atan(self) -> Self {
        let q = 1.0 / (1.0 + self.v * self.v);
        self.compose(self.v.atan(), q, -2.0 * self.v * q * q)
    }

    /// Integer power, including negative exponents.
    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            1 => self,
            _ => {
                let nf = n as f64;
                let pm2 = self.v.powi(n - 2);
                let pm1 = self.v.powi(n - 1);
                self.compose(self.v.powi(n), nf * pm1, nf * (nf - 1.0) * pm2)
            }
        }
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.compose(r, -r * r, 2.0 * r * r * r)
    }
}

impl Add for ScalarJet {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxx: self.dxx + o.dxx,
            dxy: self.dxy + o.dxy,
            dyy: self.dyy + o.dyy,
        }
    }
}

impl Sub for ScalarJet {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self {
            v: self.v - o.v,
            dx: self.dx - o.dx,
            dy: self.dy - o.dy,
            dxx: self.dxx - o.dxx,
            dxy: self.dxy - o.dxy,
            dyy: self.dyy - o.dyy,
        }
    }
}

impl Neg for ScalarJet {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            v: -self.v,
            dx: -self.dx,
            dy: -self.dy,
            dxx: -self.dxx,
            dxy: -self.dxy,
            dyy: -self.dyy,
        }
    }
}

impl Mul for ScalarJet {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            dx: self.dx * o.v + self.v * o.dx,
            dy: self.dy * o.v + self.v * o.dy,
            dxx: self.dxx * o.v + 2.0 * self.dx * o.dx + self.v * o.dxx,
            dxy: self.dxy * o.v + self.dx * o.dy + self.dy * o.dx + self.v * o.dxy,
            dyy: self.dyy * o.v + 2.0 * self.dy * o.dy + self.v * o.dyy,
        }
    }
}

impl Div for ScalarJet {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(f: impl Fn(ScalarJet, ScalarJet) -> ScalarJet, x: f64, y: f64) {
        let h = 1e-4;
        let val = |x: f64, y: f64| f(ScalarJet::constant(x), ScalarJet::constant(y)).v;
        let j = f(ScalarJet::var_x(x), ScalarJet::var_y(y));
        let dx = (val(x + h, y) - val(x - h, y)) / (2.0 * h);
        let dy = (val(x, y + h) - val(x, y - h)) / (2.0 * h);
        let dxx = (val(x + h, y) - 2.0 * val(x, y) + val(x - h, y)) / (h * h);
        let dyy = (val(x, y + h) - 2.0 * val(x, y) + val(x, y - h)) / (h * h);
        let dxy = (val(x + h, y + h) - val(x + h, y - h) - val(x - h, y + h) + val(x - h, y - h))
            / (4.0 * h * h);
        assert!((j.dx - dx).abs() < 1e-6, "dx {} vs {}", j.dx, dx);
        assert!((j.dy - dy).abs() < 1e-6, "dy {} vs {}", j.dy, dy);
        assert!((j.dxx - dxx).abs() < 1e-5, "dxx {} vs {}", j.dxx, dxx);
        assert!((j.dxy - dxy).abs() < 1e-5, "dxy {} vs {}", j.dxy, dxy);
        assert!((j.dyy - dyy).abs() < 1e-5, "dyy {} vs {}", j.dyy, dyy);
    }

    #[test]
    fn elementary_functions_match_finite_differences() {
        fd_check(|x, y| (x * y).sin(), 0.3, -0.7);
        fd_check(|x, y| (x - y).cos() * x, 0.2, 0.5);
        fd_check(|x, y| (x * x + y).exp(), -0.4, 0.1);
        fd_check(|x, y| (x.cos() / y.cos()).ln(), 0.3, 0.6);
        fd_check(|x, y| (x * 2.0_f64.into_jet() - y).atan(), 0.8, 0.3);
        fd_check(|x, y| (x + y).powi(-3), 1.1, 0.4);
        fd_check(|x, y| x.powi(5) - y.powi(2), 0.6, -0.9);
    }

    #[test]
    fn powi_at_zero_is_finite_for_nonnegative_exponents() {
        for n in 0..6 {
            let j = ScalarJet::var_x(0.0).powi(n);
            assert!(j.is_finite(), "n = {n}");
        }
        assert_eq!(ScalarJet::var_x(0.0).powi(2).dxx, 2.0);
    }

    #[test]
    fn log_of_nonpositive_is_flagged() {
        assert!(!ScalarJet::var_x(-1.0).ln().is_finite());
        assert!(!ScalarJet::var_x(0.0).ln().is_finite());
    }

    trait IntoJet {
        fn into_jet(self) -> ScalarJet;
    }
    impl IntoJet for f64 {
        fn into_jet(self) -> ScalarJet {
            ScalarJet::constant(self)
        }
    }
}
