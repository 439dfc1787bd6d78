//! Dormand–Prince 5(4) transport for linear second-order equations
//! `y'' = c(x) y`, with PI step control and 4th-order dense output.

use super::{Scalar, Tolerance};
use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

type State<T> = [T; 2];

#[derive(Debug, Clone)]
struct Segment<T> {
    x0: f64,
    h: f64,
    r: [State<T>; 5],
}

impl<T: Scalar> Segment<T> {
    fn eval(&self, x: f64) -> State<T> {
        let th = (x - self.x0) / self.h;
        let th1 = 1.0 - th;
        let mut out = [T::zero(); 2];
        for (i, o) in out.iter_mut().enumerate() {
            let r = &self.r;
            *o = r[0][i] + (r[1][i] + (r[2][i] + (r[3][i] + r[4][i] * th1) * th) * th1) * th;
        }
        out
    }
}

/// Result of a transport: endpoint data plus dense output over the segment.
#[derive(Debug, Clone)]
pub struct Transport<T> {
    pub x0: f64,
    pub x1: f64,
    pub value: T,
    pub derivative: T,
    pub steps: usize,
    segments: Vec<Segment<T>>,
}

impl<T: Scalar> Transport<T> {
    /// Value and derivative at any abscissa between `x0` and `x1`.
    pub fn eval(&self, x: f64) -> Option<(T, T)> {
        let (lo, hi) = if self.x0 <= self.x1 { (self.x0, self.x1) } else { (self.x1, self.x0) };
        if x < lo || x > hi {
            return None;
        }
        if self.segments.is_empty() {
            return Some((self.value, self.derivative));
        }
        let forward = self.x1 >= self.x0;
        let idx = self.segments.partition_point(|s| {
            let end = s.x0 + s.h;
            if forward {
                end < x
            } else {
                end > x
            }
        });
        let seg = &self.segments[idx.min(self.segments.len() - 1)];
        let s = seg.eval(x);
        Some((s[0], s[1]))
    }
}

fn rhs<T: Scalar>(c: T, y: &State<T>) -> State<T> {
    [y[1], c * y[0]]
}

fn lin<T: Scalar>(y: &State<T>, terms: &[(f64, &State<T>)], h: f64) -> State<T> {
    let mut out = *y;
    for (w, k) in terms {
        out[0] = out[0] + k[0] * (w * h);
        out[1] = out[1] + k[1] * (w * h);
    }
    out
}

/// Integrates `y'' = coef(x) y` from `x0` to `x1` starting from `y0 = (y, y')`.
pub fn integrate_ode<T, F>(coef: F, x0: f64, y0: (T, T), x1: f64, tol: &Tolerance) -> Result<Transport<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    let mut y: State<T> = [y0.0, y0.1];
    if x1 == x0 {
        return Ok(Transport { x0, x1, value: y[0], derivative: y[1], steps: 0, segments: Vec::new() });
    }
    let span = x1 - x0;
    let dir = span.signum();
    let c0 = coef(x0);
    if !c0.finite() {
        return Err(Error::StepExhaustion { x: x0 });
    }
    let mut h = dir * (0.1 / (c0.modulus().sqrt() + 1.0)).min(span.abs() / 8.0);
    let mut x = x0;
    let mut k1 = rhs(c0, &y);
    let mut err_old: f64 = 1e-4;
    let mut segments = Vec::new();
    let mut steps = 0usize;
    let mut rejected_last = false;
    while (x1 - x) * dir > 0.0 {
        if steps >= tol.max_steps {
            return Err(Error::StepExhaustion { x });
        }
        steps += 1;
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let k2 = rhs(coef(x + C2 * h), &lin(&y, &[(A21, &k1)], h));
        let k3 = rhs(coef(x + C3 * h), &lin(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = rhs(coef(x + C4 * h), &lin(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = rhs(
            coef(x + C5 * h),
            &lin(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let xn = if (x + h - x1) * dir >= 0.0 { x1 } else { x + h };
        let k6 = rhs(
            coef(xn),
            &lin(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
        );
        let yn = lin(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
        let cn = coef(xn);
        let k7 = rhs(cn, &yn);

        let mut err2 = 0.0;
        for i in 0..2 {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let sc = tol.abs + tol.rel * y[i].modulus().max(yn[i].modulus());
            err2 += (e.modulus() / sc).powi(2);
        }
        let err = (err2 / 2.0).sqrt();
        if !err.is_finite() || !yn[0].finite() || !yn[1].finite() {
            h *= 0.2;
            rejected_last = true;
            if h.abs() < 1e-14 * x.abs().max(1e-300) {
                return Err(Error::StepExhaustion { x });
            }
            continue;
        }
        if err <= 1.0 {
            let mut r = [[T::zero(); 2]; 5];
            for i in 0..2 {
                let dy = yn[i] - y[i];
                let bspl = k1[i] * h - dy;
                r[0][i] = y[i];
                r[1][i] = dy;
                r[2][i] = bspl;
                r[3][i] = dy - k7[i] * h - bspl;
                r[4][i] = (k1[i] * D1 + k3[i] * D3 + k4[i] * D4 + k5[i] * D5 + k6[i] * D6 + k7[i] * D7) * h;
            }
            segments.push(Segment { x0: x, h: xn - x, r });
            x = xn;
            y = yn;
            k1 = k7;
            let beta = 0.04;
            let fac = (0.9 * err.max(1e-10).powf(-0.2 + 0.75 * beta) * err_old.powf(beta)).clamp(0.2, 10.0);
            let fac = if rejected_last { fac.min(1.0) } else { fac };
            err_old = err.max(1e-4);
            h *= fac;
            rejected_last = false;
        } else {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            rejected_last = true;
        }
        if h.abs() < 1e-14 * x.abs().max(1e-300) {
            return Err(Error::StepExhaustion { x });
        }
    }
    Ok(Transport { x0, x1, value: y[0], derivative: y[1], steps, segments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn complex_exponential() {
        let tol = Tolerance::default();
        let t = integrate_ode(|_| Complex64::new(-1.0, 0.0), 0.0, (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)), 2.0, &tol)
            .unwrap();
        let exact = Complex64::new(0.0, 2.0).exp();
        assert!((t.value - exact).norm() < 1e-9);
    }

    #[test]
    fn dense_output_matches_sine() {
        let tol = Tolerance::default();
        let pi = std::f64::consts::PI;
        let t = integrate_ode(|_| -pi * pi, 0.0, (0.0, pi), 1.0, &tol).unwrap();
        for i in 1..50 {
            let x = i as f64 / 50.0;
            let (v, d) = t.eval(x).unwrap();
            assert!((v - (pi * x).sin()).abs() < 1e-8);
            assert!((d - pi * (pi * x).cos()).abs() < 1e-7);
        }
    }
}
