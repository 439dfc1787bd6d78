use std::f64::consts::PI;

// Periodic trapezoid rule for Bessel's integral; spectrally accurate once the
// node count exceeds |x|/2 by a margin.
fn bessel_integral(x: f64, order: i32) -> f64 {
    let n = x.abs() as usize + 48;
    let mut s = 0.0;
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / n as f64;
        s += (order as f64 * th - x * th.sin()).cos();
    }
    s / n as f64
}

/// J₀(x).
pub fn bessel_j0(x: f64) -> f64 {
    bessel_integral(x, 0)
}

/// J₁(x).
pub fn bessel_j1(x: f64) -> f64 {
    bessel_integral(x, 1)
}

/// k-th positive zero of J₀ (k ≥ 1): McMahon start, Newton polish.
pub fn bessel_j0_zero(k: usize) -> f64 {
    assert!(k >= 1, "zero index starts at 1");
    let beta = (k as f64 - 0.25) * PI;
    let b8 = 8.0 * beta;
    let mut x = beta + 1.0 / b8 - 124.0 / (3.0 * b8.powi(3));
    for _ in 0..50 {
        let dx = bessel_j0(x) / bessel_j1(x);
        x += dx;
        if dx.abs() <= 1e-15 * x {
            break;
        }
    }
    x
}
