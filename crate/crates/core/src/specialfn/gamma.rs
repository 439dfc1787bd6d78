use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

type C = Complex64;

pub(crate) fn is_pole(z: C) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn pole(z: C) -> Error {
    Error::Pole(format!("{}", z.re))
}

fn ln_gamma_right(z: C) -> C {
    let z = z - 1.0;
    let mut x = C::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Γ(z) by the Lanczos approximation, reflected for Re z < 1/2.
pub fn gamma_fn(z: C) -> Result<C> {
    if is_pole(z) {
        return Err(pole(z));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return Ok(PI / (s * ln_gamma_right(1.0 - z).exp()));
    }
    Ok(ln_gamma_right(z).exp())
}

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
pub fn rgamma(z: C) -> C {
    if is_pole(z) {
        return C::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        return (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI;
    }
    (-ln_gamma_right(z)).exp()
}

/// Real-argument convenience for Γ.
pub fn gamma_real(x: f64) -> Result<f64> {
    gamma_fn(C::new(x, 0.0)).map(|g| g.re)
}

/// ψ(z) = Γ′(z)/Γ(z): upward recurrence then the asymptotic series.
pub fn digamma(z: C) -> Result<C> {
    if is_pole(z) {
        return Err(pole(z));
    }
    if z.re < 0.5 {
        let cot = (PI * z).cos() / (PI * z).sin();
        return Ok(digamma(1.0 - z)? - PI * cot);
    }
    let mut z = z;
    let mut acc = C::new(0.0, 0.0);
    while z.norm() < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let w = 1.0 / (z * z);
    let series = w
        * (-1.0 / 12.0
            + w * (1.0 / 120.0
                + w * (-1.0 / 252.0
                    + w * (1.0 / 240.0 + w * (-1.0 / 132.0 + w * (691.0 / 32760.0 + w * (-1.0 / 12.0)))))));
    Ok(acc + z.ln() - 0.5 / z + series)
}

pub fn digamma_real(x: f64) -> Result<f64> {
    digamma(C::new(x, 0.0)).map(|g| g.re)
}

/// ψ′(z), the trigamma function.
pub fn trigamma(z: C) -> Result<C> {
    if is_pole(z) {
        return Err(pole(z));
    }
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return Ok(PI * PI / (s * s) - trigamma(1.0 - z)?);
    }
    let mut z = z;
    let mut acc = C::new(0.0, 0.0);
    while z.norm() < 10.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let w = 1.0 / (z * z);
    let series = w
        * (1.0 / 6.0
            + w * (-1.0 / 30.0
                + w * (1.0 / 42.0 + w * (-1.0 / 30.0 + w * (5.0 / 66.0 + w * (-691.0 / 2730.0 + w * (7.0 / 6.0)))))));
    Ok(acc + 1.0 / z + 0.5 * w + series / z)
}
