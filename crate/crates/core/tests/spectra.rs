use besselext::boundary::{boundary_values, reference_frames};
use besselext::extensions::*;
use besselext::numerics::{quad_singular, Tolerance};
use besselext::solutions::{transport_frame, volterra_frame, Member};
use besselext::spectra::*;
use besselext::{BesselProblem, Endpoint, Error};
use std::f64::consts::PI;

fn tol() -> Tolerance {
    Tolerance::default()
}

// J₀ by its power series, first zero by bisection
fn j01_squared() -> f64 {
    let j0 = |x: f64| {
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..60 {
            term *= -(x * x / 4.0) / (k * k) as f64;
            sum += term;
        }
        sum
    };
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if j0(lo) * j0(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (0.5 * (lo + hi)).powi(2)
}

// positive roots of tan z = z, z ∈ (nπ, nπ + π/2)
fn tan_roots(n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| {
            let (mut lo, mut hi) = (k as f64 * PI + 1e-9, k as f64 * PI + PI / 2.0 - 1e-9);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid.tan() - mid < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn free(sa: f64, sb: f64) -> BesselProblem {
    BesselProblem::free(0.0, 1.0, sa, sb).unwrap()
}

#[test]
fn dirichlet_sine_problem() {
    let s = eigenvalues(&free(0.5, 0.5), &ExtensionSpec::Friedrichs, (0.0, 120.0), &tol()).unwrap();
    let got: Vec<f64> = s.eigenvalues.iter().map(|e| e.lambda).collect();
    assert_eq!(got.len(), 3, "{got:?}");
    for (n, l) in got.iter().enumerate() {
        let want = ((n + 1) as f64 * PI).powi(2);
        assert!((l - want).abs() <= 1e-8 * want, "{l} {want}");
    }
    assert!(s.eigenvalues.iter().all(|e| e.multiplicity == 1));
}

#[test]
fn determinant_is_proportional_to_sine() {
    let p = free(0.5, 0.5);
    for lam in [2.0f64, 7.0, 30.0, 61.0] {
        let d = matching_determinant(&p, &ExtensionSpec::Friedrichs, lam, &tol()).unwrap();
        let k = lam.sqrt();
        // g̃(b) of sin(kx)/k with g̃ = −g at b
        assert!((d.re + (k.sin() / k)).abs() < 1e-9 && d.im == 0.0, "{lam}: {d}");
    }
}

#[test]
fn bessel_ground_state() {
    let want = j01_squared();
    assert!((want - 5.783185962946785).abs() < 1e-12);
    let p = free(0.0, 0.5);
    let d = |l| matching_determinant(&p, &ExtensionSpec::Friedrichs, l, &tol()).unwrap().re;
    assert!(d(5.7) * d(5.9) < 0.0);
    let s = eigenvalues(&p, &ExtensionSpec::Friedrichs, (0.0, 10.0), &tol()).unwrap();
    assert!((s.eigenvalues[0].lambda - want).abs() < 1e-6 * want, "{s:?}");
}

#[test]
fn limit_point_left_end_gives_spherical_bessel_zeros() {
    // s = 3/2: principal solution √x J_{3/2}(kx), zeros where tan z = z
    let s = eigenvalues(&free(1.5, 0.5), &ExtensionSpec::Friedrichs, (0.0, 400.0), &tol()).unwrap();
    let want: Vec<f64> = tan_roots(5).into_iter().map(|z| z * z).filter(|l| *l < 400.0).collect();
    assert_eq!(s.eigenvalues.len(), want.len(), "{s:?}");
    for (e, w) in s.eigenvalues.iter().zip(&want) {
        assert!((e.lambda - w).abs() < 1e-8 * w, "{} {w}", e.lambda);
    }
}

#[test]
fn krein_translation_spectrum() {
    // R_K = [[1,1],[0,1]]: secular equation 2 − 2cos k − k sin k = 0,
    // k = 2πn or tan(k/2) = k/2
    let p = free(0.5, 0.5);
    let s = eigenvalues(&p, &ExtensionSpec::KreinVonNeumann, (-1.0, 300.0), &tol()).unwrap();
    assert_eq!(s.eigenvalues[0].multiplicity, 2);
    assert!(s.eigenvalues[0].lambda.abs() < 1e-8);
    let mut want: Vec<f64> = (1..3).map(|n| (2.0 * PI * n as f64).powi(2)).collect();
    want.extend(tan_roots(3).into_iter().map(|z| 4.0 * z * z));
    want.retain(|l| *l < 300.0);
    want.sort_by(f64::total_cmp);
    let rest: Vec<f64> = s.eigenvalues[1..].iter().map(|e| e.lambda).collect();
    assert_eq!(rest.len(), want.len(), "{rest:?} {want:?}");
    for (g, w) in rest.iter().zip(&want) {
        assert!((g - w).abs() < 1e-8 * w, "{g} {w}");
    }
    assert!(s.eigenvalues[1..].iter().all(|e| e.multiplicity == 1));
}

#[test]
fn krein_kernel_is_double() {
    for (sa, sb) in [(0.0, 0.0), (0.25, 0.75), (0.75, 0.5)] {
        let p = free(sa, sb);
        let s = eigenvalues(&p, &ExtensionSpec::KreinVonNeumann, (-1.0, 20.0), &tol()).unwrap();
        let e = s.eigenvalues[0];
        assert!(e.multiplicity == 2 && e.lambda.abs() < 1e-8, "({sa}, {sb}) {s:?}");
        let d = matching_determinant(&p, &ExtensionSpec::KreinVonNeumann, 0.0, &tol()).unwrap();
        assert!(d.norm() < 1e-9);
    }
}

#[test]
fn quasi_periodic_spectrum_is_real() {
    // R = I with phase φ: eigenvalues (φ + 2πn)², n ∈ ℤ
    let phi = 0.7;
    let p = free(0.5, 0.5);
    let ext = ExtensionSpec::Coupled { phi, r: [[1.0, 0.0], [0.0, 1.0]] };
    let s = eigenvalues(&p, &ext, (0.0, 200.0), &tol()).unwrap();
    let mut want: Vec<f64> = (-3i32..=3).map(|n| (phi + 2.0 * PI * n as f64).powi(2)).filter(|l| *l < 200.0).collect();
    want.sort_by(f64::total_cmp);
    let got: Vec<f64> = s.eigenvalues.iter().map(|e| e.lambda).collect();
    assert_eq!(got.len(), want.len(), "{got:?} {want:?}");
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-8 * w.max(1.0), "{g} {w}");
        let d = matching_determinant(&p, &ext, *g, &tol()).unwrap();
        assert!(d.re.abs() < 1e-9 && d.im.abs() < 1e-9, "{d}");
    }
}

#[test]
fn periodic_spectrum_is_double() {
    let p = free(0.5, 0.5);
    let ext = ExtensionSpec::Coupled { phi: 0.0, r: [[1.0, 0.0], [0.0, 1.0]] };
    let s = eigenvalues(&p, &ext, (-1.0, 100.0), &tol()).unwrap();
    let m: Vec<(f64, u8)> = s.eigenvalues.iter().map(|e| (e.lambda, e.multiplicity)).collect();
    assert_eq!(m.len(), 2, "{m:?}");
    assert!(m[0].0.abs() < 1e-8 && m[0].1 == 1);
    for (k, (l, mult)) in m[1..].iter().enumerate() {
        let w = (2.0 * PI * (k + 1) as f64).powi(2);
        assert!((l - w).abs() < 1e-8 * w && *mult == 2, "{m:?}");
    }
}

#[test]
fn extension_ordering() {
    for (sa, sb) in [(0.0, 0.25), (0.25, 0.25), (0.5, 0.75), (0.75, 0.0)] {
        let p = free(sa, sb);
        let k = eigenvalues(&p, &ExtensionSpec::KreinVonNeumann, (-1.0, 350.0), &tol()).unwrap().values();
        let f = eigenvalues(&p, &ExtensionSpec::Friedrichs, (-1.0, 350.0), &tol()).unwrap().values();
        assert!(k.len() >= 5 && f.len() >= 5);
        for i in 0..5 {
            assert!(k[i] <= f[i] + 1e-9 * f[i].abs(), "({sa}, {sb}) {k:?} {f:?}");
        }
    }
}

#[test]
fn friedrichs_bottom_is_the_positivity_bound() {
    let p = free(0.3, 0.6);
    let s = eigenvalues(&p, &ExtensionSpec::Friedrichs, (-5.0, 50.0), &tol()).unwrap();
    let eps = positivity_lower_bound(&p, &tol()).unwrap().epsilon;
    assert!(s.eigenvalues[0].lambda > 0.0);
    assert!((s.eigenvalues[0].lambda - eps).abs() < 1e-9 * eps);
}

#[test]
fn refinement_is_stable() {
    let p = free(0.2, 0.9);
    let ext = ExtensionSpec::Separated { alpha: Some(2.0), beta: Some(0.4) };
    let a = eigenvalues_with_density(&p, &ext, (-60.0, 250.0), &tol(), 1).unwrap().values();
    let b = eigenvalues_with_density(&p, &ext, (-60.0, 250.0), &tol(), 2).unwrap().values();
    assert_eq!(a.len(), b.len(), "{a:?} {b:?}");
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()));
    }
}

#[test]
fn sine_eigenfunctions() {
    let p = free(0.5, 0.5);
    for n in 1..=3 {
        let lam = (n as f64 * PI).powi(2);
        let ef = eigenfunction(&p, &ExtensionSpec::Friedrichs, lam, &tol()).unwrap();
        assert_eq!(ef.multiplicity, 1);
        assert!(ef.residual <= 1e-6);
        let m = &ef.modes[0];
        let sign = m.eval(0.5 / n as f64).unwrap().0.re.signum();
        for x in [0.1, 0.33, 0.5, 0.77, 0.95] {
            let want = 2f64.sqrt() * (n as f64 * PI * x).sin();
            let got = sign * m.eval(x).unwrap().0;
            assert!((got.re - want).abs() < 1e-8 && got.im == 0.0, "{n} {x}: {got} {want}");
        }
    }
}

#[test]
fn eigenfunctions_are_orthonormal() {
    let p = free(0.2, 0.65);
    let ext = ExtensionSpec::Separated { alpha: Some(0.3), beta: Some(1.9) };
    let s = eigenvalues(&p, &ext, (-20.0, 120.0), &tol()).unwrap();
    let efs: Vec<_> = s.eigenvalues.iter().take(4).map(|e| eigenfunction(&p, &ext, e.lambda, &tol()).unwrap()).collect();
    for i in 0..efs.len() {
        assert!(efs[i].residual <= 1e-6, "{}", efs[i].residual);
        for j in 0..=i {
            let ip = inner_product(&p, &efs[i].modes[0], &efs[j].modes[0], &tol()).unwrap();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((ip.re - want).abs() < 1e-7 && ip.im.abs() < 1e-7, "{i} {j}: {ip}");
        }
    }
}

#[test]
fn krein_kernel_functions_span_the_frame() {
    let p = free(0.25, 0.6);
    let ef = eigenfunction(&p, &ExtensionSpec::KreinVonNeumann, 0.0, &tol()).unwrap();
    assert_eq!(ef.multiplicity, 2);
    let fa = volterra_frame(&p, Endpoint::A, 0.0, &tol()).unwrap();
    let xs: Vec<f64> = (1..40).map(|k| k as f64 / 40.0).collect();
    let th: Vec<f64> = xs.iter().map(|&x| transport_frame(&fa, Member::Nonprincipal, &p, x, &tol()).unwrap().0).collect();
    let ph: Vec<f64> = xs.iter().map(|&x| transport_frame(&fa, Member::Principal, &p, x, &tol()).unwrap().0).collect();
    // least-squares fit of each mode in span{θ, φ}
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let (g11, g12, g22) = (dot(&th, &th), dot(&th, &ph), dot(&ph, &ph));
    let det = g11 * g22 - g12 * g12;
    for m in &ef.modes {
        let y: Vec<f64> = xs.iter().map(|&x| m.eval(x).unwrap().0.re).collect();
        let (b1, b2) = (dot(&th, &y), dot(&ph, &y));
        let (c1, c2) = ((g22 * b1 - g12 * b2) / det, (g11 * b2 - g12 * b1) / det);
        let res: f64 = y.iter().zip(th.iter().zip(&ph)).map(|(v, (t, f))| (v - c1 * t - c2 * f).powi(2)).sum::<f64>().sqrt();
        assert!(res <= 1e-6 * dot(&y, &y).sqrt(), "{res}");
    }
    let ip = inner_product(&p, &ef.modes[0], &ef.modes[1], &tol()).unwrap();
    assert!(ip.norm() < 1e-8);
}

#[test]
fn eigenfunction_satisfies_its_boundary_conditions() {
    let p = free(0.3, 0.7);
    let (alpha, beta) = (0.8, 2.2);
    let ext = ExtensionSpec::Separated { alpha: Some(alpha), beta: Some(beta) };
    let s = eigenvalues(&p, &ext, (-30.0, 60.0), &tol()).unwrap();
    let frames = reference_frames(&p, &tol()).unwrap();
    for e in &s.eigenvalues {
        let ef = eigenfunction(&p, &ext, e.lambda, &tol()).unwrap();
        let m = &ef.modes[0];
        let d = boundary_values(&p, |x| { let (v, dv) = m.eval(x).unwrap(); (v.re, dv.re) }, &frames, &tol()).unwrap();
        let (ga, gb) = (d.at_a.unwrap(), d.at_b.unwrap());
        assert!((ga.0 * alpha.cos() + ga.1 * alpha.sin()).abs() < 1e-6, "{ga:?}");
        assert!((gb.0 * beta.cos() + gb.1 * beta.sin()).abs() < 1e-6, "{gb:?}");
    }
}

#[test]
fn coupled_eigenfunction_is_complex() {
    let phi = 0.7;
    let p = free(0.5, 0.5);
    let ext = ExtensionSpec::Coupled { phi, r: [[1.0, 0.0], [0.0, 1.0]] };
    let ef = eigenfunction(&p, &ext, phi * phi, &tol()).unwrap();
    let m = &ef.modes[0];
    // a multiple of e^{iφx}
    let (y0, y1) = (m.eval(0.2).unwrap().0, m.eval(0.6).unwrap().0);
    let ratio = y1 / y0;
    assert!((ratio.arg() - 0.4 * phi).abs() < 1e-8 && (ratio.norm() - 1.0).abs() < 1e-8, "{ratio}");
    let n = quad_singular(|x| m.eval(x).unwrap().0.norm_sqr(), 0.0, 1.0, &tol()).unwrap().value;
    assert!((n - 1.0).abs() < 1e-8);
}

#[test]
fn non_eigenvalue_is_rejected() {
    let p = free(0.5, 0.5);
    let r = eigenfunction(&p, &ExtensionSpec::Friedrichs, 10.5, &tol());
    assert!(matches!(r, Err(Error::Residual(_))), "{r:?}");
}

#[test]
fn lowest_eigenvalue_of_a_negative_angle() {
    let p = free(0.5, 0.5);
    // g(0)·cos α + g′(0)·sin α = 0 with cot α = 2: ground state −κ² where
    // κ solves tanh κ = κ/2
    let alpha = 1f64.atan2(2.0);
    let ext = ExtensionSpec::Separated { alpha: Some(alpha), beta: Some(0.0) };
    let l = lowest_eigenvalue(&p, &ext, &tol()).unwrap();
    let (mut lo, mut hi) = (1.0f64, 3.0f64);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m.tanh() - m / 2.0 > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let k = 0.5 * (lo + hi);
    assert!((l + k * k).abs() < 1e-8 * k * k, "{l} {}", -k * k);
}

#[test]
fn limit_point_both_ends() {
    let p = free(1.5, 1.5);
    let s = eigenvalues(&p, &ExtensionSpec::Friedrichs, (0.0, 200.0), &tol()).unwrap();
    assert!(!s.eigenvalues.is_empty());
    assert_eq!(s.extension, ExtensionSpec::Separated { alpha: None, beta: None });
    let ef = eigenfunction(&p, &ExtensionSpec::Friedrichs, s.eigenvalues[0].lambda, &tol()).unwrap();
    assert!(ef.residual < 1e-6);
    // symmetric problem: the ground state is even about the midpoint
    let m = &ef.modes[0];
    let (l, r) = (m.eval(0.3).unwrap().0, m.eval(0.7).unwrap().0);
    assert!((l - r).norm() < 1e-8, "{l} {r}");
}
