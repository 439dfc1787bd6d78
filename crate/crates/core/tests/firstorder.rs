use besselext::firstorder::*;
use besselext::numerics::{quad_singular, Tolerance};
use besselext::{BesselProblem, Error, Potential};

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn alpha_with_vanishing_coefficient_is_the_derivative() {
    let e = FirstOrderExpr::alpha(0.0, 1.0, -0.5).unwrap();
    for x in [0.1, 0.5, 0.9] {
        assert_eq!(apply(&e, (3.0, -2.0), x, false).unwrap(), -2.0);
    }
}

#[test]
fn alpha_annihilates_its_power() {
    for s in [-0.75, 0.0, 0.3, 1.7] {
        let e = FirstOrderExpr::alpha(1.0, 3.0, s).unwrap();
        for x in [1.01, 1.5, 2.9] {
            let t: f64 = x - 1.0;
            let f = (t.powf(s + 0.5), (s + 0.5) * t.powf(s - 0.5));
            assert!(apply(&e, f, x, false).unwrap().abs() < 1e-12);
        }
    }
    let e = FirstOrderExpr::beta(0.0, 1.0, 0.4).unwrap();
    let x: f64 = 0.7;
    let f = ((1.0 - x).powf(0.9), -0.9 * (1.0 - x).powf(-0.1));
    assert!(apply(&e, f, x, false).unwrap().abs() < 1e-12);
}

#[test]
fn adjoint_is_minus_the_reflected_alpha() {
    let s = 0.35;
    let e = FirstOrderExpr::alpha(0.0, 2.0, s).unwrap();
    let r = FirstOrderExpr::alpha(0.0, 2.0, -s - 1.0).unwrap();
    for k in 1..20 {
        let x = 0.1 * k as f64;
        let f = (x.sin() + x * x, x.cos() + 2.0 * x);
        let lhs = apply(&e, f, x, true).unwrap();
        let rhs = -apply(&r, f, x, false).unwrap();
        assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
    }
}

#[test]
fn endpoints_are_singular() {
    let e = FirstOrderExpr::alpha(0.0, 1.0, 0.2).unwrap();
    assert!(matches!(apply(&e, (1.0, 1.0), 0.0, false), Err(Error::Singularity { .. })));
    let t = FirstOrderExpr::two_point(0.0, 1.0, 0.2, 0.4, 0.1).unwrap();
    assert!(matches!(apply(&t, (1.0, 1.0), 1.0, true), Err(Error::Singularity { .. })));
    assert!(FirstOrderExpr::two_point(0.0, 1.0, 0.2, 0.4, 0.5).is_err());
    assert!(FirstOrderExpr::alpha(1.0, 1.0, 0.2).is_err());
}

#[test]
fn smooth_step_plateaus() {
    let (a, b, eps) = (0.0, 1.0, 0.1);
    assert_eq!(smooth_step(a, Edge::Left, a, b, eps), 1.0);
    assert_eq!(smooth_step(0.07, Edge::Left, a, b, eps), 1.0);
    for x in [0.2, 0.5, 0.99] {
        assert_eq!(smooth_step(x, Edge::Left, a, b, eps), 0.0);
    }
    let mid = smooth_step(0.15, Edge::Left, a, b, eps);
    assert!(mid > 0.0 && mid < 1.0);
    assert!((mid - 0.5).abs() < 1e-15);
    assert_eq!(smooth_step(b, Edge::Right, a, b, eps), 1.0);
    assert_eq!(smooth_step(0.75, Edge::Right, a, b, eps), 0.0);
    let mut prev = 1.0;
    for k in 0..=100 {
        let x = 0.1 + 0.001 * k as f64;
        let v = smooth_step(x, Edge::Left, a, b, eps);
        assert!(v <= prev);
        prev = v;
        let r = smooth_step(b - (x - a), Edge::Right, a, b, eps);
        assert!((r - v).abs() < 1e-14);
    }
}

#[test]
fn smooth_step_derivative_matches_differences() {
    let (a, b, eps) = (-1.0, 2.0, 0.4);
    let h = 1e-6;
    for edge in [Edge::Left, Edge::Right] {
        for k in 1..40 {
            let x = a + 0.075 * k as f64;
            let fd = (smooth_step(x + h, edge, a, b, eps) - smooth_step(x - h, edge, a, b, eps)) / (2.0 * h);
            let d = smooth_step_derivative(x, edge, a, b, eps);
            assert!((fd - d).abs() < 1e-7, "{edge:?} {x}: {fd} {d}");
        }
    }
}

#[test]
fn qtilde_on_plateau_and_near_a() {
    let (a, b, sa, sb, eps) = (0.0, 1.0, 0.3, 0.7, 0.1);
    let e = FirstOrderExpr::two_point(a, b, sa, sb, eps).unwrap();
    for x in [0.2, 0.5, 0.8] {
        let want = -(sa * sa - 0.25) / (x * x) - (sb * sb - 0.25) / ((b - x) * (b - x));
        assert!((qtilde(&e, x).unwrap() - want).abs() < 1e-12 * (1.0 + want.abs()));
    }
    for x in [1e-6, 1e-3, 0.05, 0.1] {
        let want = -(sb * sb - 0.25) / ((b - x) * (b - x));
        let q = qtilde(&e, x).unwrap();
        assert!((q - want).abs() < 1e-7 * (1.0 + want.abs()), "{x}: {q} {want}");
    }
    assert!(qtilde(&FirstOrderExpr::alpha(a, b, sa).unwrap(), 0.5).is_err());
}

#[test]
fn qtilde_is_bounded() {
    let e = FirstOrderExpr::two_point(0.0, 1.0, 0.1, 0.8, 0.125).unwrap();
    let sup = |n: usize| (1..n).map(|k| qtilde(&e, k as f64 / n as f64).unwrap().abs()).fold(0.0f64, f64::max);
    let (s1, s2) = (sup(10_000), sup(20_000));
    assert!(s1.is_finite() && (s2 - s1).abs() <= 0.01 * s1, "{s1} {s2}");
}

fn poly(c: &[f64], x: f64) -> (f64, f64, f64) {
    let mut v = (0.0, 0.0, 0.0);
    for (k, ck) in c.iter().enumerate() {
        let k = k as i32;
        v.0 += ck * x.powi(k);
        if k >= 1 {
            v.1 += ck * k as f64 * x.powi(k - 1);
        }
        if k >= 2 {
            v.2 += ck * (k * (k - 1)) as f64 * x.powi(k - 2);
        }
    }
    v
}

fn interior(n: usize, a: f64, b: f64) -> Vec<f64> {
    (1..n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
}

#[test]
fn factorization_at_half_is_differentiation() {
    let p = BesselProblem::free(0.0, 1.0, 0.5, 0.5).unwrap();
    let r = factorization_residual(&p, |x: f64| (x.sin(), x.cos(), -x.sin()), &interior(50, 0.0, 1.0)).unwrap();
    assert!(r.alpha < 1e-8 && r.beta < 1e-8 && r.tau < 1e-8, "{r:?}");
}

#[test]
fn factorization_of_the_power() {
    let s = 0.3;
    let p = BesselProblem::free(0.0, 1.0, s, 0.6).unwrap();
    let f = |x: f64| (x.powf(s + 0.5), (s + 0.5) * x.powf(s - 0.5), (s + 0.5) * (s - 0.5) * x.powf(s - 1.5));
    let r = factorization_residual(&p, f, &interior(40, 0.0, 1.0)).unwrap();
    assert!(r.alpha <= 1e-10, "{r:?}");
}

#[test]
fn factorization_of_polynomials() {
    let c = [0.3, -1.0, 2.5, 0.7, -1.2];
    for q in [Potential::Zero, Potential::Polynomial(vec![1.0, 0.5])] {
        let p = BesselProblem::new(0.0, 1.0, 0.3, 0.7, q).unwrap();
        let r = factorization_residual(&p, |x| poly(&c, x), &interior(200, 0.0, 1.0)).unwrap();
        assert!(r.alpha <= 1e-8 && r.beta <= 1e-8 && r.tau <= 1e-8, "{r:?}");
    }
}

#[test]
fn decay_probe_examples() {
    let t = tol();
    let v = decay_probe(|x: f64| x.powf(0.9), 0.0, 1.0, DecayMode::Sqrt, 2.0, &t).unwrap();
    assert_eq!(v.verdict, Verdict::Vanishes);
    let v = decay_probe(|x: f64| x.sqrt(), 0.0, 1.0, DecayMode::Sqrt, 2.0, &t).unwrap();
    assert_eq!(v.verdict, Verdict::FiniteNonzero);
    assert!((v.limit - 1.0).abs() < 1e-8);
    let v = decay_probe(|x: f64| x.sqrt(), 0.0, 1.0, DecayMode::SqrtLog, 2.0, &t).unwrap();
    assert_eq!(v.verdict, Verdict::Vanishes, "{v:?}");
    let v = decay_probe(|x: f64| (1.0 - x).powf(0.2), 0.0, 1.0, DecayMode::RightSqrt, 2.0, &t).unwrap();
    assert_eq!(v.verdict, Verdict::Diverges);
    assert!(decay_probe(|x: f64| x, 0.0, 1.0, DecayMode::SqrtLog, 0.5, &t).is_err());
}

fn bump(x: f64, c: f64, w: f64) -> (f64, f64) {
    let t = (x - c) / w;
    if t.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let e = (-1.0 / (1.0 - t * t)).exp();
    (e, e * (-2.0 * t / (1.0 - t * t).powi(2)) / w)
}

#[test]
fn integration_by_parts_for_alpha() {
    let (a, b) = (0.0, 1.0);
    for s in [-0.7, 0.0, 0.4, 1.3] {
        let al = FirstOrderExpr::alpha(a, b, s).unwrap();
        let re = FirstOrderExpr::alpha(a, b, -s - 1.0).unwrap();
        let f = |x| bump(x, 0.35, 0.3);
        let g = |x| bump(x, 0.5, 0.4);
        let lhs = quad_singular(|x| g(x).0 * apply(&al, f(x), x, false).unwrap(), a, b, &tol()).unwrap().value;
        let rhs = quad_singular(|x| apply(&re, g(x), x, false).unwrap() * f(x).0, a, b, &tol()).unwrap().value;
        assert!((lhs + rhs).abs() < 1e-8, "{s}: {lhs} {rhs}");
    }
}

#[test]
fn witness_is_in_the_maximal_domain_but_not_in_h10() {
    let (a, b, eps) = (0.0, 1.0, 0.125);
    for s in [-0.25, -0.5, -0.75, -0.9] {
        let al = FirstOrderExpr::alpha(a, b, s).unwrap();
        let f = |x: f64| {
            let (c, dc) = (smooth_step(x, Edge::Left, a, b, eps), smooth_step_derivative(x, Edge::Left, a, b, eps));
            let t = x - a;
            (t.powf(s + 0.5) * c, (s + 0.5) * t.powf(s - 0.5) * c + t.powf(s + 0.5) * dc)
        };
        // α f = t^{s+½} χ̃′ vanishes near a; only rounding is left there
        let norm = |d: f64| quad_singular(|x| apply(&al, f(x), x, false).unwrap().powi(2), a + d, b, &tol()).unwrap().value;
        let (n1, n2, n3) = (norm(1e-4), norm(1e-8), norm(1e-12));
        assert!(n1 > 0.0 && (n3 - n1).abs() < 1e-8 * n1 && (n2 - n1).abs() < 1e-8 * n1, "{s}: {n1} {n2} {n3}");
        if s == -0.5 {
            // f = χ̃ here: finite energy, but f(a) = 1
            assert_eq!(f(a + 1e-12).0, 1.0);
            continue;
        }
        let energy = |d: f64| quad_singular(|x| f(x).1.powi(2), a + d, b, &tol()).unwrap().value;
        let (e1, e2, e3) = (energy(1e-4), energy(1e-8), energy(1e-12));
        assert!(e2 > 10.0 * e1 && e3 > 10.0 * e2, "{s}: {e1} {e2} {e3}");
    }
}
