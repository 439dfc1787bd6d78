use besselext::boundary::*;
use besselext::numerics::Tolerance;
use besselext::solutions::*;
use besselext::{BesselProblem, Endpoint, Potential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn member<'a>(p: &'a BesselProblem, f: &SolutionFrame, m: Member) -> impl Fn(f64) -> (f64, f64) + 'a {
    let f = f.clone();
    move |x| transport_frame(&f, m, p, x, &tol()).unwrap()
}

fn close(a: (f64, f64), b: (f64, f64), eps: f64) -> bool {
    (a.0 - b.0).abs() <= eps && (a.1 - b.1).abs() <= eps
}

fn problems() -> Vec<BesselProblem> {
    vec![
        BesselProblem::free(0.0, 1.0, 0.5, 0.5).unwrap(),
        BesselProblem::free(0.0, 1.0, 0.3, 0.6).unwrap(),
        BesselProblem::free(0.0, 2.0, 0.0, 0.25).unwrap(),
        BesselProblem::new(-1.0, 1.0, 0.75, 0.0, Potential::Polynomial(vec![1.0, -2.0, 0.5])).unwrap(),
    ]
}

#[test]
fn reference_members_have_unit_data() {
    for p in problems() {
        let frames = reference_frames(&p, &tol()).unwrap();
        for e in [Endpoint::A, Endpoint::B] {
            let f = frames.at(e).unwrap();
            let uh = boundary_values(&p, member(&p, f, Member::Nonprincipal), &frames, &tol()).unwrap();
            let u = boundary_values(&p, member(&p, f, Member::Principal), &frames, &tol()).unwrap();
            assert!(close(uh.at(e).unwrap(), (1.0, 0.0), 1e-8), "{p:?} {e}: {uh:?}");
            assert!(close(u.at(e).unwrap(), (0.0, 1.0), 1e-8), "{p:?} {e}: {u:?}");
        }
    }
}

#[test]
fn quotient_form_of_the_nonprincipal_power() {
    let s = 0.3;
    let p = BesselProblem::free(0.0, 1.0, s, 0.6).unwrap();
    let g = |x: f64| x.powf(0.5 - s) / (2.0 * s);
    let (v, dv) = boundary_value_quotient(&p, g, Endpoint::A, &tol()).unwrap();
    assert!((v - 1.0).abs() < 1e-10 && dv.abs() < 1e-8, "{v} {dv}");
}

#[test]
fn quotient_and_wronskian_forms_agree() {
    for (sa, sb) in [(0.3, 0.6), (0.0, 0.25), (0.5, 0.5), (0.75, 0.0)] {
        let p = BesselProblem::free(0.0, 1.0, sa, sb).unwrap();
        let frames = reference_frames(&p, &tol()).unwrap();
        let fa = frames.at_a.clone().unwrap();
        let fb = frames.at_b.clone().unwrap();
        // a solution with generic data at both ends
        let y = |x: f64| {
            let a = transport_frame(&fa, Member::Nonprincipal, &p, x, &tol()).unwrap();
            let b = transport_frame(&fb, Member::Principal, &p, x, &tol()).unwrap();
            (0.7 * a.0 - 1.3 * b.0, 0.7 * a.1 - 1.3 * b.1)
        };
        let w = boundary_values(&p, y, &frames, &tol()).unwrap();
        for e in [Endpoint::A, Endpoint::B] {
            let q = boundary_value_quotient(&p, |x| y(x).0, e, &tol()).unwrap();
            let w = w.at(e).unwrap();
            assert!((w.0 - q.0).abs() < 1e-6 * (1.0 + w.0.abs()), "({sa},{sb}) {e}: {w:?} {q:?}");
            assert!((w.1 - q.1).abs() < 1e-3 * (1.0 + w.1.abs()), "({sa},{sb}) {e}: {w:?} {q:?}");
        }
    }
}

#[test]
fn trigonometric_basis_at_half() {
    let p = BesselProblem::free(0.0, 1.0, 0.5, 0.5).unwrap();
    let lam = PI * PI;
    let basis = boundary_basis(&p, lam, Endpoint::A, &tol()).unwrap();
    for x in [0.05, 0.2, 0.24] {
        let th = basis.u_hat(x).unwrap();
        let ph = basis.u(x).unwrap();
        assert!(close(th, ((PI * x).cos(), -PI * (PI * x).sin()), 1e-10), "{x}");
        assert!(close(ph, ((PI * x).sin() / PI, (PI * x).cos()), 1e-10), "{x}");
        assert!((wronskian(th, ph) - 1.0).abs() < 1e-12);
    }
    let far = transport_frame(&basis, Member::Nonprincipal, &p, 0.8, &tol()).unwrap();
    assert!(close(far, ((0.8 * PI).cos(), -PI * (0.8 * PI).sin()), 1e-8));
}

#[test]
fn basis_data_is_the_identity() {
    for p in problems() {
        let frames = reference_frames(&p, &tol()).unwrap();
        for e in [Endpoint::A, Endpoint::B] {
            for lam in [0.0, 3.5, -2.0] {
                let basis = boundary_basis(&p, lam, e, &tol()).unwrap();
                let th = boundary_values(&p, member(&p, &basis, Member::Nonprincipal), &frames, &tol()).unwrap();
                let ph = boundary_values(&p, member(&p, &basis, Member::Principal), &frames, &tol()).unwrap();
                assert!(close(th.at(e).unwrap(), (1.0, 0.0), 1e-8), "{p:?} {e} {lam}: {th:?}");
                assert!(close(ph.at(e).unwrap(), (0.0, 1.0), 1e-8), "{p:?} {e} {lam}: {ph:?}");
            }
        }
    }
}

#[test]
fn solution_data_matches_the_ladder() {
    let p = BesselProblem::new(0.0, 1.0, 0.3, 0.6, Potential::Constant(2.0)).unwrap();
    let lam = 7.0;
    let frames = reference_frames(&p, &tol()).unwrap();
    let ba = boundary_basis(&p, lam, Endpoint::A, &tol()).unwrap();
    let bb = boundary_basis(&p, lam, Endpoint::B, &tol()).unwrap();
    let y = |x: f64| {
        let t = transport_frame(&ba, Member::Nonprincipal, &p, x, &tol()).unwrap();
        let f = transport_frame(&ba, Member::Principal, &p, x, &tol()).unwrap();
        (0.4 * t.0 + 2.0 * f.0, 0.4 * t.1 + 2.0 * f.1)
    };
    let ladder = boundary_values(&p, y, &frames, &tol()).unwrap();
    let x = p.midpoint();
    let ya = solution_data(&p, &ba, x, y(x), &tol()).unwrap();
    let yb = solution_data(&p, &bb, x, y(x), &tol()).unwrap();
    assert!(close(ya, (0.4, 2.0), 1e-9));
    assert!(close(ladder.at_a.unwrap(), ya, 1e-8), "{ladder:?} {ya:?}");
    assert!(close(ladder.at_b.unwrap(), yb, 1e-7), "{ladder:?} {yb:?}");
}

#[test]
fn lagrange_identity_at_zero() {
    for p in problems() {
        let frames = reference_frames(&p, &tol()).unwrap();
        let fa = frames.at_a.clone().unwrap();
        let fb = frames.at_b.clone().unwrap();
        let ws: Vec<f64> = (1..10)
            .map(|k| {
                let x = p.a + p.length() * k as f64 / 10.0;
                let y = transport_frame(&fa, Member::Principal, &p, x, &tol()).unwrap();
                let w = transport_frame(&fb, Member::Nonprincipal, &p, x, &tol()).unwrap();
                wronskian(y, w)
            })
            .collect();
        for w in &ws {
            assert!((w - ws[0]).abs() < 1e-9 * (1.0 + ws[0].abs()), "{p:?}: {ws:?}");
        }
    }
}

#[test]
fn boundary_values_are_linear() {
    let p = BesselProblem::free(0.0, 1.0, 0.25, 0.5).unwrap();
    let frames = reference_frames(&p, &tol()).unwrap();
    let fa = frames.at_a.clone().unwrap();
    let fb = frames.at_b.clone().unwrap();
    let g1 = member(&p, &fa, Member::Nonprincipal);
    let g2 = member(&p, &fb, Member::Principal);
    let d1 = boundary_values(&p, &g1, &frames, &tol()).unwrap();
    let d2 = boundary_values(&p, &g2, &frames, &tol()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..4 {
        let (c1, c2): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let g = |x: f64| {
            let (a, b) = (g1(x), g2(x));
            (c1 * a.0 + c2 * b.0, c1 * a.1 + c2 * b.1)
        };
        let d = boundary_values(&p, g, &frames, &tol()).unwrap();
        for e in [Endpoint::A, Endpoint::B] {
            let (x, y, z) = (d.at(e).unwrap(), d1.at(e).unwrap(), d2.at(e).unwrap());
            let want = (c1 * y.0 + c2 * z.0, c1 * y.1 + c2 * z.1);
            assert!(close(x, want, 1e-8 * (1.0 + want.0.abs() + want.1.abs())), "{x:?} {want:?}");
        }
    }
}

#[test]
fn limit_point_endpoints_carry_no_data() {
    let p = BesselProblem::free(0.0, 1.0, 0.5, 1.5).unwrap();
    let frames = reference_frames(&p, &tol()).unwrap();
    assert!(frames.at_b.is_none());
    let d = boundary_values(&p, |x| (x, 1.0), &frames, &tol()).unwrap();
    assert!(d.at_b.is_none());
    assert!(close(d.at_a.unwrap(), (0.0, 1.0), 1e-8));
    assert!(boundary_basis(&p, 0.0, Endpoint::B, &tol()).is_err());
    let both = BesselProblem::free(0.0, 1.0, 1.0, 2.0).unwrap();
    let d = boundary_values(&both, |x| (x, 1.0), &reference_frames(&both, &tol()).unwrap(), &tol()).unwrap();
    assert!(d.at_a.is_none() && d.at_b.is_none());
}
