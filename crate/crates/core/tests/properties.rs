use std::sync::Arc;

use finsler_core::jets::Layout;
use finsler_core::{builtin_metric, parse_expr, parse_metric, Family, Jet64};
use proptest::prelude::*;

fn pair(a: f64, b: f64, order: usize) -> (Jet64, Jet64) {
    let layout: Arc<Layout> = Layout::shared(2, order);
    (Jet64::variable(&layout, order, 0, a), Jet64::variable(&layout, order, 1, b))
}

fn close(a: &Jet64, b: &Jet64, tol: f64) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(p, q)| (p - q).abs() <= tol * (1.0 + p.abs().max(q.abs())))
}

proptest! {
    #[test]
    fn product_rule(a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let (u, v) = pair(a, b, 4);
        let f = &u.sin() * &v.exp();
        let g = &u * &v + u.cos();
        let lhs = (&f * &g).partial(0).unwrap();
        let rhs = &f.partial(0).unwrap() * &g.truncate(3) + &f.truncate(3) * &g.partial(0).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn exp_ln_and_sqrt_invert(a in 0.2..3.0f64, b in 0.2..3.0f64) {
        let (u, v) = pair(a, b, 5);
        let w = &u * &v + u.clone();
        prop_assert!(close(&w.try_ln().unwrap().exp(), &w, 1e-12));
        let s = w.try_sqrt().unwrap();
        prop_assert!(close(&(&s * &s), &w, 1e-12));
        prop_assert!(close(&(&w * &w.try_recip().unwrap()), &w.lift(1.0), 1e-12));
    }

    #[test]
    fn mixed_partials_commute(a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let (u, v) = pair(a, b, 4);
        let f = (&u * &v).sin() + (&u * &u * &v).exp();
        let p = f.partial_multi(&[0, 1, 1]).unwrap();
        let q = f.partial_multi(&[1, 0, 1]).unwrap();
        prop_assert!(close(&p, &q, 1e-13));
    }

    #[test]
    fn unparse_round_trips(c in -3.0..3.0f64, e in 2u32..5, x in -1.0..1.0f64, y in 0.5..2.0f64) {
        let text = format!("sqrt(({c}) * x1^2 * y1^2 + y2^{e} * y1^{}) + sin(x2) * y1", 2 - e as i64);
        let tree = parse_expr(&text, 2).unwrap();
        let again = parse_expr(&tree.unparse(), 2).unwrap();
        let xs = [x, 0.3];
        let ys = [y, 0.7];
        let (a, b) = (tree.eval_value(&xs, &ys), again.eval_value(&xs, &ys));
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs())),
            (Err(_), Err(_)) => {}
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn builtin_metrics_are_homogeneous(t in 0.1..5.0f64, x in -1.0..1.0f64, y1 in -2.0..2.0f64, y2 in 0.3..2.0f64) {
        for family in Family::ALL {
            let spec = builtin_metric(family, 2, Default::default()).unwrap();
            let xs = [x.abs() + 0.4, 0.5];
            let ys = [y1, y2];
            let l = spec.eval_value(&xs, &ys).unwrap();
            let lt = spec.eval_value(&xs, &[t * y1, t * y2]).unwrap();
            prop_assert!((lt - t * l).abs() <= 1e-12 * (1.0 + lt.abs()), "{family}");
        }
    }

    #[test]
    fn expression_and_builtin_euclidean_agree(y1 in -2.0..2.0f64, y2 in 0.3..2.0f64) {
        let a = parse_metric("sqrt(y1^2 + y2^2)", 2).unwrap();
        let b = builtin_metric(Family::Euclidean, 2, Default::default()).unwrap();
        let (p, q) = (a.eval_value(&[0.0, 0.0], &[y1, y2]).unwrap(), b.eval_value(&[0.0, 0.0], &[y1, y2]).unwrap());
        prop_assert!((p - q).abs() <= 1e-15 * (1.0 + p));
    }
}
