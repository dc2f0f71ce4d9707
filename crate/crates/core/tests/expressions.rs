use caustics_core::curve::ParametricCurve;
use caustics_core::expr::parse_expression;
use proptest::prelude::*;

fn expression() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("t".to_string()),
        Just("pi".to_string()),
        Just("e".to_string()),
        (0u32..1000).prop_map(|n| format!("{}", n as f64 / 8.0)),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop::sample::select(vec!["+", "-", "*", "/", "^"]))
                .prop_map(|(a, b, op)| format!("({a}) {op} ({b})")),
            inner.clone().prop_map(|a| format!("-({a})")),
            (inner, prop::sample::select(vec!["sin", "cos", "tan", "sqrt", "exp", "ln", "abs"]))
                .prop_map(|(a, f)| format!("{f}({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_is_a_fixed_point_of_parsing(text in expression()) {
        let tree = parse_expression(&text).unwrap();
        let printed = tree.to_string();
        let reparsed = parse_expression(&printed).unwrap();
        prop_assert_eq!(&reparsed, &tree);
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn printed_expression_evaluates_the_same(text in expression(), t in -2.0f64..2.0) {
        let tree = parse_expression(&text).unwrap();
        let again = parse_expression(&tree.to_string()).unwrap();
        match (tree.eval(t), again.eval(t)) {
            (Ok(a), Ok(b)) => prop_assert!(a == b || (a.is_nan() && b.is_nan())),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }
}

#[test]
fn expression_circle_matches_catalog_circle() {
    let typed = ParametricCurve::expression("cos(t)", "sin(t)", 0.0, 2.0 * std::f64::consts::PI, true).unwrap();
    let catalog = ParametricCurve::unit_circle();
    for k in 0..64 {
        let t = 0.1 * k as f64;
        let a = typed.frenet_sample(t).unwrap();
        let b = catalog.frenet_sample(t).unwrap();
        assert!(a.pos.distance(b.pos) < 1e-9);
        assert!(a.normal.distance(b.normal) < 1e-9);
        assert!((a.kappa - b.kappa).abs() < 1e-9);
    }
}

#[test]
fn arc_length_round_trip() {
    for curve in [ParametricCurve::ellipse(2.0, 1.0), ParametricCurve::involute(), ParametricCurve::parabola(0.7)] {
        let total = curve.total_length().unwrap();
        for k in 0..=20 {
            let s = total * k as f64 / 20.0;
            let t = curve.t_at_arclength(s).unwrap();
            let back = curve.arc_length(curve.domain().0, t).unwrap();
            assert!((back - s).abs() < 1e-9 * (1.0 + total), "{curve}: {s} -> {t} -> {back}");
        }
    }
}

#[test]
fn ellipse_quarter_length() {
    let curve = ParametricCurve::ellipse(2.0, 1.0);
    let quarter = curve.arc_length(0.0, std::f64::consts::FRAC_PI_2).unwrap();
    assert!((quarter - 2.422_112_055_136_919).abs() < 1e-10);
}
