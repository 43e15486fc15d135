use tcb_core::bounds::{explain, parse_space, BoundsEngine, Flavor, Side, SpaceSpec};

fn interval(space: &str, n: usize, flavor: Flavor) -> (u64, u64) {
    let b = BoundsEngine::new().compute_bounds(&parse_space(space).unwrap(), n, flavor).unwrap();
    (b.lower, b.upper)
}

#[test]
fn flavors_are_ordered() {
    for space in ["S(1)", "S(2)", "S(3)", "RP(2)", "RP(3)", "RP(4)", "Product(S(2),S(3))", "Surface(2)"] {
        for n in 2..=6 {
            let all = BoundsEngine::new().compute_all(&parse_space(space).unwrap(), n).unwrap();
            let [tc, beta, sigma] = [&all[0], &all[1], &all[2]];
            assert_eq!((tc.flavor, beta.flavor, sigma.flavor), (Flavor::TC, Flavor::TCbeta, Flavor::TCsigma));
            // TC ≤ TCβ ≤ TCΣ pushes lower bounds up and upper bounds down the chain
            assert!(tc.lower <= beta.lower && beta.lower <= sigma.lower, "{space} n={n}");
            assert!(tc.upper <= beta.upper && beta.upper <= sigma.upper, "{space} n={n}");
            for b in &all {
                assert!(1 <= b.lower && b.lower <= b.upper);
            }
        }
    }
}

#[test]
fn projective_plane_values() {
    for n in 2..=6 {
        let v = 2 * n as u64 + 1;
        assert_eq!(interval("RP(2)", n, Flavor::TCsigma), (v, v));
    }
}

#[test]
fn beta_two_equals_sigma_two() {
    for space in ["S(1)", "S(3)", "S(4)", "RP(2)", "Power(S(2),2)"] {
        assert_eq!(interval(space, 2, Flavor::TCbeta), interval(space, 2, Flavor::TCsigma), "{space}");
    }
}

#[test]
fn derivations_are_self_contained() {
    let b = BoundsEngine::new()
        .compute_bounds(&SpaceSpec::Sphere(2), 4, Flavor::TCsigma)
        .unwrap();
    let last_lower = b.derivations.iter().rev().find(|d| d.side == Side::Lower).unwrap();
    let last_upper = b.derivations.iter().rev().find(|d| d.side == Side::Upper).unwrap();
    assert_eq!(last_lower.value, b.lower);
    assert_eq!(last_upper.value, b.upper);
    assert!(b.derivations.iter().all(|d| !d.citation.is_empty()));
    let text = explain(&b);
    assert!(text.starts_with("5 ≤ TC^Σ_4 ≤ 5"), "{text}");
}

#[test]
fn invalid_n() {
    assert!(BoundsEngine::new().compute_all(&SpaceSpec::Sphere(2), 1).is_err());
}

#[test]
fn json_shape() {
    let b = BoundsEngine::new().compute_bounds(&SpaceSpec::RP(4), 4, Flavor::TCsigma).unwrap();
    let v = serde_json::to_value(&b).unwrap();
    for key in ["flavor", "n", "lower", "upper", "derivations"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["space"], "RP(4)");
    assert_eq!((b.lower, b.upper), (17, 17));
}
