#![allow(dead_code)]

use std::path::PathBuf;

use tropcurve::polycore::{parse_system, ExactSystem};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> ExactSystem {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_system(&text).expect("fixture parses")
}

pub fn rays(v: &[tropcurve::geometry::PrimitiveVector]) -> Vec<Vec<i64>> {
    v.iter().map(|r| r.entries().to_vec()).collect()
}

/// Same supports, coefficients replaced by seeded random rationals p/q with
/// 1 ≤ |p| ≤ 9 and 1 ≤ q ≤ 7.
pub fn random_coefficients(s: &ExactSystem, seed: u64) -> ExactSystem {
    use rand::{Rng, SeedableRng};
    use tropcurve::polycore::{exact, Polynomial, PolynomialSystem};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let polys = s
        .polys()
        .iter()
        .map(|p| {
            Polynomial::from_terms(
                p.nvars(),
                p.terms()
                    .map(|(e, _)| {
                        let num = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
                        (e.clone(), exact(num, rng.gen_range(1..=7)))
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    PolynomialSystem::new(polys, s.nvars()).expect("same shape")
}

/// Random coefficients on the supports of the polynomials that attain the
/// degree bound; for square input (n polynomials in n unknowns) generic
/// coefficients would leave only isolated points, so the curve is kept by
/// dropping to that (n−1)-subset.
pub fn generic_curve(s: &ExactSystem, seed: u64) -> ExactSystem {
    use tropcurve::polycore::PolynomialSystem;
    let (sub, _) = tropcurve::mixedvol::bounding_subset(s).expect("curve shape");
    let picked = sub.iter().map(|&i| s.polys()[i].clone()).collect();
    random_coefficients(&PolynomialSystem::new(picked, s.nvars()).expect("same shape"), seed)
}

/// Random tuple: n ∈ {2,3,4}, each support 1..=6 points with small entries.
pub fn random_tuple(rng: &mut rand_chacha::ChaCha8Rng) -> Vec<tropcurve::geometry::LatticePolytope> {
    use rand::Rng;
    let n = rng.gen_range(2..=4);
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=6);
            let pts: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..3)).collect()).collect();
            tropcurve::geometry::LatticePolytope::from_points(n, &pts).unwrap()
        })
        .collect()
}
