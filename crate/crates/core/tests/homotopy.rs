mod common;

use common::{fixture, generic_curve};
use num_complex::Complex64;
use tropcurve::geometry::PrimitiveVector;
use tropcurve::homotopy::{analyze_samples, run_curve, Config, HomotopyError, PathSample, PathStatus};
use tropcurve::mixedvol::{degree_bound, degree_decomposition};
use tropcurve::polycore::parse_system;
use tropcurve::tropical::{interior_membership, pretropism_rays, prevariety, system_polytopes, Membership};

fn summary(name: &str, seed: u64) -> Vec<(Vec<i64>, u32, usize)> {
    let r = run_curve(&fixture(name), &Config::with_seed(seed)).unwrap();
    assert!(r.inconclusive.is_empty(), "{name} seed {seed}: {:?}", r.inconclusive);
    r.groups.iter().map(|g| (g.tropism.direction.entries().to_vec(), g.tropism.winding, g.multiplicity)).collect()
}

#[test]
fn quartic_hides_three_one_one() {
    for seed in 0..5 {
        let got = summary("eq4.pol", seed);
        assert_eq!(got, vec![(vec![1, 0, 1], 1, 1), (vec![3, 1, 1], 3, 3)], "seed {seed}");
    }
}

#[test]
fn viviani_single_branch_direction() {
    assert_eq!(summary("viviani.pol", 0), vec![(vec![2, 1, 0], 2, 4)]);
}

#[test]
fn a_line_tracks_one_path() {
    assert_eq!(summary("linear.pol", 3), vec![(vec![1, 1, 1], 1, 1)]);
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Along a branch of the cyclic-style family, x_i² = x1² − 2x1 for
/// 2 ≤ i < n, so x_i = ±r with r ~ √(-2 x1), and x_n = x1 − x1² − Σ±r.
/// When the signs cancel (only possible for even n) x_n ~ x1 and the
/// direction is (2,1,…,1,2); otherwise it is (2,1,…,1).
#[test]
fn cyclic_family_directions() {
    for n in 4..=7 {
        let r = run_curve(&fixture(&format!("eq7n{n}.pol")), &Config::with_seed(0)).unwrap();
        let total = 1usize << (n - 2);
        assert_eq!(r.path_count, total);
        assert_eq!(r.degree_bound, Some(total as i64));
        assert!(r.inconclusive.is_empty());
        let mut main = vec![2i64];
        main.extend(std::iter::repeat(1).take(n - 1));
        let balanced = if (n - 2) % 2 == 0 { binomial(n - 2, (n - 2) / 2) } else { 0 };
        assert_eq!(r.group(&main).map(|g| g.multiplicity).unwrap_or(0), total - balanced, "n={n}");
        let mut other = main.clone();
        other[n - 1] = 2;
        assert_eq!(r.group(&other).map(|g| g.multiplicity).unwrap_or(0), balanced, "n={n}");
        for p in &r.paths {
            assert_eq!(p.status, PathStatus::Converged);
            assert!(p.accuracy <= 1e-8);
        }
    }
}

#[test]
fn same_seed_same_report() {
    let s = fixture("eq4.pol");
    let a = serde_json::to_string(&run_curve(&s, &Config::with_seed(11)).unwrap()).unwrap();
    let b = serde_json::to_string(&run_curve(&s, &Config::with_seed(11)).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn generic_coefficients_give_ray_generators() {
    for name in ["eq7n4.pol", "eq5.pol"] {
        let base = fixture(name);
        for seed in 0..3 {
            let s = generic_curve(&base, 100 + seed);
            let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
            let bound = degree_bound(&s).unwrap();
            assert_eq!(degree_decomposition(&s, &pretropism_rays(&fan)).unwrap().total, bound);
            let r = run_curve(&s, &Config::with_seed(seed)).unwrap();
            assert_eq!(r.path_count as i64, bound);
            assert!(r.inconclusive.is_empty());
            for g in r.groups.iter().filter(|g| g.status == PathStatus::Converged) {
                assert_eq!(interior_membership(&fan, &g.tropism.direction), Membership::RayGenerator, "{name} {seed}");
            }
        }
    }
}

#[test]
fn rejects_bad_shapes_and_config() {
    let s = parse_system("x1 + x2 + x3 - 1;").unwrap();
    assert!(matches!(run_curve(&s, &Config::default()), Err(HomotopyError::WrongShape { .. })));
    let mut cfg = Config::default();
    cfg.r = 1.5;
    assert!(matches!(run_curve(&fixture("eq4.pol"), &cfg), Err(HomotopyError::InvalidConfig(_))));
}

/// Synthetic samples x(s) = (s^{3/2}(1+s), s^{1/2}, 2 s^{1/2}) have winding 2
/// and tropism (3,1,1).
#[test]
fn synthetic_half_integer_branch() {
    let cfg = Config::default();
    let samples: Vec<PathSample> = (0..16)
        .map(|k| {
            let s = 0.1 * cfg.r.powi(k);
            let h = s.sqrt();
            PathSample {
                s,
                t: 1.0 - s,
                x: vec![Complex64::new(h * h * h * (1.0 + s), 0.0), Complex64::new(h, 0.0), Complex64::new(2.0 * h, 0.0)],
                condition_estimate: 1.0,
                precision_bits: 53,
            }
        })
        .collect();
    let e = analyze_samples(0, samples, &cfg);
    assert_eq!(e.status, PathStatus::Converged);
    let t = e.tropism.unwrap();
    assert_eq!(t.direction, PrimitiveVector::new(vec![3, 1, 1]).unwrap());
    assert_eq!(t.winding, 2);
}
