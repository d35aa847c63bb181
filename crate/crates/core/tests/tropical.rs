mod common;

use std::collections::BTreeSet;

use common::{fixture, rays};
use proptest::prelude::*;
use tropcurve::geometry::{face_for, LatticePolytope, PrimitiveVector, Sense};
use tropcurve::linalg::dot;
use tropcurve::polycore::parse_system;
use tropcurve::tropical::{
    initial_form, initial_system, interior_membership, prevariety, pretropism_rays, system_polytopes,
    two_point_condition, Membership,
};

/// Pointwise oracle: over an integer box, v satisfies the two-point
/// condition exactly when some cone of the fan contains it.
fn check_pointwise(polys: &[LatticePolytope], fan: &tropcurve::tropical::PrevarietyFan, radius: i64) -> Result<(), Vec<i64>> {
    let n = polys[0].nvars();
    let side = (2 * radius + 1) as usize;
    let total = side.pow(n as u32);
    for k in 0..total {
        let mut rem = k;
        let v: Vec<i64> = (0..n)
            .map(|_| {
                let d = (rem % side) as i64 - radius;
                rem /= side;
                d
            })
            .collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        if two_point_condition(polys, &v) != !fan.cones_containing(&v).is_empty() {
            return Err(v);
        }
    }
    Ok(())
}

fn fan_rays(name: &str) -> BTreeSet<Vec<i64>> {
    let s = fixture(name);
    let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
    rays(&fan.rays).into_iter().collect()
}

#[test]
fn quartic_pretropisms_in_both_forms() {
    let expected = vec![vec![1, 0, 0], vec![1, 0, 1], vec![2, 1, 1]];
    for name in ["eq4.pol", "eq5.pol"] {
        let s = fixture(name);
        let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
        assert_eq!(rays(&pretropism_rays(&fan)), expected, "{name}");
    }
}

#[test]
fn quartic_full_ray_sets_match_frozen_oracle() {
    let frozen: BTreeSet<Vec<i64>> = [
        vec![-3, -3, -2],
        vec![-1, 0, 0],
        vec![0, 1, 0],
        vec![1, 0, 0],
        vec![1, 0, 1],
        vec![2, 1, 1],
    ]
    .into_iter()
    .collect();
    assert_eq!(fan_rays("eq4.pol"), frozen);
    assert_eq!(fan_rays("eq5.pol"), frozen);
}

#[test]
fn pointwise_oracle_agrees_on_fixtures() {
    for name in ["eq4.pol", "eq5.pol", "viviani.pol", "eq2.pol", "eq7n3.pol", "linear.pol"] {
        let s = fixture(name);
        let polys = system_polytopes(&s).unwrap();
        let fan = prevariety(&polys).unwrap();
        let radius = if s.nvars() > 3 { 3 } else { 5 };
        assert_eq!(check_pointwise(&polys, &fan, radius), Ok(()), "{name}");
    }
}

#[test]
fn viviani_single_pretropism() {
    let s = fixture("viviani.pol");
    let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
    assert_eq!(rays(&pretropism_rays(&fan)), vec![vec![2, 1, 0]]);
    let frozen: BTreeSet<Vec<i64>> =
        [vec![-1, -1, -1], vec![0, 0, 1], vec![0, 1, 0], vec![2, 1, 0]].into_iter().collect();
    assert_eq!(fan_rays("viviani.pol"), frozen);
}

#[test]
fn family_in_four_space_has_the_hiding_cone() {
    let s = fixture("eq7n4.pol");
    let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
    let frozen: BTreeSet<Vec<i64>> = [
        vec![-1, -1, -1, -2],
        vec![0, 0, 0, 1],
        vec![0, 0, 1, 0],
        vec![0, 1, 0, 0],
        vec![1, 0, 0, 0],
        vec![1, 1, 1, 1],
    ]
    .into_iter()
    .collect();
    assert_eq!(fan_rays("eq7n4.pol"), frozen);
    let v = PrimitiveVector::new(vec![2, 1, 1, 1]).unwrap();
    match interior_membership(&fan, &v) {
        Membership::InteriorOfCone(g) => {
            assert_eq!(rays(&g), vec![vec![1, 0, 0, 0], vec![1, 1, 1, 1]]);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn hidden_tropism_lies_between_two_rays() {
    let s = fixture("eq5.pol");
    let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
    let v = PrimitiveVector::new(vec![3, 1, 1]).unwrap();
    assert_eq!(
        interior_membership(&fan, &v),
        Membership::InteriorOfCone(vec![
            PrimitiveVector::new(vec![1, 0, 0]).unwrap(),
            PrimitiveVector::new(vec![2, 1, 1]).unwrap()
        ])
    );
    let g = PrimitiveVector::new(vec![2, 1, 1]).unwrap();
    assert_eq!(interior_membership(&fan, &g), Membership::RayGenerator);
    let out = PrimitiveVector::new(vec![1, 1, 1]).unwrap();
    assert_eq!(interior_membership(&fan, &out), Membership::Outside);
}

#[test]
fn initial_forms_from_the_examples() {
    let viv = fixture("viviani.pol");
    let ins = initial_system(&viv, &[2, 1, 0]).unwrap();
    assert_eq!(ins.polys()[0].to_string(), "x3^2 - 4");
    assert_eq!(ins.polys()[1].to_string(), "x2^2 - 2*x1");

    let q = fixture("eq4.pol");
    let ins = initial_system(&q, &[2, 1, 1]).unwrap();
    assert_eq!(ins.polys()[0].to_string(), "-x2*x3 - x3^2 + x1");
    assert_eq!(ins.polys()[1].to_string(), "-x2*x3 - x3^2 - x1");

    let fam = fixture("eq7n4.pol");
    let ins = initial_system(&fam, &[2, 1, 1, 1]).unwrap();
    for p in ins.polys() {
        assert_eq!(p.to_string(), "x2 + x3 + x4");
    }
    assert_eq!(initial_system(&fam, &[0, 0, 0, 0]).unwrap(), fam);
}

#[test]
fn empty_input_gives_empty_pretropisms() {
    let s = parse_system("x1^2").unwrap();
    let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
    assert!(fan.cones.is_empty());
    assert!(pretropism_rays(&fan).is_empty());
}

#[test]
fn order_of_polytopes_does_not_matter() {
    let s = fixture("eq5.pol");
    let mut polys = system_polytopes(&s).unwrap();
    let a = prevariety(&polys).unwrap();
    polys.reverse();
    let b = prevariety(&polys).unwrap();
    assert_eq!(a.rays, b.rays);
    assert_eq!(a.to_json(), b.to_json());
}

fn small_support() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(0i64..3, 3), 2..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cones_satisfy_the_defining_property(a in small_support(), b in small_support(), w in prop::collection::vec(1i64..5, 4)) {
        let pa = LatticePolytope::from_points(3, &a).unwrap();
        let pb = LatticePolytope::from_points(3, &b).unwrap();
        prop_assume!(pa.vertices().len() >= 2 && pb.vertices().len() >= 2);
        let polys = vec![pa, pb];
        let fan = prevariety(&polys).unwrap();
        for c in &fan.cones {
            // positive combination of the generators lies in the relative interior
            let mut v = vec![0i64; 3];
            for (k, r) in c.rays.iter().enumerate() {
                for i in 0..3 {
                    v[i] += w[k % w.len()] * r.entries()[i];
                }
            }
            if v.iter().all(|&x| x == 0) { continue; }
            prop_assert!(two_point_condition(&polys, &v));
        }
        prop_assert_eq!(check_pointwise(&polys, &fan, 3), Ok(()));
    }

    #[test]
    fn initial_form_support_is_the_min_face(pts in small_support(), v in prop::collection::vec(-3i64..4, 3)) {
        let mut text = String::new();
        for (k, p) in pts.iter().enumerate() {
            text.push_str(&format!("+{}*x1^{}*x2^{}*x3^{}", k + 1, p[0], p[1], p[2]));
        }
        text.push_str("+ 0*x3^9");
        let s = parse_system(&text).unwrap();
        let p = &s.polys()[0];
        let poly = tropcurve::geometry::newton_polytope(p).unwrap();
        let face = face_for(&poly, &v, Sense::Min);
        let init = initial_form(p, &v).unwrap();
        let supp: BTreeSet<Vec<i64>> = init.support().unwrap().iter().map(|e| e.as_i64()).collect();
        let fpts: BTreeSet<Vec<i64>> = face.points().iter().cloned().collect();
        prop_assert_eq!(supp, fpts);
        let m = face.points().iter().map(|a| dot(a, &v)).min().unwrap();
        prop_assert!(poly.points().iter().all(|a| dot(a, &v) >= m));
    }
}
