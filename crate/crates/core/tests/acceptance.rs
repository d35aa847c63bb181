//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line.
//! Criteria 4 and 6 are known to be unattainable as stated (see the detail
//! lines); the test asserts that exactly those two fail, so any regression
//! elsewhere, or a silent "fix" of those two, is caught.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{fixture, fixture_path, generic_curve, random_coefficients, random_tuple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tropcurve::geometry::{PrimitiveVector, UnimodularMatrix};
use tropcurve::homotopy::{run_curve, solve_square, Config, PathStatus};
use tropcurve::mixedvol::{degree_bound, degree_decomposition, mixed_volume, mixed_volume_oracle};
use tropcurve::polycore::{exact, parse_system, Exact};
use tropcurve::puiseux::{
    certify, extend_series, leading_terms, transformed_initial_system, Coefficient, Pin, PuiseuxError, PuiseuxExpansion,
};
use tropcurve::tropical::{interior_membership, pretropism_rays, prevariety, system_polytopes, Membership};

const KNOWN_UNATTAINABLE: [usize; 2] = [4, 6];

struct Outcome {
    pass: bool,
    detail: String,
}

fn dir(v: &[i64]) -> PrimitiveVector {
    PrimitiveVector::new(v.to_vec()).unwrap()
}

fn rays_of(s: &tropcurve::polycore::ExactSystem) -> Vec<Vec<i64>> {
    let fan = prevariety(&system_polytopes(s).unwrap()).unwrap();
    pretropism_rays(&fan).iter().map(|r| r.entries().to_vec()).collect()
}

fn within(start: Instant, limit: Duration, what: &str, detail: &mut String) -> bool {
    let t = start.elapsed();
    detail.push_str(&format!("; {what} {:.2}s (limit {}s)", t.as_secs_f64(), limit.as_secs()));
    t < limit
}

fn exact_terms(e: &PuiseuxExpansion, i: usize) -> Option<Vec<(i64, Exact)>> {
    e.coords[i]
        .iter()
        .map(|(k, c)| match c {
            Coefficient::Exact(z) => Some((*k, z.clone())),
            Coefficient::Float(_) => None,
        })
        .collect()
}

fn terms(list: &[(i64, i64, i64)]) -> Vec<(i64, Exact)> {
    list.iter().map(|&(k, n, d)| (k, exact(n, d))).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = fixture("eq5.pol");
    let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
    let pre: Vec<Vec<i64>> = pretropism_rays(&fan).iter().map(|r| r.entries().to_vec()).collect();
    let rays_ok = pre == vec![vec![1, 0, 0], vec![1, 0, 1], vec![2, 1, 1]];
    let m = interior_membership(&fan, &dir(&[3, 1, 1]));
    let interior_ok = m == Membership::InteriorOfCone(vec![dir(&[1, 0, 0]), dir(&[2, 1, 1])]);
    let eq4 = rays_of(&fixture("eq4.pol"));
    let mut detail = format!("pretropisms {pre:?}; (3,1,1): {m:?}; eq4.pol gives {eq4:?}");
    let fast = within(start, Duration::from_secs(1), "runtime", &mut detail);
    Outcome { pass: rays_ok && interior_ok && fast, detail }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let s = fixture("viviani.pol");
    let pre = rays_of(&s);
    let v = dir(&[2, 1, 0]);
    let pin = Pin::new(0, exact(2, 1)).unwrap();
    let leading = leading_terms(&s, &v, &pin, &Config::default()).unwrap();
    let want = terms(&[(1, 2, 1), (3, -1, 1), (5, -1, 4), (7, -1, 8), (9, -5, 64)]);
    let mut found = None;
    for l in &leading {
        let e = extend_series(&s, &v, l, 9).unwrap();
        if exact_terms(&e, 1).as_ref() == Some(&want) {
            found = Some(e);
        }
    }
    let mut detail = format!("pretropisms {pre:?}; {} leading vectors", leading.len());
    let ok = match &found {
        Some(e) => {
            let c = certify(e, &s);
            let x3 = e.coords[2].last().map(|(k, _)| *k);
            detail.push_str(&format!(
                "; x2 matches 2, -1, -1/4, -1/8, -5/64 at t^1..t^9; x3 last exponent {x3:?}; vanishing orders {:?}",
                c.orders
            ));
            c.exact && c.orders.iter().all(|o| o.is_none_or(|o| o >= 10))
        }
        None => {
            detail.push_str("; no branch reproduces the x2 coefficients");
            false
        }
    };
    let fast = within(start, Duration::from_secs(1), "runtime", &mut detail);
    Outcome { pass: pre == vec![vec![2, 1, 0]] && ok && fast, detail }
}

fn criterion_3() -> Outcome {
    let s = fixture("eq4.pol");
    let v = dir(&[2, 1, 1]);
    let u = UnimodularMatrix::new(vec![vec![2, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
    let t = transformed_initial_system(&s, &v, &u).unwrap();
    // y2, y3 written as x1, x2
    let want = parse_system("x1 - x2 - 1; -x1 - x2 - 1;").unwrap();
    let shape_ok = t.polys() == want.polys();
    // generic coefficients on these supports: exactly one root in the torus
    let generic_roots: Vec<usize> = (0..5)
        .map(|seed| {
            let g = random_coefficients(&t, 500 + seed);
            let sols = solve_square(g.polys(), &Config::with_seed(seed), 0).unwrap();
            sols.iter().filter(|z| z.point.iter().all(|c| c.norm() > 1e-8)).count()
        })
        .collect();
    let weight = degree_decomposition(&s, &[v.clone()]).unwrap().weight_of(&[2, 1, 1]).unwrap_or(0);
    let hidden = leading_terms(&s, &v, &Pin::new(0, exact(1, 1)).unwrap(), &Config::default());
    let hidden_ok = hidden == Err(PuiseuxError::NoTorusSolution);
    let mut detail = format!(
        "transformed initial system {}; generic torus roots {generic_roots:?}; weight of (2,1,1) {weight}; \
         actual coefficients: {}",
        if shape_ok { "matches" } else { "differs" },
        if hidden_ok { "no torus root (hidden tropism)" } else { "unexpected leading terms" }
    );
    let mut runs_ok = true;
    for seed in 0..5u64 {
        let start = Instant::now();
        let r = run_curve(&s, &Config::with_seed(seed)).unwrap();
        let g = r.group(&[3, 1, 1]);
        let ok = r.path_count == 4 && g.is_some_and(|g| g.tropism.winding == 3 && g.status == PathStatus::Converged);
        detail.push_str(&format!(
            "; seed {seed}: (3,1,1) x{} winding {}",
            g.map_or(0, |g| g.multiplicity),
            g.map_or(0, |g| g.tropism.winding)
        ));
        runs_ok &= ok & within(start, Duration::from_secs(5), "", &mut detail);
    }
    let pass = shape_ok && generic_roots.iter().all(|&k| k == 1) && weight == 2 && hidden_ok && runs_ok;
    Outcome { pass, detail }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let s = fixture("eq5.pol");
    let v = dir(&[3, 1, 1]);
    let pin = Pin::new(1, exact(1, 1)).unwrap();
    let leading = leading_terms(&s, &v, &pin, &Config::default()).unwrap();
    let e = extend_series(&s, &v, &leading[0], 6).unwrap();
    let cert = certify(&e, &s);
    let x1 = exact_terms(&e, 0).unwrap();
    let x2 = exact_terms(&e, 1).unwrap();
    let x3 = exact_terms(&e, 2).unwrap();
    let printed_x1 = terms(&[(3, 108, 1)]);
    let printed_x2 = terms(&[(1, 1, 1), (2, -3, 1), (3, -15, 1), (4, 27, 1), (5, 36, 1)]);
    let printed_x3 = terms(&[(1, -1, 1), (3, -3, 1), (4, -18, 1), (5, 18, 1), (6, 162, 1)]);
    let matches = x1 == printed_x1 && x2[..5.min(x2.len())] == printed_x2[..] && x3 == printed_x3;

    // Diagnose the normalization: t -> λt with λ = -6 sends x1 to 108 t^3;
    // dividing x2 and x3 by their new leading coefficient -6 gives the
    // printed lines, which is not a solution of the system.
    let lambda = exact(-6, 1);
    let scale = |list: &[(i64, Exact)], div: &Exact| -> Vec<(i64, Exact)> {
        list.iter().map(|(k, c)| (*k, c.clone() * num_traits::pow(lambda.clone(), *k as usize) / div.clone())).collect()
    };
    let one = exact(1, 1);
    let rescaled_x1 = scale(&x1, &one);
    let rescaled_x2 = scale(&x2, &lambda);
    let rescaled_x3 = scale(&x3, &lambda);
    let explained =
        rescaled_x1 == printed_x1 && rescaled_x2[..5] == printed_x2[..] && rescaled_x3 == printed_x3;
    let printed = PuiseuxExpansion {
        coords: vec![
            printed_x1.iter().map(|(k, c)| (*k, Coefficient::Exact(c.clone()))).collect(),
            printed_x2.iter().map(|(k, c)| (*k, Coefficient::Exact(c.clone()))).collect(),
            printed_x3.iter().map(|(k, c)| (*k, Coefficient::Exact(c.clone()))).collect(),
        ],
        ..e.clone()
    };
    let printed_cert = certify(&printed, &s);
    let mut detail = format!(
        "pin x2=1 gives x1 = ({})t^3 (printed: 108t^3), computed expansion certified {}; \
         printed expansion substituted: vanishing orders {:?} vs required {:?}; \
         printed x2, x3 {} our branch under t -> -6t with x2, x3 divided by -6 (mixed normalization)",
        x1[0].1.re,
        cert.passed,
        printed_cert.orders,
        printed_cert.required,
        if explained { "equal" } else { "do not equal" }
    );
    let fast = within(start, Duration::from_secs(2), "runtime", &mut detail);
    Outcome { pass: matches && cert.passed && fast, detail }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut agree = 0;
    for _ in 0..50 {
        let t = random_tuple(&mut rng);
        if mixed_volume(&t).unwrap() == mixed_volume_oracle(&t).unwrap() {
            agree += 1;
        }
    }
    let s = fixture("eq5.pol");
    let bound = degree_bound(&s).unwrap();
    let d = degree_decomposition(&s, &pretropism_rays(&prevariety(&system_polytopes(&s).unwrap()).unwrap())).unwrap();
    let weights: Vec<(Vec<i64>, i64)> = d.terms.iter().map(|t| (t.ray.entries().to_vec(), t.weight)).collect();
    let want = vec![(vec![1, 0, 0], 1), (vec![1, 0, 1], 1), (vec![2, 1, 1], 2)];
    let mut detail = format!("{agree}/50 oracle agreements; degree bound {bound}; weights {weights:?}");
    let fast = within(start, Duration::from_secs(30), "runtime", &mut detail);
    Outcome { pass: agree == 50 && bound == 4 && d.total == 4 && weights == want && fast, detail }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_6() -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for n in 4..=8usize {
        let start = Instant::now();
        let r = run_curve(&fixture(&format!("eq7n{n}.pol")), &Config::with_seed(0)).unwrap();
        let elapsed = start.elapsed();
        let mut main = vec![2i64];
        main.extend(std::iter::repeat(1).take(n - 1));
        let converged: Vec<_> = r.paths.iter().filter(|p| p.status == PathStatus::Converged).collect();
        let same = converged.iter().all(|p| p.tropism.as_ref().is_some_and(|t| t.direction.entries() == main));
        let accurate = converged.iter().all(|p| p.accuracy <= 1e-8);
        let groups: Vec<String> = r
            .groups
            .iter()
            .map(|g| format!("{:?} x{}", g.tropism.direction.entries(), g.multiplicity))
            .collect();
        detail.push_str(&format!(
            "n={n}: {} paths, {} converged, groups [{}], {:.2}s; ",
            r.path_count,
            converged.len(),
            groups.join(", "),
            elapsed.as_secs_f64()
        ));
        pass &= r.path_count == 1 << (n - 2) && same && accurate && converged.len() == r.path_count;
        if n == 8 {
            pass &= elapsed < Duration::from_secs(60);
        }
    }
    let s = fixture("eq7n4.pol");
    let d = degree_decomposition(&s, &[dir(&[1, 1, 1, 1]), dir(&[1, 0, 0, 0])]).unwrap();
    let mv = (d.weight_of(&[1, 1, 1, 1]).unwrap_or(0), d.weight_of(&[1, 0, 0, 0]).unwrap_or(0));
    pass &= mv == (1, 3);
    detail.push_str(&format!(
        "n=4 initial mixed volumes {mv:?}; for even n the C(n-2,(n-2)/2) paths whose square roots cancel in \
         x_n have direction (2,1,...,1,2) (n=6: {}, n=8: {})",
        binomial(4, 2),
        binomial(6, 3)
    ));
    Outcome { pass, detail }
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for name in ["eq7n4.pol", "eq5.pol"] {
        let base = fixture(name);
        let mut tropisms = BTreeSet::new();
        let mut interior = 0;
        let mut totals_ok = 0;
        for seed in 0..10u64 {
            let s = generic_curve(&base, 700 + seed);
            let fan = prevariety(&system_polytopes(&s).unwrap()).unwrap();
            let bound = degree_bound(&s).unwrap();
            if degree_decomposition(&s, &pretropism_rays(&fan)).unwrap().total == bound {
                totals_ok += 1;
            }
            let r = run_curve(&s, &Config::with_seed(seed)).unwrap();
            for g in r.groups.iter().filter(|g| g.status == PathStatus::Converged) {
                tropisms.insert(g.tropism.direction.entries().to_vec());
                if interior_membership(&fan, &g.tropism.direction) != Membership::RayGenerator {
                    interior += 1;
                }
            }
        }
        pass &= interior == 0 && totals_ok == 10;
        detail.push_str(&format!(
            "{name}: tropisms {tropisms:?}, {interior} not ray generators, {totals_ok}/10 totals = bound; "
        ));
    }
    detail.push_str(&format!("{:.2}s", start.elapsed().as_secs_f64()));
    Outcome { pass, detail }
}

/// Command output with the wall-time line removed.
fn cli_bytes(args: &[String]) -> (Option<i32>, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_tropcurve")).args(args).output().expect("binary runs");
    let text = String::from_utf8_lossy(&o.stdout);
    let kept: Vec<&str> = text.lines().filter(|l| !l.trim_start().starts_with("\"wall_time_seconds\"")).collect();
    (o.status.code(), kept.join("\n").into_bytes())
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let dir = fixture_path("");
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".pol"))
        .collect();
    names.sort();
    let mut runs = 0;
    let mut differ = Vec::new();
    for name in &names {
        let path = fixture_path(name).display().to_string();
        let small = std::fs::read_to_string(fixture_path(name))
            .ok()
            .and_then(|t| parse_system(&t).ok())
            .is_some_and(|s| s.nvars() <= 8);
        let mut cmds: Vec<Vec<&str>> = vec![vec!["prevariety"]];
        if small {
            cmds.push(vec!["degree"]);
            cmds.push(vec!["endgame", "--seed", "5"]);
        }
        for c in cmds {
            let mut args: Vec<String> = vec![c[0].into(), path.clone()];
            args.extend(c[1..].iter().map(|s| s.to_string()));
            args.push("--json".into());
            runs += 1;
            if cli_bytes(&args) != cli_bytes(&args) {
                differ.push(format!("{name} {}", c.join(" ")));
            }
        }
    }
    for (name, ray, pin) in [("viviani.pol", "2,1,0", "x1=2"), ("eq5.pol", "3,1,1", "x2=1"), ("eq2.pol", "2,1,1", "x1=1")]
    {
        let args: Vec<String> =
            ["series", &fixture_path(name).display().to_string(), "--ray", ray, "--pin", pin, "--order", "8", "--json"]
                .iter()
                .map(|s| s.to_string())
                .collect();
        runs += 1;
        if cli_bytes(&args) != cli_bytes(&args) {
            differ.push(format!("{name} series"));
        }
    }
    let detail = format!(
        "{runs} command/fixture pairs run twice over {} fixtures, differing: {differ:?}; {:.1}s",
        names.len(),
        start.elapsed().as_secs_f64()
    );
    Outcome { pass: differ.is_empty(), detail }
}

#[test]
fn acceptance() {
    let criteria: [(usize, &str, fn() -> Outcome); 8] = [
        (1, "prevariety of eq5 and the hidden ray (3,1,1)", criterion_1),
        (2, "Viviani series, exact, certified", criterion_2),
        (3, "hidden tropism: initial system at (2,1,1), end game on eq4", criterion_3),
        (4, "eq5 expansion along (3,1,1) with x2 pinned to 1", criterion_4),
        (5, "mixed volume against the oracle, degree of eq5", criterion_5),
        (6, "eq7 family, n = 4..8", criterion_6),
        (7, "generic coefficients give ray generators", criterion_7),
        (8, "byte-identical JSON for a fixed seed", criterion_8),
    ];
    let mut failed = BTreeSet::new();
    for (k, name, run) in criteria {
        let o = run();
        println!("criterion {k}: {} - {name}", if o.pass { "PASS" } else { "FAIL" });
        println!("    {}", o.detail);
        if !o.pass {
            failed.insert(k);
        }
    }
    let known: BTreeSet<usize> = KNOWN_UNATTAINABLE.into_iter().collect();
    assert_eq!(failed, known, "failing criteria differ from the documented unattainable set");
}
