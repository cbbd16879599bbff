//! Acceptance suite: one test per criterion, each printing a single
//! `[PASS]`/`[FAIL]` line (run with `--nocapture` to see them inline).
//! Random cases use a fixed seed, so every run checks the same instances.

use std::panic::{catch_unwind, AssertUnwindSafe};

use cuspfol::weights::euler_identity_holds;
use cuspfol::{
    assemble_generator, cusp_surface, cuspidal_decompose, differential, find_quasihomogeneous_weights,
    free_basis_check, gs_condition, gterm_inequalities, is_logarithmic, log_pair,
    loray_condition_2d, parse_form, parse_poly, resolve, saito_decompose, CuspError, CuspidalSpec,
    DiffForm, FreeBasisOutcome, GPoly, ParseErrorKind, Poly, QPoly, Rat, Vars,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn criterion(name: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("[PASS] {name}"),
        Err(cause) => {
            println!("[FAIL] {name}");
            std::panic::resume_unwind(cause);
        }
    }
}

fn xyz() -> Vars {
    Vars::new(&["x", "y", "z"])
}

fn xy() -> Vars {
    Vars::new(&["x", "y"])
}

fn random_poly(rng: &mut ChaCha8Rng, vars: &Vars, terms: usize, max_exp: u32) -> QPoly {
    let mut acc = Poly::zero(vars);
    for _ in 0..terms {
        let exps: Vec<u32> = (0..vars.len()).map(|_| rng.gen_range(0..=max_exp)).collect();
        let c = rng.gen_range(-5i64..=5);
        acc = &acc + &Poly::term(vars, &exps, Rat::int(c));
    }
    acc
}

fn random_one_form(rng: &mut ChaCha8Rng, vars: &Vars, terms: usize, max_exp: u32) -> DiffForm<Rat> {
    let coeffs: Vec<QPoly> = (0..vars.len())
        .map(|_| random_poly(rng, vars, terms, max_exp))
        .collect();
    DiffForm::one_form(vars, &coeffs)
}

#[test]
fn freeness_cofactor_for_the_plane_family() {
    criterion(
        "plane family y^2 + x^n: basis wedge gives the unit cofactor 2n (n = 2..6)",
        || {
            let v = xy();
            for n in 2u32..=6 {
                let f = parse_poly(&format!("y^2 + x^{n}"), &v).unwrap();
                let omega1 = differential(&f);
                let omega2 = parse_form(&format!("2*x*dy - {n}*y*dx"), &v).unwrap();
                match free_basis_check(&[omega1, omega2], &f) {
                    FreeBasisOutcome::Divides { cofactor, is_unit } => {
                        assert!(is_unit, "cofactor must be a unit for n = {n}");
                        assert_eq!(cofactor, Poly::int(&v, 2 * i64::from(n)));
                    }
                    other => panic!("expected a dividing wedge for n = {n}, got {other:?}"),
                }
            }
        },
    );
}

#[test]
fn assembled_generators_are_integrable_and_logarithmic() {
    criterion(
        "50 random family generators satisfy omega ^ d(omega) = 0 and are logarithmic",
        || {
            let v = xyz();
            let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
            let pairs = [(2u32, 3u32), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)];
            let root_pool = [-3i64, -2, -1, 1, 2, 3];
            for case in 0..50 {
                let (p, q) = pairs[rng.gen_range(0..pairs.len())];
                let nroots = rng.gen_range(1..=2usize);
                let mut roots: Vec<Rat> = Vec::new();
                while roots.len() < nroots {
                    let r = Rat::int(root_pool[rng.gen_range(0..root_pool.len())]);
                    if !roots.contains(&r) {
                        roots.push(r);
                    }
                }
                let mults: Vec<u32> = (0..nroots).map(|_| rng.gen_range(1..=2)).collect();
                let spec = CuspidalSpec::new(p, q, roots, mults).unwrap();
                let nterms = rng.gen_range(0..=3usize);
                let g = GPoly::new((0..nterms).map(|_| {
                    (
                        rng.gen_range(0..=2u32),
                        rng.gen_range(0..=2u32),
                        Rat::int(rng.gen_range(-5i64..=5)),
                    )
                }));
                let omega = assemble_generator(&spec, &g, &v);
                assert!(
                    omega.is_integrable(),
                    "case {case}: generator for {spec} with G = {g} is not integrable"
                );
                assert!(
                    is_logarithmic(&omega, &spec.surface(&v)),
                    "case {case}: generator for {spec} with G = {g} is not logarithmic"
                );
            }
        },
    );
}

#[test]
fn cuspidal_decomposition_round_trips() {
    criterion(
        "25 random assemblies decompose and re-verify; the order violation is rejected",
        || {
            let v = xyz();
            let mut rng = ChaCha8Rng::seed_from_u64(0xDECADE);
            // first partial of each of these is constant, so any residual
            // 1-form keeps the unit-order hypothesis intact
            let steep = ["x + y^2", "x - y^3", "x + 2*y^4"];
            // general shapes exercise nontrivial phi_x1; the assembly then
            // omits the f * omega_3 summand, which the hypothesis allows
            let general = ["x^2 - y^3", "x*y", "x^3 + y^2", "x^2 + y^5"];
            for case in 0..25 {
                let k = 2 + (case % 2) as u32;
                let with_residual = case % 5 < 3;
                let phi_src = if with_residual {
                    steep[case % steep.len()]
                } else {
                    general[case % general.len()]
                };
                let phi = parse_poly(phi_src, &v).unwrap();
                let f = cusp_surface(&phi, k);
                let (omega1, omega2) = log_pair(&phi, k);
                let h = random_poly(&mut rng, &v, 3, 2);
                let omega3 = if with_residual {
                    random_one_form(&mut rng, &v, 2, 2)
                } else {
                    DiffForm::zero(&v, 1)
                };
                let omega = omega1
                    .add(&omega2.scaled_by(&h))
                    .add(&omega3.scaled_by(&f));
                let d = cuspidal_decompose(&omega, k, &phi)
                    .unwrap_or_else(|e| panic!("case {case} (phi = {phi_src}, k = {k}): {e}"));
                assert!(d.verify(&omega, k, &phi), "case {case}: cleared identity");
                if let Some(t) = &d.normalized {
                    assert!(t.verify(&omega, k, &phi), "case {case}: unit identity");
                }
            }

            let omega = parse_form("z*d(z^2 + x*y)", &v).unwrap();
            let phi = parse_poly("x*y", &v).unwrap();
            match cuspidal_decompose(&omega, 2, &phi) {
                Err(CuspError::OrderViolation { .. }) => {}
                other => panic!("expected an order violation, got {other:?}"),
            }
        },
    );
}

#[test]
fn saito_triples_for_the_plane_family() {
    criterion(
        "plane family y^2 + x^n: decomposition identity g*omega + h*df = f*alpha (n = 3..5)",
        || {
            let v = xy();
            for n in 3u32..=5 {
                let f = parse_poly(&format!("y^2 + x^{n}"), &v).unwrap();
                let omega = parse_form(&format!("2*x*dy - {n}*y*dx"), &v).unwrap();
                let t = saito_decompose(&omega, &f, &[f.clone()]).unwrap();
                assert!(t.verify(&omega, &f), "identity fails for n = {n}");
                if n == 3 {
                    assert_eq!(t.g.to_string(), "3*x^2");
                    assert_eq!(t.h.to_string(), "3*y");
                    assert_eq!(t.alpha.to_string(), "(6)*dy");
                }
            }
        },
    );
}

#[test]
fn golden_resolution_chain_and_chart_grid() {
    criterion(
        "golden chain for (2,3,(1),(2)) and step-I surface identities on a 5-spec grid",
        || {
            let v = xyz();
            let spec = CuspidalSpec::new(2, 3, vec![Rat::one()], vec![2]).unwrap();
            assert_eq!((spec.p_exp, spec.q_exp), (4, 2));
            let res = resolve(&spec, &GPoly::constant(Rat::one()), &v).unwrap();
            assert_eq!(res.step1.surface_exceptional, "x^8*y^4");
            assert_eq!(
                res.step1.surface_reduced,
                parse_poly("z^2 + x^4*y^2*(y - 1)^2", &v).unwrap()
            );
            assert_eq!(
                res.step2.surface_reduced,
                parse_poly("z^2 + (y - 1)^2", &v).unwrap()
            );
            assert_eq!(res.final_surfaces(), vec!["1 + z^2".to_string()]);
            assert!(res.all_identities_hold());

            let grid: [(u32, u32, &[i64], &[u32]); 5] = [
                (2, 3, &[1], &[4]),
                (2, 3, &[1, -1], &[2, 2]),
                (3, 4, &[1], &[2]),
                (2, 5, &[1], &[2]),
                (3, 5, &[2], &[2]),
            ];
            for (p, q, roots, mults) in grid {
                let spec = CuspidalSpec::new(
                    p,
                    q,
                    roots.iter().map(|&a| Rat::int(a)).collect(),
                    mults.to_vec(),
                )
                .unwrap();
                assert_eq!(spec.delta, 1);
                assert_eq!(spec.p_exp % 2, 0, "({p},{q}): P = {}", spec.p_exp);
                assert_eq!(spec.q_exp % 2, 0, "({p},{q}): Q = {}", spec.q_exp);
                let res = resolve(&spec, &GPoly::zero(), &v).unwrap();
                let surface_identity = res
                    .step1
                    .checks
                    .iter()
                    .find(|c| c.name == "step I surface identity")
                    .expect("the chain records the step I surface identity");
                assert!(surface_identity.holds(), "({p},{q},{roots:?},{mults:?})");
                assert!(res.all_identities_hold(), "({p},{q},{roots:?},{mults:?})");
            }
        },
    );
}

#[test]
fn residual_valuation_witnesses_and_implication() {
    criterion(
        "valuation checker: nu = 2 < 3 rejected, nu = 7 accepted; 200 grid points imply all bounds",
        || {
            let spec =
                CuspidalSpec::new(2, 5, vec![Rat::int(-1), Rat::int(-2)], vec![5, 10]).unwrap();
            assert_eq!(spec.r, 5);

            let g_psi = GPoly::new([(1, 0, Rat::one())]);
            let t = gs_condition(&g_psi, spec.r);
            assert_eq!(t.valuation, Some(Rat::int(2)));
            assert_eq!(t.threshold, Rat::int(3));
            assert!(!t.satisfied);
            assert_eq!(t.to_string(), "nu = 2 < 3");

            let g_psi_z = GPoly::new([(1, 1, Rat::one())]);
            let t = gs_condition(&g_psi_z, spec.r);
            assert_eq!(t.valuation, Some(Rat::int(7)));
            assert!(t.satisfied);

            // every grid point that clears the valuation threshold makes all
            // chart exponent bounds nonnegative
            let mut count = 0;
            'grid: for r in [2u32, 3, 4, 5, 6, 7, 8, 10] {
                for alpha in 0..=6u32 {
                    for beta in 0..=6u32 {
                        if 2 * alpha + beta + 2 < r {
                            continue;
                        }
                        let g = GPoly::new([(alpha, beta, Rat::one())]);
                        assert!(gs_condition(&g, r).satisfied);
                        let spec =
                            CuspidalSpec::new(2, 3, vec![Rat::one()], vec![r]).unwrap();
                        assert_eq!(spec.r, r);
                        for bound in gterm_inequalities(&spec, &g) {
                            assert!(
                                bound.satisfied,
                                "r = {r}, alpha = {alpha}, beta = {beta}: {} gives {:?}",
                                bound.label, bound.min_value
                            );
                        }
                        count += 1;
                        if count == 200 {
                            break 'grid;
                        }
                    }
                }
            }
            assert_eq!(count, 200);

            // the two-variable criterion distinguishes the same way
            let v = xy();
            let t = loray_condition_2d(6, 3, &parse_poly("x*y", &v).unwrap());
            assert!(!t.satisfied);
            assert_eq!(t.to_string(), "nu = 3 <= 10/3");
        },
    );
}

#[test]
fn quasihomogeneous_weights_of_the_double_cusp() {
    criterion(
        "weights (2, 3, 6) of degree 12 for z^2 + (y^2 - x^3)^2; none for x + y + x^2",
        || {
            let v = xyz();
            let f = parse_poly("z^2 + (y^2 - x^3)^2", &v).unwrap();
            let w = find_quasihomogeneous_weights(&f).unwrap();
            assert_eq!(w.weights, vec![2, 3, 6]);
            assert_eq!(w.degree, 12);
            assert!(euler_identity_holds(&f, &w));

            let g = parse_poly("x + y + x^2", &xy()).unwrap();
            assert_eq!(find_quasihomogeneous_weights(&g), None);
        },
    );
}

#[test]
fn parser_round_trip_precedence_and_error_positions() {
    criterion(
        "100 random polynomials round-trip; precedence cases; 5 exact error positions",
        || {
            let v = xyz();
            let mut rng = ChaCha8Rng::seed_from_u64(0xFACADE);
            for case in 0..100 {
                let mut acc = Poly::zero(&v);
                for _ in 0..rng.gen_range(0..=6usize) {
                    let exps: Vec<u32> = (0..3).map(|_| rng.gen_range(0..=4)).collect();
                    let c = Rat::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4));
                    acc = &acc + &Poly::term(&v, &exps, c);
                }
                let text = acc.to_string();
                let back = parse_poly(&text, &v)
                    .unwrap_or_else(|e| panic!("case {case}: `{text}`: {e}"));
                assert_eq!(back, acc, "case {case}: `{text}`");
            }

            assert_eq!(parse_poly("-x^2", &v).unwrap().to_string(), "-x^2");
            assert_eq!(parse_poly("2*-x", &v).unwrap().to_string(), "-2*x");
            assert_eq!(
                parse_poly("(x + y)^2", &v).unwrap().to_string(),
                "y^2 + 2*x*y + x^2"
            );

            let cases: [(&str, u32, u32); 5] = [
                ("w + x", 1, 1),
                ("x^-2", 1, 3),
                ("x +", 1, 4),
                ("(x + y", 1, 7),
                ("x +\n y^", 2, 4),
            ];
            for (src, line, col) in cases {
                let e = parse_poly(src, &v).unwrap_err();
                assert_eq!((e.line, e.col), (line, col), "position for `{src}`");
            }
            let e = parse_poly("w + x", &v).unwrap_err();
            assert_eq!(e.kind, ParseErrorKind::UnknownVariable("w".into()));
        },
    );
}

#[test]
fn exterior_calculus_laws() {
    criterion(
        "d(d(f)) = 0, Leibniz, pullback naturality, wedge anticommutativity — 100 cases each",
        || {
            let v = xyz();
            let mut rng = ChaCha8Rng::seed_from_u64(0xBA0BAB);

            for _ in 0..100 {
                let f = random_poly(&mut rng, &v, 3, 3);
                assert!(differential(&f).d().is_zero());
                let omega = random_one_form(&mut rng, &v, 2, 3);
                assert!(omega.d().d().is_zero());
            }

            for case in 0..100 {
                let f = random_poly(&mut rng, &v, 3, 2);
                let omega = if case % 2 == 0 {
                    random_one_form(&mut rng, &v, 2, 2)
                } else {
                    random_one_form(&mut rng, &v, 2, 2).d()
                };
                let lhs = omega.scaled_by(&f).d();
                let rhs = differential(&f).wedge(&omega).add(&omega.d().scaled_by(&f));
                assert_eq!(lhs, rhs, "Leibniz fails in case {case}");
            }

            for case in 0..100 {
                let images: Vec<QPoly> =
                    (0..3).map(|_| random_poly(&mut rng, &v, 2, 2)).collect();
                let omega = random_one_form(&mut rng, &v, 2, 2);
                let tau = random_one_form(&mut rng, &v, 2, 2);
                let wedge_then_pull = omega.wedge(&tau).pullback(&v, &images).unwrap();
                let pull_then_wedge = omega
                    .pullback(&v, &images)
                    .unwrap()
                    .wedge(&tau.pullback(&v, &images).unwrap());
                assert_eq!(wedge_then_pull, pull_then_wedge, "case {case}: wedge");
                let d_then_pull = omega.d().pullback(&v, &images).unwrap();
                let pull_then_d = omega.pullback(&v, &images).unwrap().d();
                assert_eq!(d_then_pull, pull_then_d, "case {case}: d");
            }

            for case in 0..100 {
                let alpha = random_one_form(&mut rng, &v, 2, 3);
                let beta = random_one_form(&mut rng, &v, 2, 3);
                assert_eq!(
                    alpha.wedge(&beta),
                    beta.wedge(&alpha).neg(),
                    "case {case}: 1-forms anticommute"
                );
                let two = beta.wedge(&random_one_form(&mut rng, &v, 2, 3));
                assert_eq!(
                    alpha.wedge(&two),
                    two.wedge(&alpha),
                    "case {case}: odd-even wedge commutes"
                );
            }
        },
    );
}
