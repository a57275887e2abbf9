//! Acceptance gate: eight end-to-end criteria covering the reference
//! matrices, frozen invariant values, closed-form signature profiles,
//! randomized structural identities, and cross-route agreement. Each
//! criterion is one test that prints a single pass line; any failure is a
//! hard test failure.

use std::time::{Duration, Instant};

use kashaev_core::corpus;
use kashaev_core::diagram::ColoredDiagram;
use kashaev_core::invariants::{
    check_color_merge, conway, inertia_of, signature_at, signature_grid, DEFAULT_TOL_REL,
};
use kashaev_core::kashaev::{clasp_diagonal, clasp_factor, label_matrix, tau_symbolic};
use kashaev_core::laurent::{det_rational, LaurentPoly, RationalFn, TorusPoint};
use kashaev_core::oracle::alexander_via_fox;
use num::complex::Complex64;
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn poly(nv: usize, terms: &[(Vec<i32>, i64)]) -> LaurentPoly {
    let mut p = LaurentPoly::zero(nv);
    for (e, c) in terms {
        p = &p + &LaurentPoly::monomial(nv, e.clone(), BigRational::from_integer((*c).into()));
    }
    p
}

/// `(u^e + u^-e)/2`.
fn sym_pair(nv: usize, exps: Vec<i32>) -> LaurentPoly {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let neg: Vec<i32> = exps.iter().map(|&x| -x).collect();
    &LaurentPoly::monomial(nv, exps, half.clone()) + &LaurentPoly::monomial(nv, neg, half)
}

fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        cur: &mut Vec<usize>,
        used: &mut Vec<bool>,
        n: usize,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if cur.len() == n {
            return f(cur);
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                if rec(cur, used, n, f) {
                    return true;
                }
                cur.pop();
                used[i] = false;
            }
        }
        false
    }
    rec(&mut Vec::new(), &mut vec![false; n], n, f)
}

fn curl_diagram() -> ColoredDiagram {
    corpus::load("two_component_curl").unwrap()
}

/// Reference symbolic 7x7 matrix and 5x7 label matrix for the two-component
/// curl diagram, transcribed independently of the library construction.
fn reference_matrices() -> (Vec<Vec<RationalFn>>, Vec<Vec<LaurentPoly>>) {
    let nv = 2;
    let x1 = sym_pair(nv, vec![2, 0]);
    let x2 = sym_pair(nv, vec![0, 2]);
    let x12 = sym_pair(nv, vec![2, 2]);
    let b12 = sym_pair(nv, vec![2, -2]);
    let zero = LaurentPoly::zero(nv);
    let one = LaurentPoly::one(nv);
    let four = LaurentPoly::from_i64(nv, 4);
    let s = |p: &LaurentPoly, c: i64| -> LaurentPoly { &LaurentPoly::from_i64(nv, c) * p };
    let m1: Vec<Vec<LaurentPoly>> = vec![
        vec![
            s(&b12, 4),
            s(&x2, 2),
            s(&x1, 2),
            s(&x2, 2),
            four.clone(),
            zero.clone(),
            s(&x1, 2),
        ],
        vec![
            s(&x2, 2),
            s(&x12, 2),
            one.clone(),
            zero.clone(),
            s(&x1, 2),
            zero.clone(),
            one.clone(),
        ],
        vec![
            s(&x1, 2),
            one.clone(),
            s(&x12, 2),
            one.clone(),
            s(&x2, 2),
            zero.clone(),
            zero.clone(),
        ],
        vec![
            s(&x2, 2),
            zero.clone(),
            one.clone(),
            s(&x12, 2),
            s(&x1, 2),
            zero.clone(),
            one.clone(),
        ],
        vec![
            four.clone(),
            s(&x1, 2),
            s(&x2, 2),
            s(&x1, 2),
            s(&b12, 4),
            zero.clone(),
            s(&x2, 2),
        ],
        vec![zero.clone(); 7],
        vec![
            s(&x1, 2),
            one.clone(),
            zero.clone(),
            one.clone(),
            s(&x2, 2),
            zero.clone(),
            s(&x12, 2),
        ],
    ];
    let x11_2p2 = &s(&sym_pair(nv, vec![4, 0]), 2) + &LaurentPoly::from_i64(nv, 2);
    let mut m2 = vec![vec![zero.clone(); 7]; 7];
    m2[4][4] = one.clone();
    m2[4][5] = one.clone();
    m2[5][4] = one.clone();
    m2[5][5] = one.clone();
    m2[4][6] = s(&x1, 2);
    m2[6][4] = s(&x1, 2);
    m2[5][6] = s(&x1, 2);
    m2[6][5] = s(&x1, 2);
    m2[6][6] = x11_2p2;
    let pref1 = clasp_factor(nv, 1, 1, 2);
    let pref2 = clasp_factor(nv, -1, 1, 1);
    let tau: Vec<Vec<RationalFn>> = (0..7)
        .map(|i| {
            (0..7)
                .map(|j| {
                    pref1
                        .mul(&RationalFn::from_poly(m1[i][j].clone()))
                        .add(&pref2.mul(&RationalFn::from_poly(m2[i][j].clone())))
                })
                .collect()
        })
        .collect();
    let u = |e1: i32, e2: i32| poly(nv, &[(vec![e1, e2], 1)]);
    let z = || LaurentPoly::zero(nv);
    let k = vec![
        vec![u(-1, 1), u(1, 1), z(), z(), u(1, -1), z(), u(-1, -1)],
        vec![u(1, -1), u(-1, -1), u(1, 1), z(), u(-1, 1), z(), z()],
        vec![u(-1, 1), z(), u(-1, -1), u(1, 1), u(1, -1), z(), z()],
        vec![u(1, -1), z(), z(), u(-1, -1), u(-1, 1), z(), u(1, 1)],
        vec![
            z(),
            z(),
            z(),
            z(),
            LaurentPoly::one(nv),
            LaurentPoly::one(nv),
            poly(nv, &[(vec![2, 0], 1), (vec![-2, 0], 1)]),
        ],
    ];
    (tau, k)
}

#[test]
fn criterion_1_reference_matrices() {
    let t0 = Instant::now();
    let d = curl_diagram();
    let tau = tau_symbolic(&d);
    let k = label_matrix(&d);
    let (rtau, rk) = reference_matrices();
    let found = for_each_permutation(7, &mut |perm| {
        for v in 0..5 {
            for i in 0..7 {
                if k.entry(v, i) != &rk[v][perm[i]] {
                    return false;
                }
            }
        }
        for i in 0..7 {
            for j in 0..7 {
                if !tau.entry(i, j).equals(&rtau[perm[i]][perm[j]]) {
                    return false;
                }
            }
        }
        true
    });
    assert!(found, "no region relabeling reconciles both reference matrices");
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {:?}", elapsed);
    println!("acceptance criterion 1 (reference matrices, exact): PASS");
}

#[test]
fn criterion_2_determinant_value() {
    let t0 = Instant::now();
    let d = curl_diagram();
    let tau = kashaev_core::kashaev::tau_symbolic_marked(&d).unwrap();
    let rows: Vec<Vec<RationalFn>> = (0..tau.dim())
        .map(|i| (0..tau.dim()).map(|j| tau.entry(i, j).clone()).collect())
        .collect();
    let det = det_rational(2, &rows).unwrap();
    // -(-4/((t1-t1^-1)(t2-t2^-1)))^5 (t1-t1^-1)(t2-t2^-1)(t1t2+t1^-1t2^-1)^2
    let pref = clasp_factor(2, 1, 1, 2);
    let mut p5 = RationalFn::one(2);
    for _ in 0..5 {
        p5 = p5.mul(&pref);
    }
    let t1 = LaurentPoly::t_minus_tinv(2, 0);
    let t2 = LaurentPoly::t_minus_tinv(2, 1);
    let core = poly(2, &[(vec![2, 2], 1), (vec![-2, -2], 1)]);
    let expect = p5
        .neg()
        .mul(&RationalFn::from_poly(&(&t1 * &t2) * &(&core * &core)));
    assert!(det.equals(&expect), "determinant differs from the closed form");
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {:?}", elapsed);
    println!("acceptance criterion 2 (determinant closed form, exact): PASS");
}

#[test]
fn criterion_3_signature_profile() {
    let t0 = Instant::now();
    let d = curl_diagram();

    // Off the degeneracy locus the signature follows the closed form
    // -sign(Re((1 - w1)(1 - w2))); the 16x16 open grid misses the locus
    // entirely, so nullity vanishes at each grid point.
    let grid = signature_grid(&d, 16, DEFAULT_TOL_REL).unwrap();
    assert_eq!(grid.len(), 256);
    for r in &grid {
        let w1 = Complex64::from_polar(1.0, r.thetas[0]);
        let w2 = Complex64::from_polar(1.0, r.thetas[1]);
        let re = ((Complex64::new(1.0, 0.0) - w1) * (Complex64::new(1.0, 0.0) - w2)).re;
        let expect = -re.signum() as i64;
        assert_eq!(r.sigma, expect, "sigma at {:?}", r.thetas);
        assert_eq!(r.eta, 0, "eta at {:?}", r.thetas);
    }

    // Nullity 1 at eight points of the locus w1 w2 = -1.
    for j in 1..=8 {
        let t1 = PI * j as f64 / 9.0;
        let p = TorusPoint::new(vec![t1, PI - t1]).unwrap();
        let r = signature_at(&d, &p, DEFAULT_TOL_REL).unwrap();
        assert_eq!(r.eta, 1, "eta on locus at theta1 = {}", t1);
    }

    // Frozen values at w = (-1, -1).
    let r = signature_at(
        &d,
        &TorusPoint::new(vec![PI, PI]).unwrap(),
        DEFAULT_TOL_REL,
    )
    .unwrap();
    assert_eq!(r.inertia.signature(), -3);
    assert_eq!(r.sigma, -1);

    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {:?}", elapsed);
    println!("acceptance criterion 3 (signature/nullity profile on the torus): PASS");
}

#[test]
fn criterion_4_conway_both_routes() {
    let d = curl_diagram();
    let c = conway(&d).unwrap();
    assert!(c.consistency_ok, "the two determinant routes disagree");
    let expect = poly(2, &[(vec![2, 2], 1), (vec![-2, -2], 1)]);
    assert!(c.nabla_up_to_sign.is_polynomial());
    assert!(c.nabla_up_to_sign.num().equals_up_to_unit(&expect));
    // The squared route pins the same value without the sign ambiguity.
    let sq = RationalFn::from_poly(&expect * &expect);
    assert!(c.nabla_sq.equals(&sq));
    println!("acceptance criterion 4 (Conway function via both routes): PASS");
}

#[test]
fn criterion_5_classical_values() {
    // Right trefoil: symmetrized Alexander polynomial t - 1 + t^-1 by both
    // routes, and signature -2 at w = -1, matching the Seifert-form
    // computation for V = [[-1, 1], [0, -1]] evaluated at w = -1.
    let trefoil = corpus::load("trefoil").unwrap();
    let frozen = poly(1, &[(vec![2], 1), (vec![0], -1), (vec![-2], 1)]);
    let det_route = conway(&trefoil).unwrap();
    assert!(det_route.consistency_ok);
    assert!(det_route.alexander.equals_up_to_unit(&frozen));
    assert!(alexander_via_fox(&trefoil).unwrap().equals_up_to_unit(&frozen));

    let seifert = [[-4.0, 2.0], [2.0, -4.0]]; // (1-conj(w))V + (1-w)V^T at w = -1
    let oracle = inertia_of(&[seifert[0].to_vec(), seifert[1].to_vec()], DEFAULT_TOL_REL).unwrap();
    assert_eq!(oracle.signature(), -2);
    let r = signature_at(
        &trefoil,
        &TorusPoint::new(vec![PI]).unwrap(),
        DEFAULT_TOL_REL,
    )
    .unwrap();
    assert_eq!(r.sigma, oracle.signature());
    assert_eq!(r.eta, 0);

    // Unknot: flat invariants.
    let unknot = corpus::load("unknot").unwrap();
    for t in [1.0, PI, 5.0] {
        let r = signature_at(&unknot, &TorusPoint::new(vec![t]).unwrap(), DEFAULT_TOL_REL)
            .unwrap();
        assert_eq!((r.sigma, r.eta), (0, 0));
    }
    let u = conway(&unknot).unwrap();
    assert!(u.consistency_ok);
    assert!(u.alexander.equals_up_to_unit(&LaurentPoly::one(1)));
    assert!(alexander_via_fox(&unknot)
        .unwrap()
        .equals_up_to_unit(&LaurentPoly::one(1)));

    // Two-colored positive Hopf link: signature and nullity vanish on a
    // 3x3 grid and the Alexander polynomial is trivial.
    let hopf = corpus::load("hopf_2color").unwrap();
    for r in signature_grid(&hopf, 3, DEFAULT_TOL_REL).unwrap() {
        assert_eq!((r.sigma, r.eta), (0, 0), "hopf at {:?}", r.thetas);
    }
    let h = conway(&hopf).unwrap();
    assert!(h.consistency_ok);
    assert!(h.alexander.equals_up_to_unit(&LaurentPoly::one(2)));
    assert!(alexander_via_fox(&hopf)
        .unwrap()
        .equals_up_to_unit(&LaurentPoly::one(2)));

    println!("acceptance criterion 5 (classical one-variable and Hopf values): PASS");
}

#[test]
fn criterion_6_randomized_property_suite() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cases = 50;
    for case in 0..cases {
        // One- and two-color diagrams run the full crossing range; a few
        // three-color diagrams are kept smaller because exact 3-variable
        // determinants grow steeply with crossing count.
        let (mu, max_crossings) = if case % 16 == 15 {
            (3, 5)
        } else {
            (1 + case % 2, 8)
        };
        let d = corpus::random_connected_diagram(&mut rng, mu, max_crossings);
        let nv = d.num_colors();

        // (e) Euler region count for a connected diagram.
        assert_eq!(
            d.regions().num_regions(),
            d.num_crossings() + 2,
            "region count on case {}",
            case
        );

        // (a) entrywise factorization through the label matrix, and
        // (b) entrywise invariance under t -> t^-1, both exact.
        let tau = tau_symbolic(&d);
        let k = label_matrix(&d);
        let s = clasp_diagonal(&d);
        for i in 0..tau.dim() {
            for j in i..tau.dim() {
                let mut acc = RationalFn::zero(nv);
                for v in 0..d.num_crossings() {
                    acc = acc.add(
                        &s[v].mul(&RationalFn::from_poly(k.entry(v, i) * k.entry(v, j))),
                    );
                }
                assert!(
                    acc.equals(tau.entry(i, j)),
                    "factorization fails at ({}, {}) on case {}",
                    i,
                    j,
                    case
                );
                assert!(
                    tau.entry(i, j).phi().equals(tau.entry(i, j)),
                    "phi-invariance fails at ({}, {}) on case {}",
                    i,
                    j,
                    case
                );
            }
        }

        // (c) the label-determinant route squared equals the
        // symmetric-determinant route.
        let c = conway(&d).unwrap();
        assert!(c.consistency_ok, "route equivalence fails on case {}", case);

        // (d) parity of nullity and of (signature - monochromatic writhe)
        // at five random torus points; signature_at enforces both.
        for _ in 0..5 {
            let thetas: Vec<f64> = (0..nv).map(|_| rng.gen_range(0.05..6.23)).collect();
            signature_at(&d, &TorusPoint::new(thetas).unwrap(), DEFAULT_TOL_REL)
                .expect("parity holds at random point");
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {:?}", elapsed);
    println!(
        "acceptance criterion 6 (randomized structural identities, {} diagrams in {:?}): PASS",
        cases, elapsed
    );
}

#[test]
fn criterion_7_color_merge_identity() {
    let mut diagrams = vec![curl_diagram()];
    let mut rng = ChaCha8Rng::seed_from_u64(9090);
    for _ in 0..5 {
        diagrams.push(corpus::random_connected_diagram(&mut rng, 2, 8));
    }
    for (n, d) in diagrams.iter().enumerate() {
        let mut tested = 0;
        for k in 0..5 {
            let theta = 2.0 * PI * ((0.171 + 0.6180339887 * k as f64).fract() * 0.96 + 0.02);
            let p = TorusPoint::new(vec![theta]).unwrap();
            match check_color_merge(d, 1, 2, &p, DEFAULT_TOL_REL) {
                Ok(m) => {
                    assert!(
                        m.ok,
                        "merge identity fails on diagram {} at theta {}: {} != {} - {}",
                        n, theta, m.sigma_merged, m.sigma_original, m.linking_sum
                    );
                    tested += 1;
                }
                Err(e) => {
                    println!(
                        "  note: skipped degenerate point theta = {} on diagram {}: {}",
                        theta, n, e
                    );
                }
            }
        }
        assert!(tested >= 3, "too few usable points on diagram {}", n);
    }
    println!("acceptance criterion 7 (color-merge signature identity): PASS");
}

#[test]
fn criterion_8_oracle_equivalence() {
    let fixed = [
        "trefoil",
        "figure_eight",
        "hopf_1color",
        "hopf_2color",
        "whitehead",
        "two_component_curl",
    ];
    for name in fixed {
        let d = corpus::load(name).unwrap();
        let fox = alexander_via_fox(&d).unwrap();
        let det = conway(&d).unwrap().alexander;
        assert!(
            fox.equals_up_to_unit(&det),
            "oracle disagreement on {}: {} vs {}",
            name,
            fox,
            det
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(515151);
    for case in 0..10 {
        let d = corpus::random_connected_diagram(&mut rng, 1 + case % 2, 8);
        let fox = alexander_via_fox(&d).unwrap();
        let det = conway(&d).unwrap().alexander;
        assert!(
            fox.equals_up_to_unit(&det),
            "oracle disagreement on random case {}: {} vs {}",
            case,
            fox,
            det
        );
    }
    println!("acceptance criterion 8 (Wirtinger oracle equivalence): PASS");
}
