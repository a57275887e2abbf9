//! Region-indexed symmetric matrices of a colored diagram.
//!
//! Every crossing contributes a rank-pattern over its four adjacent regions
//! `(a, b, c, d)` (corner `c` between the incoming strands, `a` opposite,
//! counterclockwise order `c, b, a, d`), scaled by a clasp factor depending
//! on the crossing sign and the two strand colors `j, k`:
//!
//! * symbolic form: factor `-4*sgn(v) / ((t_j - t_j^-1)(t_k - t_k^-1))`,
//!   entries built from `x_j = (t_j + t_j^-1)/2` and
//!   `x_jk = (t_j t_k + t_j^-1 t_k^-1)/2`;
//! * numeric form at angles `theta`: factor
//!   `sgn(v) / (sin(theta_j/2) sin(theta_k/2))`, entries from
//!   `x_j = cos(theta_j/2)`, `x_jk = cos((theta_j+theta_k)/2)`.
//!
//! When frame regions coincide, the repeated rows and columns are added.
//! The label matrix has one row per crossing and one column per region, with
//! unit monomials `(t_j^{±1/2} t_k^{±1/2})^s` at the four frame corners; it
//! factors the symbolic matrix as `tau = K^T S K` with `S` the diagonal of
//! clasp factors. Deleting the two regions adjacent to the marked edge gives
//! the reduced matrices used by the invariants.

use num::{BigInt, BigRational, One};

use crate::diagram::ColoredDiagram;
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RationalFn, TorusPoint};

/// Symmetric matrix of rational functions indexed by regions.
#[derive(Debug, Clone)]
pub struct SymbolicSymMatrix {
    region_order: Vec<usize>,
    entries: Vec<Vec<RationalFn>>,
}

/// Symmetric real matrix indexed by regions; built symmetrically, so entries
/// `(i, j)` and `(j, i)` are bitwise equal.
#[derive(Debug, Clone)]
pub struct RealSymMatrix {
    region_order: Vec<usize>,
    entries: Vec<Vec<f64>>,
}

/// Crossing-by-region matrix of corner labels.
#[derive(Debug, Clone)]
pub struct LabelMatrix {
    region_order: Vec<usize>,
    entries: Vec<Vec<LaurentPoly>>,
}

impl SymbolicSymMatrix {
    pub fn dim(&self) -> usize {
        self.region_order.len()
    }

    pub fn region_order(&self) -> &[usize] {
        &self.region_order
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFn {
        &self.entries[i][j]
    }

    /// Remove the rows and columns of two region ids.
    pub fn delete_regions(&self, r1: usize, r2: usize) -> Result<SymbolicSymMatrix> {
        let keep = keep_indices(&self.region_order, r1, r2)?;
        Ok(SymbolicSymMatrix {
            region_order: keep.iter().map(|&i| self.region_order[i]).collect(),
            entries: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "region_order": self.region_order,
            "entries": self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.to_json()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

impl RealSymMatrix {
    pub fn dim(&self) -> usize {
        self.region_order.len()
    }

    pub fn region_order(&self) -> &[usize] {
        &self.region_order
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn delete_regions(&self, r1: usize, r2: usize) -> Result<RealSymMatrix> {
        let keep = keep_indices(&self.region_order, r1, r2)?;
        Ok(RealSymMatrix {
            region_order: keep.iter().map(|&i| self.region_order[i]).collect(),
            entries: keep
                .iter()
                .map(|&i| keep.iter().map(|&j| self.entries[i][j]).collect())
                .collect(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "region_order": self.region_order,
            "entries": self.entries,
        })
    }
}

impl LabelMatrix {
    pub fn num_rows(&self) -> usize {
        self.entries.len()
    }

    pub fn num_cols(&self) -> usize {
        self.region_order.len()
    }

    pub fn region_order(&self) -> &[usize] {
        &self.region_order
    }

    pub fn entry(&self, v: usize, i: usize) -> &LaurentPoly {
        &self.entries[v][i]
    }

    /// Remove the columns of two region ids (rows are untouched).
    pub fn delete_region_columns(&self, r1: usize, r2: usize) -> Result<LabelMatrix> {
        let keep = keep_indices(&self.region_order, r1, r2)?;
        Ok(LabelMatrix {
            region_order: keep.iter().map(|&i| self.region_order[i]).collect(),
            entries: self
                .entries
                .iter()
                .map(|row| keep.iter().map(|&j| row[j].clone()).collect())
                .collect(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "region_order": self.region_order,
            "entries": self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

fn keep_indices(order: &[usize], r1: usize, r2: usize) -> Result<Vec<usize>> {
    if r1 == r2 {
        return Err(Error::Domain("the two deleted regions must differ".into()));
    }
    for r in [r1, r2] {
        if !order.contains(&r) {
            return Err(Error::Domain(format!("region {} is not in this matrix", r)));
        }
    }
    Ok((0..order.len())
        .filter(|&i| order[i] != r1 && order[i] != r2)
        .collect())
}

/// `(u^e + u^-e)/2` — the symmetric pair behind `x_j` and `x_jk`.
fn sym_pair(num_vars: usize, exps: Vec<i32>) -> LaurentPoly {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let neg: Vec<i32> = exps.iter().map(|&x| -x).collect();
    &LaurentPoly::monomial(num_vars, exps, half.clone())
        + &LaurentPoly::monomial(num_vars, neg, half)
}

fn x_single(num_vars: usize, j: usize) -> LaurentPoly {
    let mut e = vec![0; num_vars];
    e[j - 1] = 2;
    sym_pair(num_vars, e)
}

fn x_pair(num_vars: usize, j: usize, k: usize) -> LaurentPoly {
    let mut e = vec![0; num_vars];
    e[j - 1] += 2;
    e[k - 1] += 2;
    sym_pair(num_vars, e)
}

fn x_cross(num_vars: usize, j: usize, k: usize) -> LaurentPoly {
    let mut e = vec![0; num_vars];
    e[j - 1] += 2;
    e[k - 1] -= 2;
    sym_pair(num_vars, e)
}

/// The 4x4 contribution of one crossing over its frame `(a, b, c, d)`,
/// without the clasp factor, in symbolic form.
pub fn local_minor(num_vars: usize, j: usize, k: usize) -> [[LaurentPoly; 4]; 4] {
    let xj = x_single(num_vars, j);
    let xk = x_single(num_vars, k);
    let xjk = x_pair(num_vars, j, k);
    let bjk = x_cross(num_vars, j, k);
    let one = LaurentPoly::one(num_vars);
    [
        [xjk.clone(), xj.clone(), one.clone(), xk.clone()],
        [xj.clone(), bjk.clone(), xk.clone(), one.clone()],
        [one.clone(), xk.clone(), xjk, xj.clone()],
        [xk, one, xj, bjk],
    ]
}

/// Clasp factor of one crossing: `-4*sgn / ((t_j - t_j^-1)(t_k - t_k^-1))`.
pub fn clasp_factor(num_vars: usize, sign: i8, j: usize, k: usize) -> RationalFn {
    let num = LaurentPoly::from_i64(num_vars, -4 * sign as i64);
    let den = &LaurentPoly::t_minus_tinv(num_vars, j - 1)
        * &LaurentPoly::t_minus_tinv(num_vars, k - 1);
    RationalFn::new(num, den).expect("clasp denominator is nonzero")
}

/// Diagonal of clasp factors, one per crossing in order.
pub fn clasp_diagonal(d: &ColoredDiagram) -> Vec<RationalFn> {
    let nv = d.num_colors();
    (0..d.num_crossings())
        .map(|v| {
            let f = d.crossing_frame(v);
            clasp_factor(nv, d.sign(v), f.j, f.k)
        })
        .collect()
}

/// Symbolic region matrix: sum of clasp-scaled local contributions over all
/// crossings, with coincident frame regions accumulated additively.
pub fn tau_symbolic(d: &ColoredDiagram) -> SymbolicSymMatrix {
    let nv = d.num_colors();
    let r = d.num_regions();
    let mut entries = vec![vec![RationalFn::zero(nv); r]; r];
    for v in 0..d.num_crossings() {
        let f = d.crossing_frame(v);
        let regions = [f.a, f.b, f.c, f.d];
        let minor = local_minor(nv, f.j, f.k);
        let pref = clasp_factor(nv, d.sign(v), f.j, f.k);
        for p in 0..4 {
            for q in 0..4 {
                let contrib = pref.mul(&RationalFn::from_poly(minor[p][q].clone()));
                let cell = &entries[regions[p]][regions[q]];
                entries[regions[p]][regions[q]] = cell.add(&contrib);
            }
        }
    }
    SymbolicSymMatrix { region_order: (0..r).collect(), entries }
}

/// Numeric region matrix at a torus point.
pub fn tau_numeric(d: &ColoredDiagram, p: &TorusPoint) -> Result<RealSymMatrix> {
    if p.dim() != d.num_colors() {
        return Err(Error::Domain(format!(
            "point has {} angles but the diagram has {} colors",
            p.dim(),
            d.num_colors()
        )));
    }
    let r = d.num_regions();
    let mut entries = vec![vec![0.0f64; r]; r];
    for v in 0..d.num_crossings() {
        let f = d.crossing_frame(v);
        let regions = [f.a, f.b, f.c, f.d];
        let (tj, tk) = (p.theta(f.j - 1), p.theta(f.k - 1));
        let xj = (tj / 2.0).cos();
        let xk = (tk / 2.0).cos();
        let xjk = ((tj + tk) / 2.0).cos();
        let bjk = ((tj - tk) / 2.0).cos();
        let minor = [
            [xjk, xj, 1.0, xk],
            [xj, bjk, xk, 1.0],
            [1.0, xk, xjk, xj],
            [xk, 1.0, xj, bjk],
        ];
        let pref = d.sign(v) as f64 / ((tj / 2.0).sin() * (tk / 2.0).sin());
        for p_ in 0..4 {
            for q in 0..4 {
                entries[regions[p_]][regions[q]] += pref * minor[p_][q];
            }
        }
    }
    Ok(RealSymMatrix { region_order: (0..r).collect(), entries })
}

/// Corner labels of one crossing over its frame `(a, b, c, d)`: unit
/// monomials `(t_j^{±1/2} t_k^{±1/2})^s`.
pub fn corner_labels(num_vars: usize, sign: i8, j: usize, k: usize) -> [LaurentPoly; 4] {
    let s = sign as i32;
    let build = |pj: i32, pk: i32| {
        let mut e = vec![0; num_vars];
        e[j - 1] += s * pj;
        e[k - 1] += s * pk;
        LaurentPoly::monomial(num_vars, e, BigRational::one())
    };
    [build(1, 1), build(1, -1), build(-1, -1), build(-1, 1)]
}

/// Label matrix: rows are crossings, columns are regions; labels of
/// coincident frame regions are added.
pub fn label_matrix(d: &ColoredDiagram) -> LabelMatrix {
    let nv = d.num_colors();
    let r = d.num_regions();
    let n = d.num_crossings();
    let mut entries = vec![vec![LaurentPoly::zero(nv); r]; n];
    for (v, row) in entries.iter_mut().enumerate() {
        let f = d.crossing_frame(v);
        let regions = [f.a, f.b, f.c, f.d];
        let labels = corner_labels(nv, d.sign(v), f.j, f.k);
        for (p, lab) in labels.iter().enumerate() {
            row[regions[p]] = &row[regions[p]] + lab;
        }
    }
    LabelMatrix { region_order: (0..r).collect(), entries }
}

/// Symbolic matrix with the marked regions deleted.
pub fn tau_symbolic_marked(d: &ColoredDiagram) -> Result<SymbolicSymMatrix> {
    let (r1, r2) = d.marked_regions()?;
    tau_symbolic(d).delete_regions(r1, r2)
}

/// Numeric matrix with the marked regions deleted.
pub fn tau_numeric_marked(d: &ColoredDiagram, p: &TorusPoint) -> Result<RealSymMatrix> {
    let (r1, r2) = d.marked_regions()?;
    tau_numeric(d, p)?.delete_regions(r1, r2)
}

/// Label matrix with the marked region columns deleted; square exactly when
/// the diagram is connected.
pub fn label_matrix_marked(d: &ColoredDiagram) -> Result<LabelMatrix> {
    let (r1, r2) = d.marked_regions()?;
    label_matrix(d).delete_region_columns(r1, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::diagram::ColoredDiagram;
    use num::complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(nv: usize, terms: &[(Vec<i32>, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero(nv);
        for (e, c) in terms {
            p = &p + &LaurentPoly::monomial(nv, e.clone(), BigRational::from_integer(c.clone().into()));
        }
        p
    }

    fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
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

    /// The printed 7x7 symbolic matrix and 5x7 label matrix of the
    /// two-component curl diagram, regions ordered alphabetically a..g.
    fn printed_matrices() -> (Vec<Vec<RationalFn>>, Vec<Vec<LaurentPoly>>) {
        let nv = 2;
        let x1 = x_single(nv, 1);
        let x2 = x_single(nv, 2);
        let x12 = x_pair(nv, 1, 2);
        let b12 = x_cross(nv, 1, 2);
        let zero = LaurentPoly::zero(nv);
        let one = LaurentPoly::one(nv);
        let two = LaurentPoly::from_i64(nv, 2);
        let four = LaurentPoly::from_i64(nv, 4);
        let s = |p: &LaurentPoly, c: i64| -> LaurentPoly {
            &LaurentPoly::from_i64(nv, c) * p
        };
        // First summand: the four positive bichromatic crossings.
        let m1: Vec<Vec<LaurentPoly>> = vec![
            vec![s(&b12, 4), s(&x2, 2), s(&x1, 2), s(&x2, 2), four.clone(), zero.clone(), s(&x1, 2)],
            vec![s(&x2, 2), s(&x12, 2), one.clone(), zero.clone(), s(&x1, 2), zero.clone(), one.clone()],
            vec![s(&x1, 2), one.clone(), s(&x12, 2), one.clone(), s(&x2, 2), zero.clone(), zero.clone()],
            vec![s(&x2, 2), zero.clone(), one.clone(), s(&x12, 2), s(&x1, 2), zero.clone(), one.clone()],
            vec![four.clone(), s(&x1, 2), s(&x2, 2), s(&x1, 2), s(&b12, 4), zero.clone(), s(&x2, 2)],
            vec![zero.clone(); 7],
            vec![s(&x1, 2), one.clone(), zero.clone(), one.clone(), s(&x2, 2), zero.clone(), s(&x12, 2)],
        ];
        // Second summand: the negative monochromatic curl over (e, f, g);
        // 2*x_1^2 - x_11 collapses to 1 and 2*x_11 + 2 to t1 + 2 + t1^-1
        // under the t-substitution.
        let x11_2p2 = &s(&x_pair(nv, 1, 1), 2) + &two;
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
        // Clasp factors in t: the bichromatic one and the curl one (sign -1).
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
        // Label matrix, rows = crossings 1..5, columns a..g.
        let u = |e1: i32, e2: i32| poly(nv, &[(vec![e1, e2], 1)]);
        let z = || LaurentPoly::zero(nv);
        let k = vec![
            vec![u(-1, 1), u(1, 1), z(), z(), u(1, -1), z(), u(-1, -1)],
            vec![u(1, -1), u(-1, -1), u(1, 1), z(), u(-1, 1), z(), z()],
            vec![u(-1, 1), z(), u(-1, -1), u(1, 1), u(1, -1), z(), z()],
            vec![u(1, -1), z(), z(), u(-1, -1), u(-1, 1), z(), u(1, 1)],
            vec![z(), z(), z(), z(), one.clone(), one.clone(), poly(nv, &[(vec![2, 0], 1), (vec![-2, 0], 1)])],
        ];
        (tau, k)
    }

    #[test]
    fn curl_diagram_matches_printed_matrices() {
        let d = ColoredDiagram::parse(corpus::TWO_COMPONENT_CURL).unwrap();
        let tau = tau_symbolic(&d);
        let k = label_matrix(&d);
        let (ptau, pk) = printed_matrices();
        // One region relabeling must reconcile both matrices at once
        // (matrices are compared up to a simultaneous permutation because
        // region numbering is an artifact of the traversal).
        let found = for_each_permutation(7, &mut |perm| {
            for v in 0..5 {
                for i in 0..7 {
                    if k.entry(v, i) != &pk[v][perm[i]] {
                        return false;
                    }
                }
            }
            for i in 0..7 {
                for j in 0..7 {
                    if !tau.entry(i, j).equals(&ptau[perm[i]][perm[j]]) {
                        return false;
                    }
                }
            }
            true
        });
        assert!(found, "no region relabeling matches the printed matrices");
    }

    #[test]
    fn curl_diagram_numeric_golden_at_minus_one() {
        let d = ColoredDiagram::parse(corpus::TWO_COMPONENT_CURL).unwrap();
        let p = TorusPoint::new(vec![std::f64::consts::PI, std::f64::consts::PI]).unwrap();
        let m = tau_numeric_marked(&d, &p).unwrap();
        assert_eq!(m.dim(), 5);
        let printed: [[f64; 5]; 5] = [
            [4.0, 0.0, 0.0, 0.0, 4.0],
            [0.0, -2.0, 1.0, 0.0, 0.0],
            [0.0, 1.0, -2.0, 1.0, 0.0],
            [0.0, 0.0, 1.0, -2.0, 0.0],
            [4.0, 0.0, 0.0, 0.0, 3.0],
        ];
        let found = for_each_permutation(5, &mut |perm| {
            for i in 0..5 {
                for j in 0..5 {
                    if (m.entry(i, j) - printed[perm[i]][perm[j]]).abs() > 1e-9 {
                        return false;
                    }
                }
            }
            true
        });
        assert!(found, "no relabeling matches the printed numeric matrix");
    }

    #[test]
    fn numeric_matrices_are_bitwise_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (_, src) in corpus::ALL {
            let d = ColoredDiagram::parse(src).unwrap();
            let thetas: Vec<f64> = (0..d.num_colors())
                .map(|_| rand::Rng::gen_range(&mut rng, 0.05..6.2))
                .collect();
            let p = TorusPoint::new(thetas).unwrap();
            let m = tau_numeric(&d, &p).unwrap();
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    assert!(
                        m.entry(i, j).to_bits() == m.entry(j, i).to_bits(),
                        "entry ({i},{j}) not bitwise symmetric"
                    );
                }
            }
        }
    }

    #[test]
    fn symbolic_matrices_are_symmetric_and_phi_invariant() {
        for (_, src) in corpus::ALL {
            let d = ColoredDiagram::parse(src).unwrap();
            let m = tau_symbolic(&d);
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    assert!(m.entry(i, j).equals(m.entry(j, i)));
                    assert!(
                        m.entry(i, j).phi().equals(m.entry(i, j)),
                        "entry ({i},{j}) not phi-invariant"
                    );
                }
            }
        }
    }

    #[test]
    fn label_factorization_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let mut diagrams: Vec<ColoredDiagram> = corpus::ALL
            .iter()
            .map(|(_, src)| ColoredDiagram::parse(src).unwrap())
            .collect();
        for case in 0..10 {
            diagrams.push(corpus::random_connected_diagram(&mut rng, 1 + case % 2, 7));
        }
        for d in &diagrams {
            let tau = tau_symbolic(d);
            let k = label_matrix(d);
            let s = clasp_diagonal(d);
            let r = d.num_regions();
            for i in 0..r {
                for j in 0..r {
                    let mut acc = RationalFn::zero(d.num_colors());
                    for v in 0..d.num_crossings() {
                        let prod = k.entry(v, i) * k.entry(v, j);
                        acc = acc.add(&s[v].mul(&RationalFn::from_poly(prod)));
                    }
                    assert!(
                        acc.equals(tau.entry(i, j)),
                        "factorization fails at entry ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn numeric_agrees_with_symbolic_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for (_, src) in corpus::ALL {
            let d = ColoredDiagram::parse(src).unwrap();
            let sym = tau_symbolic(&d);
            for _ in 0..3 {
                let thetas: Vec<f64> = (0..d.num_colors())
                    .map(|_| rand::Rng::gen_range(&mut rng, 0.1..6.1))
                    .collect();
                let p = TorusPoint::new(thetas.clone()).unwrap();
                // The symbolic matrix is a function of t with t^2 semantics:
                // evaluating it at t_j = omega_j^{1/2} (half angles) must
                // reproduce the numeric matrix at omega.
                let p_half = TorusPoint::new(thetas.iter().map(|t| t / 2.0).collect()).unwrap();
                let num = tau_numeric(&d, &p).unwrap();
                for i in 0..sym.dim() {
                    for j in 0..sym.dim() {
                        let v: Complex64 = sym.entry(i, j).eval_complex(&p_half).unwrap();
                        // Loose relative tolerance: evaluating num/den
                        // separately cancels catastrophically near the torus
                        // boundary, while a construction bug would show up at
                        // order one.
                        let scale = 1.0 + v.norm();
                        assert!(v.im.abs() < 1e-6 * scale, "entry ({i},{j}) not real: {v}");
                        assert!(
                            (v.re - num.entry(i, j)).abs() < 1e-6 * scale,
                            "entry ({i},{j}): symbolic {} vs numeric {}",
                            v.re,
                            num.entry(i, j)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn marked_deletion_shapes() {
        let d = ColoredDiagram::parse(corpus::TREFOIL).unwrap();
        let (r1, r2) = d.marked_regions().unwrap();
        let tau = tau_symbolic(&d);
        let td = tau.delete_regions(r1, r2).unwrap();
        assert_eq!(td.dim(), 3);
        assert!(!td.region_order().contains(&r1));
        assert!(!td.region_order().contains(&r2));
        let k = label_matrix_marked(&d).unwrap();
        assert_eq!((k.num_rows(), k.num_cols()), (3, 3));
        assert!(tau.delete_regions(r1, r1).is_err());
        assert!(tau.delete_regions(r1, 99).is_err());

        // Unknot: no crossings, the reduced matrices are empty but defined.
        let u = ColoredDiagram::parse(corpus::UNKNOT).unwrap();
        assert_eq!(tau_symbolic_marked(&u).unwrap().dim(), 0);
        let ku = label_matrix_marked(&u).unwrap();
        assert_eq!((ku.num_rows(), ku.num_cols()), (0, 0));
    }
}
