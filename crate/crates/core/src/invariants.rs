//! Link invariants read off the region matrices: signature and nullity from
//! numeric inertia, the Conway function and Alexander polynomial from exact
//! determinants.
//!
//! The Conway computation runs two independent routes and insists they
//! agree: the determinant of the reduced label matrix divided by
//! `t_1 - t_1^-1`, and the determinant of the reduced symbolic matrix
//! rescaled by the clasp factors, which yields the square of the Conway
//! function. The two are compared exactly; a mismatch is reported, never
//! silently dropped.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::diagram::{Color, ColoredDiagram};
use crate::error::{Error, Result};
use crate::kashaev::{
    clasp_diagonal, label_matrix_marked, tau_numeric_marked, tau_symbolic_marked,
};
use crate::laurent::{bareiss_det, det_rational, LaurentPoly, RationalFn, TorusPoint};

/// Default relative tolerance for classifying eigenvalues as zero.
pub const DEFAULT_TOL_REL: f64 = 1e-9;

/// Inertia of a real symmetric matrix: counts of positive, negative and zero
/// eigenvalues under the threshold actually used. `near_degenerate` flags an
/// eigenvalue within a factor of 10 of the threshold on either side, meaning
/// the zero/nonzero classification is not numerically safe.
#[derive(Debug, Clone, PartialEq)]
pub struct Inertia {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
    pub threshold: f64,
    pub near_degenerate: bool,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.n_pos as i64 - self.n_neg as i64
    }
}

/// Inertia via symmetric eigendecomposition. The zero threshold is
/// `tol_rel * max(1, max |eigenvalue|)`.
pub fn inertia_of(rows: &[Vec<f64>], tol_rel: f64) -> Result<Inertia> {
    let n = rows.len();
    for r in rows {
        if r.len() != n {
            return Err(Error::Domain("inertia of a non-square matrix".into()));
        }
    }
    if !(tol_rel.is_finite() && tol_rel > 0.0) {
        return Err(Error::Domain(format!("bad tolerance {}", tol_rel)));
    }
    if n == 0 {
        return Ok(Inertia {
            n_pos: 0,
            n_neg: 0,
            n_zero: 0,
            threshold: tol_rel,
            near_degenerate: false,
        });
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let eigen = m.symmetric_eigen();
    let max_abs = eigen
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &l| acc.max(l.abs()));
    let threshold = tol_rel * max_abs.max(1.0);
    let mut inertia = Inertia {
        n_pos: 0,
        n_neg: 0,
        n_zero: 0,
        threshold,
        near_degenerate: false,
    };
    for &l in eigen.eigenvalues.iter() {
        if l.abs() <= threshold {
            inertia.n_zero += 1;
        } else if l > 0.0 {
            inertia.n_pos += 1;
        } else {
            inertia.n_neg += 1;
        }
        if l.abs() > threshold / 10.0 && l.abs() < threshold * 10.0 {
            inertia.near_degenerate = true;
        }
    }
    Ok(inertia)
}

/// Signature and nullity of the link at one torus point.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureResult {
    pub thetas: Vec<f64>,
    pub sigma: i64,
    pub eta: i64,
    pub w_m: i64,
    pub inertia: Inertia,
}

impl SignatureResult {
    pub fn near_degenerate(&self) -> bool {
        self.inertia.near_degenerate
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "thetas": self.thetas,
            "sigma": self.sigma,
            "eta": self.eta,
            "w_m": self.w_m,
            "inertia": {
                "n_pos": self.inertia.n_pos,
                "n_neg": self.inertia.n_neg,
                "n_zero": self.inertia.n_zero,
                "threshold": self.inertia.threshold,
            },
            "near_degenerate": self.inertia.near_degenerate,
        })
    }
}

/// Signature `(sign(reduced matrix) - w_m)/2` and nullity
/// `null(reduced matrix)/2` at `p`.
///
/// A split diagram contributes one extra zero eigenvalue per extra diagram
/// piece (the nullity of a split union exceeds the sum of the parts by one),
/// so `num_diagram_components - 1` zeros are added before halving. Both
/// halvings must be exact; a parity failure means the eigenvalue
/// classification went wrong and is reported as an inconsistency.
pub fn signature_at(
    d: &ColoredDiagram,
    p: &TorusPoint,
    tol_rel: f64,
) -> Result<SignatureResult> {
    let reduced = tau_numeric_marked(d, p)?;
    let mut inertia = inertia_of(reduced.rows(), tol_rel)?;
    inertia.n_zero += d.num_diagram_components() - 1;
    let w_m = d.monochromatic_writhe();
    let diff = inertia.signature() - w_m;
    if diff % 2 != 0 {
        return Err(Error::Inconsistency(format!(
            "matrix signature {} minus monochromatic writhe {} is odd (near_degenerate = {})",
            inertia.signature(),
            w_m,
            inertia.near_degenerate
        )));
    }
    if inertia.n_zero % 2 != 0 {
        return Err(Error::Inconsistency(format!(
            "matrix nullity {} is odd (near_degenerate = {})",
            inertia.n_zero, inertia.near_degenerate
        )));
    }
    Ok(SignatureResult {
        thetas: p.thetas().to_vec(),
        sigma: diff / 2,
        eta: (inertia.n_zero / 2) as i64,
        w_m,
        inertia,
    })
}

/// Evaluate the signature on the uniform open grid
/// `theta_i = 2*pi*k/(n+1), k = 1..n` in each of the `mu` coordinates.
/// Rows are ordered lexicographically (last coordinate fastest) and the
/// computation is parallel but deterministic.
pub fn signature_grid(
    d: &ColoredDiagram,
    n: usize,
    tol_rel: f64,
) -> Result<Vec<SignatureResult>> {
    if n == 0 {
        return Err(Error::Domain("grid needs at least one sample per axis".into()));
    }
    let mu = d.num_colors();
    let total = n
        .checked_pow(mu as u32)
        .filter(|&t| t <= 20_000_000)
        .ok_or_else(|| Error::Domain(format!("grid of {}^{} points is too large", n, mu)))?;
    let step = 2.0 * std::f64::consts::PI / (n as f64 + 1.0);
    (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut idx = flat;
            let mut thetas = vec![0.0; mu];
            for i in (0..mu).rev() {
                thetas[i] = step * ((idx % n) as f64 + 1.0);
                idx /= n;
            }
            let p = TorusPoint::new(thetas)?;
            signature_at(d, &p, tol_rel)
        })
        .collect()
}

/// Conway function and Alexander polynomial of a connected diagram.
#[derive(Debug, Clone)]
pub struct ConwayResult {
    /// Canonical representative of the Conway function, determined up to
    /// sign; for a connected diagram with at least two colors this is a
    /// Laurent polynomial, for one color it may have denominator
    /// `t_1 - t_1^-1`.
    pub nabla_up_to_sign: RationalFn,
    /// The square of the Conway function, from the symbolic-matrix route;
    /// sign-unambiguous.
    pub nabla_sq: RationalFn,
    /// Symmetrized Alexander polynomial, determined up to sign.
    pub alexander: LaurentPoly,
    /// Whether the label-matrix route and the symbolic-matrix route agree
    /// exactly. False means the result cannot be trusted.
    pub consistency_ok: bool,
}

/// Compute the Conway function by the label-matrix determinant and verify it
/// against the symbolic-matrix determinant, which recovers its square.
pub fn conway(d: &ColoredDiagram) -> Result<ConwayResult> {
    if !d.is_connected() {
        return Err(Error::Domain(
            "the Conway function computation needs a connected diagram".into(),
        ));
    }
    let nv = d.num_colors();
    let k = label_matrix_marked(d)?;
    if k.num_rows() != k.num_cols() {
        return Err(Error::Inconsistency(format!(
            "reduced label matrix is {}x{}, expected square",
            k.num_rows(),
            k.num_cols()
        )));
    }
    let n = k.num_rows();
    let rows: Vec<Vec<LaurentPoly>> = (0..n)
        .map(|v| (0..n).map(|i| k.entry(v, i).clone()).collect())
        .collect();
    let det_k = bareiss_det(nv, rows)?;
    let t1 = LaurentPoly::t_minus_tinv(nv, 0);
    // Reduce the fraction when the division is exact. It is exact whenever
    // the diagram has more than one link component or more than one color;
    // for a knot the denominator survives.
    let nabla = match det_k.exact_div(&t1) {
        Ok(q) => RationalFn::from_poly(q),
        Err(_) => RationalFn::new(det_k.clone(), t1.clone())?,
    };

    // Second route: det of the reduced symbolic matrix times the product of
    // inverse clasp factors gives the square of the Conway function.
    let tau = tau_symbolic_marked(d)?;
    let rows: Vec<Vec<RationalFn>> = (0..tau.dim())
        .map(|i| (0..tau.dim()).map(|j| tau.entry(i, j).clone()).collect())
        .collect();
    let det_tau = det_rational(nv, &rows)?;
    let mut rescale = RationalFn::new(LaurentPoly::one(nv), &t1 * &t1)?;
    for s in clasp_diagonal(d) {
        rescale = rescale.div(&s)?;
    }
    let nabla_sq = det_tau.mul(&rescale);
    let consistency_ok = nabla.mul(&nabla).equals(&nabla_sq);

    // Alexander polynomial: with at least two colors the Conway function is
    // itself a unit multiple of the Alexander polynomial in t^2; with one
    // color that holds after multiplying back by t_1 - t_1^-1, which gives
    // exactly the label determinant.
    let in_t_sq = if nv >= 2 {
        nabla
            .as_poly()
            .cloned()
            .ok_or_else(|| {
                Error::Inconsistency(
                    "Conway function of a multicolored connected diagram is not polynomial"
                        .into(),
                )
            })?
    } else {
        det_k.clone()
    };
    let alexander = in_t_sq
        .halve_exponents()?
        .centered()?
        .with_positive_leading();
    if !alexander.phi().equals_up_to_unit(&alexander) {
        return Err(Error::Inconsistency(
            "symmetrized Alexander polynomial is not phi-symmetric".into(),
        ));
    }
    let canonical = RationalFn::new(
        nabla.num().with_positive_leading(),
        nabla.den().clone(),
    )?;
    Ok(ConwayResult {
        nabla_up_to_sign: canonical,
        nabla_sq,
        alexander,
        consistency_ok,
    })
}

/// Result of checking the color-merging identity at one point.
#[derive(Debug, Clone)]
pub struct MergeCheck {
    pub sigma_merged: i64,
    pub sigma_original: i64,
    pub linking_sum: i64,
    pub ok: bool,
}

/// Check that merging colors `c1, c2` changes the signature by minus the
/// total linking number between the two colors: the signature of the merged
/// diagram at `p` must equal the signature of the original at the lifted
/// point (both merged colors evaluated at the shared angle) minus the sum of
/// linking numbers between components of the two colors.
pub fn check_color_merge(
    d: &ColoredDiagram,
    c1: Color,
    c2: Color,
    p: &TorusPoint,
    tol_rel: f64,
) -> Result<MergeCheck> {
    let merged = d.merge_colors(c1, c2)?;
    if p.dim() != merged.num_colors() {
        return Err(Error::Domain(format!(
            "point has {} angles but the merged diagram has {} colors",
            p.dim(),
            merged.num_colors()
        )));
    }
    let lo = c1.min(c2);
    let hi = c1.max(c2);
    let lift: Vec<f64> = (1..=d.num_colors())
        .map(|c| {
            let image = if c == hi {
                lo
            } else if c > hi {
                c - 1
            } else {
                c
            };
            p.theta(image - 1)
        })
        .collect();
    let lifted = TorusPoint::new(lift)?;
    let sigma_merged = signature_at(&merged, p, tol_rel)?.sigma;
    let sigma_original = signature_at(d, &lifted, tol_rel)?.sigma;
    let linking_sum = d.linking_between_colors(c1, c2)?;
    Ok(MergeCheck {
        sigma_merged,
        sigma_original,
        linking_sum,
        ok: sigma_merged == sigma_original - linking_sum,
    })
}
