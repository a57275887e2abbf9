//! Exact multivariate Laurent arithmetic over the rationals.
//!
//! Polynomials live in `Q[u_1^{±1}, ..., u_m^{±1}]` where `u_i` stands for
//! `t_i^{1/2}`: an exponent entry `k` on variable `i` denotes `t_i^{k/2}`.
//! Half-integer powers of `t_i` are therefore ordinary integer exponents here.
//! Coefficients are arbitrary-precision rationals and terms are kept in a
//! canonical map with no zero entries, so equality is structural.

use std::collections::BTreeMap;
use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

/// Point on the open torus: angles `theta_j` with `0 < theta_j < 2*pi`.
///
/// Represents the evaluation point `omega_j = exp(i*theta_j)`; the open range
/// keeps `omega_j != 1` so the half-angle square roots below are well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusPoint {
    thetas: Vec<f64>,
}

impl TorusPoint {
    pub fn new(thetas: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(Error::Domain("torus point needs at least one angle".into()));
        }
        for (i, &t) in thetas.iter().enumerate() {
            if !t.is_finite() || t <= 0.0 || t >= 2.0 * std::f64::consts::PI {
                return Err(Error::Domain(format!(
                    "theta{} = {} is outside the open interval (0, 2*pi)",
                    i + 1,
                    t
                )));
            }
        }
        Ok(TorusPoint { thetas })
    }

    pub fn dim(&self) -> usize {
        self.thetas.len()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta(&self, var: usize) -> f64 {
        self.thetas[var]
    }
}

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    num_vars: usize,
    terms: BTreeMap<Vec<i32>, BigRational>,
}

impl LaurentPoly {
    pub fn zero(num_vars: usize) -> Self {
        LaurentPoly { num_vars, terms: BTreeMap::new() }
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigRational::one())
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    pub fn from_i64(num_vars: usize, c: i64) -> Self {
        Self::constant(num_vars, BigRational::from_integer(BigInt::from(c)))
    }

    /// Single term `coeff * prod_i u_i^{exps[i]}` (`u_i = t_i^{1/2}`).
    pub fn monomial(num_vars: usize, exps: Vec<i32>, coeff: BigRational) -> Self {
        assert_eq!(exps.len(), num_vars, "exponent vector length mismatch");
        let mut p = Self::zero(num_vars);
        p.add_term(exps, coeff);
        p
    }

    /// The variable `t_var` (exponent 2 on `u_var`).
    pub fn var_t(num_vars: usize, var: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[var] = 2;
        Self::monomial(num_vars, e, BigRational::one())
    }

    /// `t_var^{half/2}`, i.e. the monomial with exponent `half` on `u_var`.
    pub fn t_half_pow(num_vars: usize, var: usize, half: i32) -> Self {
        let mut e = vec![0; num_vars];
        e[var] = half;
        Self::monomial(num_vars, e, BigRational::one())
    }

    /// `t_var - t_var^{-1}`.
    pub fn t_minus_tinv(num_vars: usize, var: usize) -> Self {
        &Self::var_t(num_vars, var) - &Self::t_half_pow(num_vars, var, -2)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, exps: Vec<i32>, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Lexicographically greatest term, if any.
    pub fn leading(&self) -> Option<(&Vec<i32>, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff_is_negative(&self) -> bool {
        self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }

    /// Representative with positive lex-leading coefficient (`0` stays `0`).
    pub fn with_positive_leading(&self) -> LaurentPoly {
        if self.leading_coeff_is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Per-variable minimum and maximum exponents over the support.
    pub fn exponent_range(&self, var: usize) -> Option<(i32, i32)> {
        let mut range: Option<(i32, i32)> = None;
        for e in self.terms.keys() {
            let x = e[var];
            range = Some(match range {
                None => (x, x),
                Some((lo, hi)) => (lo.min(x), hi.max(x)),
            });
        }
        range
    }

    /// Multiply by the single term `coeff * u^{exps}`.
    pub fn mul_monomial(&self, exps: &[i32], coeff: &BigRational) -> LaurentPoly {
        if coeff.is_zero() {
            return Self::zero(self.num_vars);
        }
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            let ne: Vec<i32> = e.iter().zip(exps).map(|(a, b)| a + b).collect();
            out.terms.insert(ne, c * coeff);
        }
        out
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = Self::one(self.num_vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The involution `phi`: `t_i -> t_i^{-1}` for every variable, i.e. all
    /// exponents negated.
    pub fn phi(&self) -> LaurentPoly {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.terms.insert(e.iter().map(|x| -x).collect(), c.clone());
        }
        out
    }

    /// Exact division in the Laurent ring. Fails with an inconsistency error
    /// when `self` is not a multiple of `d`; callers treat that as an alarm
    /// unless non-exactness is expected at that call site.
    pub fn exact_div(&self, d: &LaurentPoly) -> Result<LaurentPoly> {
        if d.is_zero() {
            return Err(Error::Domain("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.num_vars));
        }
        let nv = self.num_vars;
        // Shift both operands into ordinary-polynomial exponent space.
        let a_min: Vec<i32> = (0..nv).map(|v| self.exponent_range(v).unwrap().0).collect();
        let d_min: Vec<i32> = (0..nv).map(|v| d.exponent_range(v).unwrap().0).collect();
        let neg = |m: &[i32]| m.iter().map(|x| -x).collect::<Vec<i32>>();
        let a0 = self.mul_monomial(&neg(&a_min), &BigRational::one());
        let d0 = d.mul_monomial(&neg(&d_min), &BigRational::one());

        let (dl_e, dl_c) = {
            let (e, c) = d0.leading().unwrap();
            (e.clone(), c.clone())
        };
        let mut rem = a0;
        let mut quot = Self::zero(nv);
        while let Some((rl_e, rl_c)) = rem.leading().map(|(e, c)| (e.clone(), c.clone())) {
            let mut qe = Vec::with_capacity(nv);
            for i in 0..nv {
                let x = rl_e[i] - dl_e[i];
                if x < 0 {
                    return Err(Error::Inconsistency("non-exact polynomial division".into()));
                }
                qe.push(x);
            }
            let qc = rl_c / &dl_c;
            let piece = d0.mul_monomial(&qe, &qc);
            rem = &rem - &piece;
            quot.add_term(qe, qc);
        }
        // Undo the shifts: quotient picks up u^{a_min - d_min}.
        let shift: Vec<i32> = a_min.iter().zip(&d_min).map(|(a, b)| a - b).collect();
        Ok(quot.mul_monomial(&shift, &BigRational::one()))
    }

    /// Substitute `t_i^2 -> t_i`, i.e. halve every exponent. All exponents
    /// must be even; an odd exponent is an internal inconsistency.
    pub fn halve_exponents(&self) -> Result<LaurentPoly> {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            let mut ne = Vec::with_capacity(e.len());
            for &x in e {
                if x % 2 != 0 {
                    return Err(Error::Inconsistency(
                        "odd exponent during t^2 -> t substitution".into(),
                    ));
                }
                ne.push(x / 2);
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// Shift every variable's support so it is centered about exponent zero.
    /// Requires `min + max` even per variable (always true for supports that
    /// admit a symmetric representative in this ring).
    pub fn centered(&self) -> Result<LaurentPoly> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut shift = Vec::with_capacity(self.num_vars);
        for v in 0..self.num_vars {
            let (lo, hi) = self.exponent_range(v).unwrap();
            if (lo + hi) % 2 != 0 {
                return Err(Error::Inconsistency(
                    "support cannot be centered in half-integer powers".into(),
                ));
            }
            shift.push(-(lo + hi) / 2);
        }
        Ok(self.mul_monomial(&shift, &BigRational::one()))
    }

    /// Equality up to multiplication by `±u^delta` (a unit of the Laurent
    /// ring): the relation under which Alexander polynomials from different
    /// constructions are compared.
    pub fn equals_up_to_unit(&self, other: &LaurentPoly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (ea, _) = self.leading().unwrap();
        let (eb, _) = other.leading().unwrap();
        let delta: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a - b).collect();
        let shifted = other.mul_monomial(&delta, &BigRational::one());
        *self == shifted || *self == -&shifted
    }

    /// Positive rational content: gcd of coefficient numerators over lcm of
    /// coefficient denominators. Zero polynomial has content 1.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        BigRational::new(num_gcd, den_lcm)
    }

    pub fn scale(&self, c: &BigRational) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        let mut out = Self::zero(self.num_vars);
        for (e, k) in &self.terms {
            out.terms.insert(e.clone(), k * c);
        }
        out
    }

    /// Evaluate at `u_i = exp(i*theta_i/2)` (so `t_i = omega_i` on the unit
    /// torus). Exact coefficients are converted to `f64` only here, at the
    /// final accumulation step.
    pub fn eval_complex(&self, p: &TorusPoint) -> Result<Complex64> {
        if p.dim() != self.num_vars {
            return Err(Error::Domain(format!(
                "point has {} angles but polynomial has {} variables",
                p.dim(),
                self.num_vars
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            // u^e has phase sum_i e_i * theta_i / 2.
            let phase: f64 = e
                .iter()
                .zip(p.thetas())
                .map(|(&k, &th)| k as f64 * th / 2.0)
                .sum();
            let cf = rational_to_f64(c);
            acc += Complex64::new(phase.cos() * cf, phase.sin() * cf);
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                serde_json::json!({
                    "exponents": e,
                    "coeff": c.to_string(),
                })
            })
            .collect();
        serde_json::json!({ "num_vars": self.num_vars, "terms": terms })
    }
}

pub fn rational_to_f64(c: &BigRational) -> f64 {
    // Avoids overflow for big numerators by dividing in the float domain.
    let n = c.numer();
    let d = c.denom();
    let nf = bigint_to_f64(n);
    let df = bigint_to_f64(d);
    nf / df
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c);
        }
        out
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = LaurentPoly::zero(self.num_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    /// Renders `t1^(1/2)`-style monomials: integer powers of `t_i` print as
    /// `t1^-2`, half powers as `t1^(-3/2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = render_monomial(e);
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag, mono)?;
            }
        }
        Ok(())
    }
}

fn render_monomial(e: &[i32]) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let var = format!("t{}", i + 1);
        if k % 2 == 0 {
            let p = k / 2;
            if p == 1 {
                parts.push(var);
            } else {
                parts.push(format!("{}^{}", var, p));
            }
        } else {
            parts.push(format!("{}^({}/2)", var, k));
        }
    }
    parts.join("*")
}

/// Quotient of Laurent polynomials in normal form: the denominator carries no
/// monomial factor, has content 1 and a positive lex-leading coefficient; a
/// zero numerator forces denominator 1. Not fully reduced (no multivariate
/// gcd), so equality is tested by cross-multiplication.
#[derive(Debug, Clone)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        assert_eq!(num.num_vars(), den.num_vars(), "variable count mismatch");
        let mut r = RationalFn { num, den };
        r.normalize();
        Ok(r)
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        let den = LaurentPoly::one(num.num_vars());
        RationalFn { num, den }
    }

    pub fn zero(num_vars: usize) -> Self {
        Self::from_poly(LaurentPoly::zero(num_vars))
    }

    pub fn one(num_vars: usize) -> Self {
        Self::from_poly(LaurentPoly::one(num_vars))
    }

    fn normalize(&mut self) {
        let nv = self.num.num_vars();
        if self.num.is_zero() {
            self.den = LaurentPoly::one(nv);
            return;
        }
        // Move the denominator's monomial content into the numerator.
        let shift: Vec<i32> = (0..nv)
            .map(|v| -self.den.exponent_range(v).unwrap().0)
            .collect();
        if shift.iter().any(|&s| s != 0) {
            self.den = self.den.mul_monomial(&shift, &BigRational::one());
            self.num = self.num.mul_monomial(&shift, &BigRational::one());
        }
        // One overall rational scale: make the denominator content-free with
        // positive leading coefficient.
        let mut c = self.den.content();
        if self.den.leading_coeff_is_negative() {
            c = -c;
        }
        let inv = c.recip();
        self.den = self.den.scale(&inv);
        self.num = self.num.scale(&inv);
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn num_vars(&self) -> usize {
        self.num.num_vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == LaurentPoly::one(self.num.num_vars())
    }

    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        if self.is_polynomial() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Attempt exact division `num / den`, collapsing to a polynomial.
    pub fn to_poly_exact(&self) -> Result<LaurentPoly> {
        self.num.exact_div(&self.den)
    }

    pub fn phi(&self) -> RationalFn {
        let mut r = RationalFn { num: self.num.phi(), den: self.den.phi() };
        r.normalize();
        r
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn add(&self, rhs: &RationalFn) -> RationalFn {
        let mut r = if self.den == rhs.den {
            RationalFn { num: &self.num + &rhs.num, den: self.den.clone() }
        } else {
            RationalFn {
                num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
                den: &self.den * &rhs.den,
            }
        };
        r.normalize();
        r
    }

    pub fn sub(&self, rhs: &RationalFn) -> RationalFn {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &RationalFn) -> RationalFn {
        let mut r = RationalFn { num: &self.num * &rhs.num, den: &self.den * &rhs.den };
        r.normalize();
        r
    }

    pub fn div(&self, rhs: &RationalFn) -> Result<RationalFn> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by zero rational function".into()));
        }
        let mut r = RationalFn { num: &self.num * &rhs.den, den: &self.den * &rhs.num };
        r.normalize();
        Ok(r)
    }

    pub fn scale(&self, c: &BigRational) -> RationalFn {
        let mut r = RationalFn { num: self.num.scale(c), den: self.den.clone() };
        r.normalize();
        r
    }

    /// Value equality by cross-multiplication (the representation is not
    /// reduced, so structural equality would be too strict).
    pub fn equals(&self, rhs: &RationalFn) -> bool {
        &self.num * &rhs.den == &rhs.num * &self.den
    }

    pub fn eval_complex(&self, p: &TorusPoint) -> Result<Complex64> {
        let n = self.num.eval_complex(p)?;
        let d = self.den.eval_complex(p)?;
        if d.norm() < 1e-12 {
            return Err(Error::DenominatorVanished { residual: d.norm() });
        }
        Ok(n / d)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "num": self.num.to_string(),
            "den": self.den.to_string(),
        })
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

/// Fraction-free determinant of a square polynomial matrix (Bareiss
/// elimination with row pivoting). All interior divisions are exact in the
/// Laurent ring; a non-exact division indicates corrupted input and surfaces
/// as an inconsistency error. The empty matrix has determinant 1.
pub fn bareiss_det(num_vars: usize, mut m: Vec<Vec<LaurentPoly>>) -> Result<LaurentPoly> {
    let n = m.len();
    for row in &m {
        if row.len() != n {
            return Err(Error::Domain("determinant of a non-square matrix".into()));
        }
    }
    if n == 0 {
        return Ok(LaurentPoly::one(num_vars));
    }
    let mut sign = 1i32;
    let mut prev = LaurentPoly::one(num_vars);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(LaurentPoly::zero(num_vars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.exact_div(&prev)?;
            }
            m[i][k] = LaurentPoly::zero(num_vars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign < 0 { -&det } else { det })
}

/// Determinant of a square matrix of rational functions: clear each row's
/// denominators (product of its distinct denominators), run the fraction-free
/// determinant, and divide the cleared factors back out.
pub fn det_rational(num_vars: usize, m: &[Vec<RationalFn>]) -> Result<RationalFn> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::Domain("determinant of a non-square matrix".into()));
        }
    }
    if n == 0 {
        return Ok(RationalFn::one(num_vars));
    }
    // Denominators in this ring are, after normalization, a unit times a
    // product of the atoms `u_c^4 - 1`. Factoring them lets each row be
    // cleared by the least common multiple instead of the product of its
    // distinct denominators, which keeps the entries small.
    let atoms: Vec<LaurentPoly> = (0..num_vars)
        .map(|c| &LaurentPoly::t_half_pow(num_vars, c, 4) - &LaurentPoly::one(num_vars))
        .collect();
    struct FactoredDen {
        powers: Vec<u32>,
        unit_exps: Vec<i32>,
        unit_coeff: BigRational,
        opaque: Option<LaurentPoly>,
    }
    let factor_den = |den: &LaurentPoly| -> FactoredDen {
        let mut rest = den.clone();
        let mut powers = vec![0u32; num_vars];
        for (c, atom) in atoms.iter().enumerate() {
            while let Ok(q) = rest.exact_div(atom) {
                rest = q;
                powers[c] += 1;
            }
        }
        if rest.num_terms() == 1 {
            let (e, k) = rest.leading().expect("nonzero denominator");
            FactoredDen {
                powers,
                unit_exps: e.clone(),
                unit_coeff: k.clone(),
                opaque: None,
            }
        } else {
            FactoredDen {
                powers: vec![0; num_vars],
                unit_exps: vec![0; num_vars],
                unit_coeff: BigRational::one(),
                opaque: Some(den.clone()),
            }
        }
    };

    let mut cleared: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
    let mut factors: Vec<LaurentPoly> = Vec::new();
    for row in m {
        let facts: Vec<FactoredDen> = row.iter().map(|e| factor_den(e.den())).collect();
        let mut row_pow = vec![0u32; num_vars];
        let mut opaques: Vec<&LaurentPoly> = Vec::new();
        for f in &facts {
            for c in 0..num_vars {
                row_pow[c] = row_pow[c].max(f.powers[c]);
            }
            if let Some(op) = &f.opaque {
                if !opaques.iter().any(|o| *o == op) {
                    opaques.push(op);
                }
            }
        }
        let mut opaque_product = LaurentPoly::one(num_vars);
        for op in &opaques {
            opaque_product = &opaque_product * *op;
            factors.push((*op).clone());
        }
        for c in 0..num_vars {
            for _ in 0..row_pow[c] {
                factors.push(atoms[c].clone());
            }
        }
        let mut out_row = Vec::with_capacity(n);
        for (e, f) in row.iter().zip(&facts) {
            // Cofactor = row LCM / this entry's denominator, assembled from
            // the factorization instead of a polynomial division.
            let mut cof = match &f.opaque {
                Some(op) => opaque_product.exact_div(op)?,
                None => opaque_product.clone(),
            };
            for c in 0..num_vars {
                for _ in 0..row_pow[c] - f.powers[c] {
                    cof = &cof * &atoms[c];
                }
            }
            let inv_exps: Vec<i32> = f.unit_exps.iter().map(|x| -x).collect();
            let inv_coeff = BigRational::one() / &f.unit_coeff;
            out_row.push((&cof * e.num()).mul_monomial(&inv_exps, &inv_coeff));
        }
        cleared.push(out_row);
    }
    let mut num = bareiss_det(num_vars, cleared)?;
    // Cancel each cleared denominator factor that divides the determinant
    // exactly; without this the fraction grows far beyond its reduced size
    // and every later operation pays for it. Leftover factors stay in the
    // denominator, which is always correct, just not always minimal.
    let mut den = LaurentPoly::one(num_vars);
    for f in factors {
        if num.is_zero() {
            break;
        }
        match num.exact_div(&f) {
            Ok(q) => num = q,
            Err(_) => den = &den * &f,
        }
    }
    RationalFn::new(num, den)
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
