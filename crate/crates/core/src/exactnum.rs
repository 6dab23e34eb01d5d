//! Exact rational and cyclotomic field arithmetic with certified numeric embedding.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

pub use num_rational::BigRational as Rational;

/// Errors raised by exact field arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumError {
    /// Division by the zero field element.
    #[error("division by zero")]
    DivisionByZero,
}

/// Builds a rational number from a numerator and a nonzero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Returns the working binary precision for numeric embeddings, from `MMFUSION_PREC_BITS`.
pub fn precision_bits() -> usize {
    static PREC: OnceLock<usize> = OnceLock::new();
    *PREC.get_or_init(|| {
        std::env::var("MMFUSION_PREC_BITS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .map(|b| b.max(64))
            .unwrap_or(128)
    })
}

fn consts() -> &'static Mutex<Consts> {
    static CC: OnceLock<Mutex<Consts>> = OnceLock::new();
    CC.get_or_init(|| Mutex::new(Consts::new().expect("constants cache")))
}

/// Returns the coefficients of the N-th cyclotomic polynomial, ascending degree, monic.
pub fn cyclotomic(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        let mut num = vec![BigInt::zero(); (n + 1) as usize];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                num = poly_div_exact(&num, &cyclotomic(d));
            }
        }
        num
    };
    let arc = Arc::new(poly);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

/// Divides one integer polynomial by a monic one, panicking on a nonzero remainder.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let f = rem[i].clone();
        quot[i - dd] = f.clone();
        for (j, dc) in den.iter().enumerate() {
            let idx = i - dd + j;
            rem[idx] = &rem[idx] - &f * dc;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    while quot.len() > 1 && quot.last().map(|c| c.is_zero()).unwrap_or(false) {
        quot.pop();
    }
    quot
}

/// An exact element of the cyclotomic field Q(zeta_N), reduced modulo the N-th cyclotomic polynomial.
#[derive(Clone, Debug)]
pub struct CycNumber {
    order: u64,
    coeffs: BTreeMap<u64, Rational>,
}

/// Returns zeta_N^k in canonical form.
pub fn root_of_unity(n: u64, k: i64) -> CycNumber {
    assert!(n >= 1, "order must be positive");
    let e = k.rem_euclid(n as i64) as u64;
    let mut dense = vec![Rational::zero(); (e + 1) as usize];
    dense[e as usize] = Rational::one();
    CycNumber::from_dense(n, dense)
}

impl CycNumber {
    /// Returns the zero field element.
    pub fn zero() -> Self {
        CycNumber { order: 1, coeffs: BTreeMap::new() }
    }

    /// Returns the multiplicative unit.
    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// Embeds a rational number as a cyclotomic field element.
    pub fn from_rational(r: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(0, r);
        }
        CycNumber { order: 1, coeffs }
    }

    /// Embeds an integer as a cyclotomic field element.
    pub fn from_int(v: i64) -> Self {
        Self::from_rational(rat(v, 1))
    }

    /// Returns the cyclotomic order N of the ambient field Q(zeta_N).
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Returns the canonical coordinates as (exponent, coefficient) pairs.
    pub fn coords(&self) -> Vec<(u64, Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c.clone())).collect()
    }

    /// Returns true exactly when this is the zero field element.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Returns true exactly when this is the multiplicative unit.
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1
            && self.coeffs.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    fn from_dense(order: u64, dense: Vec<Rational>) -> Self {
        let reduced = reduce_mod_cyclotomic(order, dense);
        let mut coeffs = BTreeMap::new();
        for (e, c) in reduced.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert(e as u64, c);
            }
        }
        CycNumber { order, coeffs }
    }

    fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut dense = vec![Rational::zero(); len];
        for (e, c) in &self.coeffs {
            dense[*e as usize] = c.clone();
        }
        dense
    }

    /// Rewrites this element in Q(zeta_M) for any multiple M of its order.
    pub fn lift(&self, m: u64) -> CycNumber {
        assert!(m % self.order == 0, "target order must be a multiple");
        if m == self.order {
            return self.clone();
        }
        let step = m / self.order;
        let mut dense = vec![Rational::zero(); m as usize];
        for (e, c) in &self.coeffs {
            dense[(e * step) as usize] = c.clone();
        }
        CycNumber::from_dense(m, dense)
    }

    fn common(&self, other: &CycNumber) -> (CycNumber, CycNumber, u64) {
        let l = self.order.lcm(&other.order);
        (self.lift(l), other.lift(l), l)
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, r: &Rational) -> CycNumber {
        if r.is_zero() {
            return CycNumber::zero();
        }
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, c * r)).collect();
        CycNumber { order: self.order, coeffs }
    }

    /// Raises to an integer power, inverting for negative exponents.
    pub fn pow(&self, k: i64) -> Result<CycNumber, NumError> {
        let base = if k < 0 { CycNumber::one().checked_div(self)? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CycNumber::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Divides by another element, failing exactly on a zero divisor.
    pub fn checked_div(&self, other: &CycNumber) -> Result<CycNumber, NumError> {
        if other.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(CycNumber::zero());
        }
        let (a, b, l) = self.common(other);
        let phi = cyclotomic(l);
        let deg = phi.len() - 1;
        let inv = poly_inverse(&b.to_dense(deg), &phi);
        let prod = poly_mul(&a.to_dense(deg), &inv);
        Ok(CycNumber::from_dense(l, prod))
    }

    /// Returns the smallest positive power equal to one, searching up to a cap.
    pub fn multiplicative_order(&self, cap: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// Evaluates this element numerically with a conservative error bound.
    pub fn embed_numeric(&self) -> ComplexApprox {
        let p = precision_bits();
        let rm = RoundingMode::ToEven;
        let mut acc = ComplexApprox::exact_zero();
        let mut cc = consts().lock().unwrap();
        let pi = cc.pi(p, rm);
        for (e, c) in &self.coeffs {
            let ratio = BigFloat::from_f64(2.0 * *e as f64, p).div(
                &BigFloat::from_f64(self.order as f64, p),
                p,
                rm,
            );
            let angle = ratio.mul(&pi, p, rm);
            let cos = angle.cos(p, rm, &mut cc);
            let sin = angle.sin(p, rm, &mut cc);
            let coeff = rational_to_bigfloat(c, p, &mut cc);
            let term = ComplexApprox::with_eps(coeff.mul(&cos, p, rm), coeff.mul(&sin, p, rm));
            acc = acc.add(&term);
        }
        acc
    }
}

fn reduce_mod_cyclotomic(order: u64, mut dense: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic(order);
    let deg = phi.len() - 1;
    while dense.len() > deg {
        let top = dense.len() - 1;
        let lead = dense[top].clone();
        dense.pop();
        if lead.is_zero() {
            continue;
        }
        for (j, pc) in phi.iter().take(deg).enumerate() {
            let idx = top - deg + j;
            let adj = &lead * &Rational::from(pc.clone());
            dense[idx] = &dense[idx] - adj;
        }
    }
    dense.resize(deg, Rational::zero());
    dense
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] = &out[i + j] + ca * cb;
            }
        }
    }
    out
}

fn poly_deg(a: &[Rational]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

fn poly_rem(mut a: Vec<Rational>, b: &[Rational]) -> Vec<Rational> {
    let db = poly_deg(b).expect("nonzero divisor");
    let lead = b[db].clone();
    while let Some(da) = poly_deg(&a) {
        if da < db {
            break;
        }
        let f = &a[da] / &lead;
        for j in 0..=db {
            let idx = da - db + j;
            let adj = &f * &b[j];
            a[idx] = &a[idx] - adj;
        }
    }
    a
}

/// Inverts a polynomial modulo an irreducible modulus via the extended Euclidean algorithm.
fn poly_inverse(g: &[Rational], modulus: &[BigInt]) -> Vec<Rational> {
    let m: Vec<Rational> = modulus.iter().map(|c| Rational::from(c.clone())).collect();
    let mut r0 = m.clone();
    let mut r1 = g.to_vec();
    let mut s0 = vec![Rational::zero()];
    let mut s1 = vec![Rational::one()];
    while poly_deg(&r1).is_some() {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    let d = poly_deg(&r0).expect("gcd with irreducible modulus is a nonzero constant");
    assert!(d == 0, "modulus must be irreducible");
    let c = r0[0].clone();
    s0.iter().map(|x| x / &c).collect()
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, slot) in out.iter_mut().enumerate() {
        let ca = a.get(i).cloned().unwrap_or_else(Rational::zero);
        let cb = b.get(i).cloned().unwrap_or_else(Rational::zero);
        *slot = ca - cb;
    }
    out
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = poly_deg(b).expect("nonzero divisor");
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    let qlen = a.len().saturating_sub(db).max(1);
    let mut quot = vec![Rational::zero(); qlen];
    while let Some(da) = poly_deg(&rem) {
        if da < db {
            break;
        }
        let f = &rem[da] / &lead;
        quot[da - db] = f.clone();
        for j in 0..=db {
            let idx = da - db + j;
            let adj = &f * &b[j];
            rem[idx] = &rem[idx] - adj;
        }
    }
    (quot, poly_rem(rem, b))
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b, _) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNumber {}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, other: &CycNumber) -> CycNumber {
        let (a, b, l) = self.common(other);
        let mut coeffs = a.coeffs;
        for (e, c) in b.coeffs {
            let entry = coeffs.entry(e).or_insert_with(Rational::zero);
            *entry = &*entry + c;
            if entry.is_zero() {
                coeffs.remove(&e);
            }
        }
        CycNumber { order: l, coeffs }
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, other: &CycNumber) -> CycNumber {
        self + &(-other)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        let coeffs = self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect();
        CycNumber { order: self.order, coeffs }
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, other: &CycNumber) -> CycNumber {
        if self.is_zero() || other.is_zero() {
            return CycNumber::zero();
        }
        let (a, b, l) = self.common(other);
        let deg = cyclotomic(l).len() - 1;
        let prod = poly_mul(&a.to_dense(deg), &b.to_dense(deg));
        CycNumber::from_dense(l, prod)
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *e == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "z{}^{}", self.order, e)?;
            } else {
                write!(f, "{mag}*z{}^{}", self.order, e)?;
            }
        }
        Ok(())
    }
}

/// A high-precision complex value carrying a conservative absolute error bound.
#[derive(Clone, Debug)]
pub struct ComplexApprox {
    pub re: BigFloat,
    pub im: BigFloat,
    pub error_bound: f64,
}

/// Converts a high-precision float to f64 through its decimal rendering.
pub fn bf_to_f64(x: &BigFloat) -> f64 {
    format!("{x}").parse().unwrap_or(f64::NAN)
}

fn rational_to_bigfloat(r: &Rational, p: usize, cc: &mut Consts) -> BigFloat {
    let rm = RoundingMode::ToEven;
    let num = BigFloat::parse(&r.numer().to_string(), Radix::Dec, p, rm, cc);
    let den = BigFloat::parse(&r.denom().to_string(), Radix::Dec, p, rm, cc);
    num.div(&den, p, rm)
}

fn base_eps() -> f64 {
    let p = precision_bits().min(1000) as i32;
    2f64.powi(-(p - 6))
}

impl ComplexApprox {
    fn exact_zero() -> Self {
        let p = precision_bits();
        ComplexApprox {
            re: BigFloat::from_f64(0.0, p),
            im: BigFloat::from_f64(0.0, p),
            error_bound: 0.0,
        }
    }

    fn with_eps(re: BigFloat, im: BigFloat) -> Self {
        let mut z = ComplexApprox { re, im, error_bound: 0.0 };
        z.error_bound = base_eps() * (z.mag() + 1.0);
        z
    }

    fn mag(&self) -> f64 {
        bf_to_f64(&self.re).abs() + bf_to_f64(&self.im).abs()
    }

    /// Returns the real part as f64.
    pub fn re_f64(&self) -> f64 {
        bf_to_f64(&self.re)
    }

    /// Returns the imaginary part as f64.
    pub fn im_f64(&self) -> f64 {
        bf_to_f64(&self.im)
    }

    /// Adds two approximations, combining error bounds.
    pub fn add(&self, other: &ComplexApprox) -> ComplexApprox {
        let p = precision_bits();
        let rm = RoundingMode::ToEven;
        let mut z = ComplexApprox {
            re: self.re.add(&other.re, p, rm),
            im: self.im.add(&other.im, p, rm),
            error_bound: self.error_bound + other.error_bound,
        };
        z.error_bound += base_eps() * (z.mag() + 1.0);
        z
    }

    /// Subtracts two approximations, combining error bounds.
    pub fn sub(&self, other: &ComplexApprox) -> ComplexApprox {
        let p = precision_bits();
        let rm = RoundingMode::ToEven;
        let mut z = ComplexApprox {
            re: self.re.sub(&other.re, p, rm),
            im: self.im.sub(&other.im, p, rm),
            error_bound: self.error_bound + other.error_bound,
        };
        z.error_bound += base_eps() * (z.mag() + 1.0);
        z
    }

    /// Multiplies two approximations, combining error bounds.
    pub fn mul(&self, other: &ComplexApprox) -> ComplexApprox {
        let p = precision_bits();
        let rm = RoundingMode::ToEven;
        let ac = self.re.mul(&other.re, p, rm);
        let bd = self.im.mul(&other.im, p, rm);
        let ad = self.re.mul(&other.im, p, rm);
        let bc = self.im.mul(&other.re, p, rm);
        let mut z = ComplexApprox {
            re: ac.sub(&bd, p, rm),
            im: ad.add(&bc, p, rm),
            error_bound: self.mag() * other.error_bound
                + other.mag() * self.error_bound
                + self.error_bound * other.error_bound,
        };
        z.error_bound += base_eps() * (z.mag() + 1.0);
        z
    }

    /// Returns the distance to another approximation as f64.
    pub fn dist_f64(&self, other: &ComplexApprox) -> f64 {
        let dr = self.re_f64() - other.re_f64();
        let di = self.im_f64() - other.im_f64();
        (dr * dr + di * di).sqrt()
    }

    /// Returns the distance to an f64 complex pair.
    pub fn dist_to(&self, re: f64, im: f64) -> f64 {
        let dr = self.re_f64() - re;
        let di = self.im_f64() - im;
        (dr * dr + di * di).sqrt()
    }

    /// Returns the modulus as f64.
    pub fn abs_f64(&self) -> f64 {
        let r = self.re_f64();
        let i = self.im_f64();
        (r * r + i * i).sqrt()
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = self.re_f64();
        let im = self.im_f64();
        if im >= 0.0 {
            write!(f, "{re:.15}+{im:.15}i")
        } else {
            write!(f, "{re:.15}{im:.15}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(n: u64, k: i64) -> CycNumber {
        root_of_unity(n, k)
    }

    #[test]
    fn cyclotomic_polynomials_have_expected_shapes() {
        assert_eq!(*cyclotomic(1), vec![BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(*cyclotomic(2), vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(*cyclotomic(4), vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        assert_eq!(
            *cyclotomic(6),
            vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]
        );
        assert_eq!(cyclotomic(12).len() - 1, 4);
        assert_eq!(cyclotomic(224).len() - 1, 96);
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        assert_eq!(zeta(4, 2), CycNumber::from_int(-1));
        assert_eq!(&zeta(4, 1) * &zeta(4, 1), CycNumber::from_int(-1));
    }

    #[test]
    fn seventh_root_has_period_seven() {
        assert_eq!(zeta(7, 7), CycNumber::one());
        assert_eq!(&zeta(7, 1) * &zeta(7, 6), CycNumber::one());
        assert_eq!(zeta(28, 14), CycNumber::from_int(-1));
    }

    #[test]
    fn seventh_roots_sum_to_zero() {
        let mut s = CycNumber::zero();
        for k in 0..7 {
            s = &s + &zeta(7, k);
        }
        assert!(s.is_zero());
    }

    #[test]
    fn addition_cancels_imaginary_parts() {
        let a = &CycNumber::one() + &zeta(4, 1);
        let b = &CycNumber::one() - &zeta(4, 1);
        assert_eq!(&a + &b, CycNumber::from_int(2));
        assert!((&zeta(7, 3) - &zeta(7, 3)).is_zero());
    }

    #[test]
    fn division_is_exact_and_guards_zero() {
        let a = &CycNumber::one() + &zeta(4, 1);
        assert!(a.checked_div(&a).unwrap().is_one());
        assert_eq!(
            a.checked_div(&CycNumber::zero()),
            Err(NumError::DivisionByZero)
        );
        let b = &zeta(28, 3) - &zeta(28, 17);
        let q = b.checked_div(&b).unwrap();
        assert!(q.is_one());
    }

    #[test]
    fn equality_lifts_across_orders() {
        assert_eq!(zeta(4, 1), zeta(8, 2));
        assert_eq!(zeta(6, 2), zeta(3, 1));
        assert_eq!(zeta(2, 1), CycNumber::from_int(-1));
        assert_ne!(zeta(8, 1), zeta(4, 1));
    }

    #[test]
    fn multiplicative_orders_divide_the_field_order() {
        assert_eq!(zeta(12, 8).multiplicative_order(12), Some(3));
        assert_eq!(zeta(12, 1).multiplicative_order(12), Some(12));
        assert_eq!(zeta(7, 0).multiplicative_order(7), Some(1));
        assert_eq!(CycNumber::from_int(-1).multiplicative_order(4), Some(2));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let z = zeta(28, 5);
        let mut acc = CycNumber::one();
        for _ in 0..9 {
            acc = &acc * &z;
        }
        assert_eq!(z.pow(9).unwrap(), acc);
        assert_eq!(z.pow(-9).unwrap(), CycNumber::one().checked_div(&acc).unwrap());
    }

    #[test]
    fn embedding_maps_fourth_root_to_i() {
        let z = zeta(4, 1).embed_numeric();
        assert!(z.dist_to(0.0, 1.0) < 1e-15);
        assert!(z.error_bound < 1e-15);
    }

    #[test]
    fn embedding_matches_bracket_sines() {
        let p = 7i64;
        for l in 1..7i64 {
            let bracket = &root_of_unity(28, 2 * l * (p + 1)) - &root_of_unity(28, -2 * l * (p + 1));
            let z = bracket.embed_numeric();
            let expect = 2.0 * (8.0 * std::f64::consts::PI * l as f64 / 7.0).sin();
            assert!(z.dist_to(0.0, expect) < 1e-12, "l={l}");
        }
    }

    #[test]
    fn embedding_reproduces_printed_bracket_values() {
        let b = |l: i64| {
            (&root_of_unity(28, 16 * l) - &root_of_unity(28, -16 * l)).embed_numeric()
        };
        assert!(b(4).dist_to(0.0, 1.9498558243636475) < 1e-12);
        assert!(b(5).dist_to(0.0, -1.5636629649360596) < 1e-12);
        assert!(b(1).dist_to(0.0, -0.8677674782351162) < 1e-12);
    }

    #[test]
    fn embedding_is_multiplicative_within_bounds() {
        let a = &zeta(28, 3) + &CycNumber::from_rational(rat(2, 3));
        let b = &zeta(32, 5) - &zeta(32, 11);
        let lhs = (&a * &b).embed_numeric();
        let rhs = a.embed_numeric().mul(&b.embed_numeric());
        assert!(lhs.dist_f64(&rhs) <= lhs.error_bound + rhs.error_bound + 1e-20);
    }

    #[test]
    fn bracket_ratio_is_exactly_one() {
        let l4 = &zeta(28, 64) - &zeta(28, -64);
        assert!(l4.checked_div(&l4).unwrap().is_one());
    }
}
