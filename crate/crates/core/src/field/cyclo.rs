//! Elements of the cyclotomic field `Q(zeta_d)` in the power basis modulo `Phi_d`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::FieldError;

/// Euler's totient.
pub fn euler_phi(d: u32) -> u32 {
    assert!(d >= 1, "euler_phi of zero");
    let mut n = d;
    let mut result = d;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `d`-th cyclotomic polynomial, coefficients from the constant term up.
///
/// Computed by dividing `x^d - 1` by `Phi_e` for every proper divisor `e` of `d`.
pub fn cyclotomic_polynomial(d: u32) -> Vec<BigInt> {
    assert!(d >= 1, "cyclotomic polynomial of order zero");
    let mut num = vec![BigInt::zero(); d as usize + 1];
    num[0] = -BigInt::one();
    num[d as usize] = BigInt::one();
    for e in 1..d {
        if d.is_multiple_of(e) {
            num = div_monic_int(&num, &cyclotomic_polynomial(e));
        }
    }
    num
}

// Exact division by a monic integer polynomial; the remainder must vanish.
fn div_monic_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Per-order data shared by every element of `Q(zeta_d)`.
#[derive(Debug)]
pub struct CycloCtx {
    order: u32,
    // low coefficients of the monic Phi_d (the leading 1 is implicit)
    modulus: Vec<BigRational>,
}

impl CycloCtx {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.len()
    }

    fn reduce(&self, mut poly: Vec<BigRational>) -> Vec<BigRational> {
        let deg = self.degree();
        for i in (deg..poly.len()).rev() {
            let c = std::mem::take(&mut poly[i]);
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.modulus.iter().enumerate() {
                if !m.is_zero() {
                    poly[i - deg + j] -= &c * m;
                }
            }
        }
        poly.resize(deg, BigRational::zero());
        poly
    }

    fn full_modulus(&self) -> Vec<BigRational> {
        let mut m = self.modulus.clone();
        m.push(BigRational::one());
        m
    }
}

fn context(order: u32) -> Arc<CycloCtx> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloCtx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic context cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| {
            let phi = cyclotomic_polynomial(order);
            let deg = phi.len() - 1;
            Arc::new(CycloCtx {
                order,
                modulus: phi[..deg]
                    .iter()
                    .map(|c| BigRational::from_integer(c.clone()))
                    .collect(),
            })
        })
        .clone()
}

/// An element of `Q(zeta_d)`, stored canonically as a vector of `phi(d)` rationals.
///
/// Elements of the degree-one fields (`d = 1, 2`) are plain rationals and
/// combine with elements of any order.
#[derive(Clone)]
pub struct Cyclo {
    ctx: Arc<CycloCtx>,
    coeffs: Vec<BigRational>,
}

impl Cyclo {
    /// Builds an element from power-basis coordinates; longer inputs are reduced mod `Phi_d`.
    pub fn new(order: u32, coeffs: Vec<BigRational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let ctx = context(order);
        let coeffs = if coeffs.len() >= ctx.degree() {
            ctx.reduce(coeffs)
        } else {
            let mut c = coeffs;
            c.resize(ctx.degree(), BigRational::zero());
            c
        };
        Cyclo { ctx, coeffs }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Cyclo::new(1, vec![r])
    }

    pub fn from_integer(n: i64) -> Self {
        Cyclo::from_rational(BigRational::from_integer(n.into()))
    }

    /// `zeta_d^k` with `zeta_d = exp(2 pi i / d)`.
    pub fn root_of_unity(order: u32, exponent: i64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let k = exponent.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigRational::zero(); k + 1];
        poly[k] = BigRational::one();
        Cyclo::new(order, poly)
    }

    /// `zeta_d` itself.
    pub fn zeta(order: u32) -> Self {
        Cyclo::root_of_unity(order, 1)
    }

    pub fn order(&self) -> u32 {
        self.ctx.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn degree_one(&self) -> bool {
        self.ctx.degree() == 1
    }

    fn lift_to(&self, ctx: &Arc<CycloCtx>) -> Cyclo {
        debug_assert!(self.degree_one());
        let mut coeffs = vec![BigRational::zero(); ctx.degree()];
        coeffs[0] = self.coeffs[0].clone();
        Cyclo {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    // Brings both operands into a common field, promoting rationals.
    fn align(&self, other: &Cyclo) -> Result<(Cyclo, Cyclo), FieldError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.order() == other.order() {
            return Ok((self.clone(), other.clone()));
        }
        match (self.degree_one(), other.degree_one()) {
            (true, _) => Ok((self.lift_to(&other.ctx), other.clone())),
            (false, true) => Ok((self.clone(), other.lift_to(&self.ctx))),
            (false, false) => Err(FieldError::OrderMismatch(self.order(), other.order())),
        }
    }

    pub fn try_add(&self, other: &Cyclo) -> Result<Cyclo, FieldError> {
        let (a, b) = self.align(other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(Cyclo { ctx: a.ctx, coeffs })
    }

    pub fn try_sub(&self, other: &Cyclo) -> Result<Cyclo, FieldError> {
        let (a, b) = self.align(other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        Ok(Cyclo { ctx: a.ctx, coeffs })
    }

    pub fn try_mul(&self, other: &Cyclo) -> Result<Cyclo, FieldError> {
        if self.degree_one() || other.degree_one() {
            let (scalar, vector) = if self.degree_one() {
                (&self.coeffs[0], other)
            } else {
                (&other.coeffs[0], self)
            };
            let ctx = if self.degree_one() && other.degree_one() {
                if self.order() >= other.order() {
                    self.ctx.clone()
                } else {
                    other.ctx.clone()
                }
            } else {
                vector.ctx.clone()
            };
            let coeffs = vector.coeffs.iter().map(|c| c * scalar).collect();
            return Ok(Cyclo { ctx, coeffs });
        }
        let (a, b) = self.align(other)?;
        let n = a.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let coeffs = a.ctx.reduce(prod);
        Ok(Cyclo { ctx: a.ctx, coeffs })
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Phi_d`.
    pub fn inverse(&self) -> Result<Cyclo, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.is_rational() {
            let mut coeffs = vec![BigRational::zero(); self.coeffs.len()];
            coeffs[0] = self.coeffs[0].recip();
            return Ok(Cyclo {
                ctx: self.ctx.clone(),
                coeffs,
            });
        }
        let (g, s) = poly_ext_gcd(&self.ctx.full_modulus(), &trim(self.coeffs.clone()));
        // Phi_d is irreducible, so the gcd is a nonzero constant
        debug_assert_eq!(g.len(), 1);
        let scale = g[0].recip();
        let inv: Vec<BigRational> = s.into_iter().map(|c| c * &scale).collect();
        Ok(Cyclo::new(self.order(), inv))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Image under the embedding `zeta_d -> exp(2 pi i / d)`.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        use num_traits::ToPrimitive;
        let d = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let v = c.to_f64().unwrap_or(f64::NAN);
                num_complex::Complex64::from_polar(v, 2.0 * std::f64::consts::PI * k as f64 / d)
            })
            .sum()
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = trim(den.to_vec());
    let mut rem = trim(num.to_vec());
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        return (vec![BigRational::zero()], rem);
    }
    let lead = den[dd].recip();
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] * &lead;
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    rem.truncate(dd.max(1));
    (trim(quot), trim(rem))
}

fn poly_sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    let need = q.len() + b.len() - 1;
    if out.len() < need {
        out.resize(need, BigRational::zero());
    }
    for (i, x) in q.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    trim(out)
}

fn is_zero_poly(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

// Returns (g, s) with s * a = g (mod m).
fn poly_ext_gcd(m: &[BigRational], a: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
    let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        match self.align(other) {
            Ok((a, b)) => a.coeffs == b.coeffs,
            Err(_) => false,
        }
    }
}

impl Eq for Cyclo {}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]({})", self.order(), self)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => {}
                (_, false) => write!(f, "{abs}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "z{}", self.order())?,
                _ => write!(f, "z{}^{k}", self.order())?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                self.$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<'a> $trait<&'a Cyclo> for &'a Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &'a Cyclo) -> Cyclo {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            ctx: self.ctx,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Zero for Cyclo {
    fn zero() -> Self {
        Cyclo::from_integer(0)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for Cyclo {
    fn one() -> Self {
        Cyclo::from_integer(1)
    }
}
