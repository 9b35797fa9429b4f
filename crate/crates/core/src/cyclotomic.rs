//! Exact arithmetic in `Q(A)/(Phi_n(A))` with `n = 2k + 4`, plus
//! high-precision complex embeddings.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TqftError};

pub const DEFAULT_DIGITS: usize = 50;

const RM: RoundingMode = RoundingMode::ToEven;

/// The quotient field `C_n = Q(A)/(Phi_n(A))` for `n = 2k + 4`, `k` odd.
#[derive(Debug)]
pub struct CyclotomicField {
    level: u32,
    order: u32,
    /// Ascending coefficients of the monic modulus, length `degree + 1`.
    modulus: Vec<BigInt>,
    /// `A^j mod Phi_n` for `0 <= j < order`.
    powers: Vec<Vec<BigInt>>,
}

pub type Field = Arc<CyclotomicField>;

/// Builds `C_{2k+4}`. Rejects even levels and levels below 3.
pub fn make_field(k: i64) -> Result<Field> {
    if k < 3 || k % 2 == 0 || k > 1_000 {
        return Err(TqftError::InvalidLevel(k));
    }
    Ok(Arc::new(CyclotomicField::with_order(2 * k as u32 + 4)))
}

impl CyclotomicField {
    fn with_order(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let d = modulus.len() - 1;
        debug_assert_eq!(d as u64, totient(order as u64));

        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); d];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by A and reduce the overflow coefficient
            let top = cur[d - 1].clone();
            for j in (1..d).rev() {
                cur[j] = cur[j - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for j in 0..d {
                    cur[j] -= &top * &modulus[j];
                }
            }
        }
        debug_assert!(cur[0].is_one() && cur[1..].iter().all(Zero::is_zero));

        let field = CyclotomicField {
            level: (order - 4) / 2,
            order,
            modulus,
            powers,
        };
        debug_assert!(field.roots_are_primitive());
        field
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `n = 2k + 4`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `phi(n)`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Evaluates the modulus at each `e^{2 pi i t/n}` with `gcd(t, n) = 1`
    /// in double precision.
    fn roots_are_primitive(&self) -> bool {
        let n = self.order as u64;
        (1..n).filter(|t| t.gcd(&n) == 1).all(|t| {
            let theta = 2.0 * std::f64::consts::PI * t as f64 / n as f64;
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for c in self.modulus.iter().rev() {
                let c = c.to_f64().unwrap_or(f64::NAN);
                let nre = re * theta.cos() - im * theta.sin() + c;
                im = re * theta.sin() + im * theta.cos();
                re = nre;
            }
            re.hypot(im) < 1e-8
        })
    }

    /// Text form of the modulus, e.g. `A^4 - A^3 + A^2 - A + 1`.
    pub fn modulus_string(&self) -> String {
        let den = BigInt::one();
        format_poly(&self.modulus, &den)
    }

    pub fn embeddings(self: &Arc<Self>, digits: usize) -> Embeddings {
        Embeddings::new(self.clone(), digits)
    }

    fn reduce_product(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree();
        let mut wide = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    wide[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigInt> = wide.drain(..d).collect();
        for (off, c) in wide.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.powers[d + off]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        out
    }
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub(crate) fn totient(n: u64) -> u64 {
    (1..=n).filter(|t| t.gcd(&n) == 1).count() as u64
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic divisor; panics on a nonzero remainder.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    quot
}

fn x_pow_minus_one(d: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); d as usize + 1];
    p[0] = BigInt::from(-1);
    p[d as usize] = BigInt::one();
    p
}

/// `Phi_n(x) = prod_{d | n} (x^d - 1)^{mu(n/d)}`, ascending coefficients.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let n = n as u64;
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in (1..=n).filter(|d| n % d == 0) {
        match mobius(n / d) {
            1 => num = poly_mul(&num, &x_pow_minus_one(d)),
            -1 => den = poly_mul(&den, &x_pow_minus_one(d)),
            _ => {}
        }
    }
    poly_div_exact(&num, &den)
}

/// An element of `C_n`, kept as an integer numerator polynomial over a
/// positive common denominator, reduced to lowest terms.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

fn normalize(num: &mut [BigInt], den: &mut BigInt) {
    if num.iter().all(Zero::is_zero) {
        *den = BigInt::one();
        return;
    }
    if den.is_negative() {
        *den = -&*den;
        for c in num.iter_mut() {
            *c = -&*c;
        }
    }
    if den.is_one() {
        return;
    }
    let mut g = den.clone();
    for c in num.iter() {
        if g.is_one() {
            return;
        }
        if !c.is_zero() {
            g = g.gcd(c);
        }
    }
    if !g.is_one() {
        for c in num.iter_mut() {
            *c = &*c / &g;
        }
        *den = &*den / &g;
    }
}

impl FieldElement {
    fn from_parts(field: Field, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        normalize(&mut num, &mut den);
        FieldElement { field, num, den }
    }

    pub fn zero(field: &Field) -> Self {
        FieldElement {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Field, c: i64) -> Self {
        let mut e = Self::zero(field);
        e.num[0] = BigInt::from(c);
        e
    }

    pub fn from_rational(field: &Field, q: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = q.numer().clone();
        Self::from_parts(field.clone(), num, q.denom().clone())
    }

    /// `A^m` for any integer `m`.
    pub fn a_pow(field: &Field, m: i64) -> Self {
        let idx = m.rem_euclid(field.order as i64) as usize;
        FieldElement {
            field: field.clone(),
            num: field.powers[idx].clone(),
            den: BigInt::one(),
        }
    }

    /// Builds an element from rational coefficients of `A^0, A^1, ...`;
    /// any length is accepted and reduced.
    pub fn from_coeffs(field: &Field, coeffs: &[BigRational]) -> Self {
        let mut acc = Self::zero(field);
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += &(&Self::a_pow(field, j as i64) * &Self::from_rational(field, c));
            }
        }
        acc
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field.order == other.field.order
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(TqftError::FieldMismatch {
                left: self.field.order,
                right: other.field.order,
            })
        }
    }

    /// Rational coefficients of `A^0 .. A^{d-1}`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn numerator(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// `Some(m)` with `0 <= m < n` when the element equals `A^m`.
    pub fn as_a_power(&self) -> Option<u32> {
        if !self.den.is_one() {
            return None;
        }
        self.field
            .powers
            .iter()
            .position(|p| p == &self.num)
            .map(|m| m as u32)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (num, den) = if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            (num, self.den.clone())
        } else {
            let g = self.den.gcd(&other.den);
            let (sa, sb) = (&other.den / &g, &self.den / &g);
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| a * &sa + b * &sb)
                .collect();
            (num, &self.den * &sa)
        };
        Ok(Self::from_parts(self.field.clone(), num, den))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let num = self.field.reduce_product(&self.num, &other.num);
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm over `Q[x]`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(TqftError::DivisionByZero);
        }
        let to_q = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        let mut r0 = to_q(&self.field.modulus);
        let mut r1 = trim(to_q(&self.num));
        let mut s0: Vec<BigRational> = vec![];
        let mut s1 = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, r) = qpoly_divmod(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is the nonzero constant gcd; self * s1 = r1 (mod Phi)
        let c = r1[0].clone();
        let coeffs: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        // self * s1 = r1 mod Phi, and scaling by the constant keeps it exact;
        // the original numerator was scaled by den, undo that
        let mut out = Self::from_coeffs(&self.field, &coeffs);
        out = &out * &Self::from_rational(&self.field, &BigRational::from_integer(self.den.clone()));
        Ok(out)
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// The image under `A -> A^{-1}` (complex conjugation in every embedding).
    pub fn conjugate(&self) -> Self {
        let n = self.field.order as usize;
        let mut num = vec![BigInt::zero(); self.num.len()];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in num.iter_mut().zip(&self.field.powers[(n - j) % n]) {
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        Self::from_parts(self.field.clone(), num, self.den.clone())
    }

    /// Polynomial text without the `Mod(..)` wrapper.
    pub fn poly_string(&self) -> String {
        format_poly(&self.num, &self.den)
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            n: self.field.order,
            coeffs: self
                .coeffs()
                .into_iter()
                .map(|q| (q.numer().to_string(), q.denom().to_string()))
                .collect(),
        }
    }

    pub fn from_json(field: &Field, json: &ElementJson) -> Result<Self> {
        if json.n != field.order {
            return Err(TqftError::FieldMismatch {
                left: field.order,
                right: json.n,
            });
        }
        let coeffs = json
            .coeffs
            .iter()
            .map(|(n, d)| {
                let n: BigInt = n.parse().map_err(|_| TqftError::Parse(format!("bad integer {n}")))?;
                let d: BigInt = d.parse().map_err(|_| TqftError::Parse(format!("bad integer {d}")))?;
                if d.is_zero() {
                    return Err(TqftError::Parse("zero denominator".into()));
                }
                Ok(BigRational::new(n, d))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(field, &coeffs))
    }

    /// Parses `Mod(poly, modulus)` or a bare polynomial in `A`.
    pub fn parse(field: &Field, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("Mod(").and_then(|r| r.strip_suffix(')')) {
            let (p, m) = split_top_level_comma(inner)
                .ok_or_else(|| TqftError::Parse(format!("expected Mod(poly, modulus): {s}")))?;
            check_modulus_text(field, m)?;
            return parse_poly(field, p);
        }
        parse_poly(field, s)
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect()
}

fn qpoly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![BigRational::zero()], rem);
    }
    let lead = b.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + b.len() - 1] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    rem.truncate(b.len() - 1);
    if rem.is_empty() {
        rem.push(BigRational::zero());
    }
    (quot, trim(rem))
}

/// Sums of products with a lazily combined denominator; normalizes once in
/// [`Accumulator::finish`].
pub struct Accumulator {
    field: Field,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Accumulator {
    pub fn new(field: &Field) -> Self {
        Accumulator {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    fn absorb(&mut self, p: Vec<BigInt>, d: BigInt) {
        if d == self.den {
            for (o, x) in self.num.iter_mut().zip(p) {
                *o += x;
            }
        } else {
            let g = self.den.gcd(&d);
            let sa = &d / &g;
            let sb = &self.den / &g;
            for (o, x) in self.num.iter_mut().zip(p) {
                *o = &*o * &sa + x * &sb;
            }
            self.den = &self.den * &sa;
        }
    }

    pub fn add(&mut self, x: &FieldElement) {
        if !x.is_zero() {
            self.absorb(x.num.clone(), x.den.clone());
        }
    }

    pub fn add_product(&mut self, a: &FieldElement, b: &FieldElement) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = self.field.reduce_product(&a.num, &b.num);
        let d = if a.den.is_one() {
            b.den.clone()
        } else if b.den.is_one() {
            a.den.clone()
        } else {
            &a.den * &b.den
        };
        self.absorb(p, d);
    }

    pub fn finish(self) -> FieldElement {
        FieldElement::from_parts(self.field, self.num, self.den)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("operands from different fields")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$try(&rhs).expect("operands from different fields")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = &*self - rhs;
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

fn format_poly(num: &[BigInt], den: &BigInt) -> String {
    let mut out = String::new();
    for (j, c) in num.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let q = BigRational::new(c.clone(), den.clone());
        let neg = q.is_negative();
        let mag = q.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if mag.is_integer() {
            mag.numer().to_string()
        } else if j == 0 {
            format!("{}/{}", mag.numer(), mag.denom())
        } else {
            format!("({}/{})", mag.numer(), mag.denom())
        };
        match j {
            0 => out.push_str(&coef),
            _ => {
                if !mag.is_one() {
                    out.push_str(&coef);
                }
                out.push('A');
                if j > 1 {
                    out.push('^');
                    out.push_str(&j.to_string());
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mod({}, {})", self.poly_string(), self.field.modulus_string())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Wire form: `{"n": 14, "coeffs": [["3", "7"], ...]}`, ascending powers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub n: u32,
    pub coeffs: Vec<(String, String)>,
}

fn split_top_level_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn check_modulus_text(field: &Field, m: &str) -> Result<()> {
    let m = m.trim();
    let shorthand = [format!("Phi_{}", field.order), format!("Φ_{}", field.order)];
    if shorthand.iter().any(|s| s == m || format!("{s}(A)") == m) {
        return Ok(());
    }
    let terms = parse_terms(m)?;
    let mut coeffs = vec![BigRational::zero(); field.degree() + 1];
    for (c, e) in terms {
        if e < 0 || e as usize > field.degree() {
            return Err(TqftError::Parse(format!("modulus {m} does not match {}", field.modulus_string())));
        }
        coeffs[e as usize] += c;
    }
    let expected: Vec<BigRational> = field
        .modulus
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    if coeffs == expected {
        Ok(())
    } else {
        Err(TqftError::Parse(format!("modulus {m} does not match {}", field.modulus_string())))
    }
}

fn parse_poly(field: &Field, s: &str) -> Result<FieldElement> {
    let mut acc = FieldElement::zero(field);
    for (c, e) in parse_terms(s)? {
        acc += &(&FieldElement::a_pow(field, e) * &FieldElement::from_rational(field, &c));
    }
    Ok(acc)
}

/// Terms `c * A^e` of a sum such as `-(3/7)A^5 + 2*A^-1 - 4`.
fn parse_terms(s: &str) -> Result<Vec<(BigRational, i64)>> {
    let err = |msg: &str| TqftError::Parse(format!("{msg} in {s:?}"));
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(err("empty polynomial"));
    }
    let mut pos = 0;
    let mut terms = Vec::new();

    let read_int = |pos: &mut usize| -> Option<BigInt> {
        let start = *pos;
        while *pos < chars.len() && chars[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return None;
        }
        chars[start..*pos].iter().collect::<String>().parse().ok()
    };

    while pos < chars.len() {
        let mut sign = BigInt::one();
        while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-' || chars[pos] == '−') {
            if chars[pos] != '+' {
                sign = -sign;
            }
            pos += 1;
        }
        let mut coef: Option<BigRational> = None;
        if pos < chars.len() && chars[pos] == '(' {
            pos += 1;
            let mut neg = false;
            if pos < chars.len() && (chars[pos] == '-' || chars[pos] == '−') {
                neg = true;
                pos += 1;
            }
            let n = read_int(&mut pos).ok_or_else(|| err("expected integer"))?;
            let d = if pos < chars.len() && chars[pos] == '/' {
                pos += 1;
                read_int(&mut pos).ok_or_else(|| err("expected denominator"))?
            } else {
                BigInt::one()
            };
            if pos >= chars.len() || chars[pos] != ')' {
                return Err(err("expected ')'"));
            }
            pos += 1;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            let q = BigRational::new(n, d);
            coef = Some(if neg { -q } else { q });
        } else if let Some(n) = read_int(&mut pos) {
            let d = if pos < chars.len() && chars[pos] == '/' {
                pos += 1;
                read_int(&mut pos).ok_or_else(|| err("expected denominator"))?
            } else {
                BigInt::one()
            };
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            coef = Some(BigRational::new(n, d));
        }
        if pos < chars.len() && chars[pos] == '*' {
            if coef.is_none() {
                return Err(err("dangling '*'"));
            }
            pos += 1;
        }
        let mut exp = 0i64;
        if pos < chars.len() && chars[pos] == 'A' {
            pos += 1;
            exp = 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let mut neg = false;
                if pos < chars.len() && (chars[pos] == '-' || chars[pos] == '−') {
                    neg = true;
                    pos += 1;
                }
                let e = read_int(&mut pos)
                    .and_then(|e| e.to_i64())
                    .ok_or_else(|| err("expected exponent"))?;
                exp = if neg { -e } else { e };
            }
        } else if coef.is_none() {
            return Err(err("expected a term"));
        }
        let c = coef.unwrap_or_else(BigRational::one) * BigRational::from_integer(sign);
        terms.push((c, exp));
        if pos < chars.len() && !(chars[pos] == '+' || chars[pos] == '-' || chars[pos] == '−') {
            return Err(err("unexpected character"));
        }
    }
    Ok(terms)
}

/// A complex number at arbitrary binary precision.
#[derive(Debug, Clone)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn abs(&self, bits: usize) -> BigFloat {
        let r2 = self
            .re
            .mul(&self.re, bits, RM)
            .add(&self.im.mul(&self.im, bits, RM), bits, RM);
        r2.sqrt(bits, RM)
    }
}

/// The complex embeddings `A -> e^{2 pi i t/n}`, `gcd(t, n) = 1`, in
/// increasing `t`.
pub struct Embeddings {
    field: Field,
    digits: usize,
    bits: usize,
    exponents: Vec<u32>,
    roots: Vec<Complex>,
}

pub(crate) fn bits_for_digits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64
}

pub(crate) fn bigint_to_float(x: &BigInt, bits: usize) -> BigFloat {
    match x.to_i128() {
        Some(v) => BigFloat::from_i128(v, bits),
        None => {
            let mut cc = Consts::new().expect("constants cache");
            BigFloat::parse(&x.to_string(), Radix::Dec, bits, RM, &mut cc)
        }
    }
}

impl Embeddings {
    pub fn new(field: Field, digits: usize) -> Self {
        let bits = bits_for_digits(digits);
        let mut cc = Consts::new().expect("constants cache");
        let n = field.order as u64;
        let two_pi_over_n = cc
            .pi(bits, RM)
            .mul(&BigFloat::from_u8(2, bits), bits, RM)
            .div(&BigFloat::from_u64(n, bits), bits, RM);
        let exponents: Vec<u32> = (1..n).filter(|t| t.gcd(&n) == 1).map(|t| t as u32).collect();
        let roots = exponents
            .iter()
            .map(|&t| {
                let theta = two_pi_over_n.mul(&BigFloat::from_u32(t, bits), bits, RM);
                Complex {
                    re: theta.cos(bits, RM, &mut cc),
                    im: theta.sin(bits, RM, &mut cc),
                }
            })
            .collect();
        Embeddings {
            field,
            digits,
            bits,
            exponents,
            roots,
        }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// `t` such that embedding `idx` sends `A` to `e^{2 pi i t/n}`.
    pub fn exponent(&self, idx: usize) -> u32 {
        self.exponents[idx]
    }

    pub fn root(&self, idx: usize) -> &Complex {
        &self.roots[idx]
    }

    fn horner(&self, coeffs: &[BigInt], idx: usize) -> Complex {
        let z = &self.roots[idx];
        let p = self.bits;
        let mut re = BigFloat::from_u8(0, p);
        let mut im = BigFloat::from_u8(0, p);
        for c in coeffs.iter().rev() {
            let nre = re.mul(&z.re, p, RM).sub(&im.mul(&z.im, p, RM), p, RM);
            let nim = re.mul(&z.im, p, RM).add(&im.mul(&z.re, p, RM), p, RM);
            re = nre.add(&bigint_to_float(c, p), p, RM);
            im = nim;
        }
        Complex { re, im }
    }

    /// `sigma_idx(x)`.
    pub fn eval(&self, x: &FieldElement, idx: usize) -> Complex {
        assert!(x.field.order == self.field.order, "element from another field");
        let v = self.horner(&x.num, idx);
        if x.den.is_one() {
            return v;
        }
        let d = bigint_to_float(&x.den, self.bits);
        Complex {
            re: v.re.div(&d, self.bits, RM),
            im: v.im.div(&d, self.bits, RM),
        }
    }

    /// `|Phi_n(sigma_idx(A))|`, which should vanish to working precision.
    pub fn modulus_residual(&self, idx: usize) -> BigFloat {
        self.horner(&self.field.modulus, idx).abs(self.bits)
    }
}

/// A high-precision nonnegative-or-signed real with fixed-point formatting.
#[derive(Debug, Clone)]
pub struct Real {
    value: BigFloat,
    digits: usize,
}

impl Real {
    pub fn new(value: BigFloat, digits: usize) -> Self {
        Real { value, digits }
    }

    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn parse(s: &str, digits: usize) -> Result<Self> {
        let bits = bits_for_digits(digits);
        let mut cc = Consts::new().expect("constants cache");
        let v = BigFloat::parse(s.trim(), Radix::Dec, bits, RM, &mut cc);
        if v.is_nan() {
            return Err(TqftError::Parse(format!("not a real number: {s}")));
        }
        Ok(Real { value: v, digits })
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    /// `|self - other|`.
    pub fn distance(&self, other: &Real) -> Real {
        let bits = bits_for_digits(self.digits.max(other.digits));
        Real {
            value: self.value.sub(&other.value, bits, RM).abs(),
            digits: self.digits.max(other.digits),
        }
    }

    /// True when `|self - other| < 10^{-exp10}`.
    pub fn close_to(&self, other: &Real, exp10: u32) -> bool {
        let tol = Real::parse(&format!("1e-{exp10}"), self.digits.max(other.digits)).expect("literal");
        self.distance(other).lt(&tol)
    }

    pub fn lt(&self, other: &Real) -> bool {
        matches!(self.value.cmp(&other.value), Some(c) if c < 0)
    }

    pub fn gt(&self, other: &Real) -> bool {
        matches!(self.value.cmp(&other.value), Some(c) if c > 0)
    }
}

impl fmt::Display for Real {
    /// Fixed notation with `digits` significant digits, trailing zeros removed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut cc = Consts::new().map_err(|_| fmt::Error)?;
        let sci = self.value.format(Radix::Dec, RM, &mut cc).map_err(|_| fmt::Error)?;
        f.write_str(&sci_to_fixed(&sci, self.digits))
    }
}

/// Converts `d.ddde±x` to rounded fixed notation.
fn sci_to_fixed(sci: &str, digits: usize) -> String {
    let (neg, body) = match sci.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, sci),
    };
    let (mant, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    if ds.iter().all(|&d| d == 0) {
        return "0".into();
    }
    let mut exp = exp;
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(digits);
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    // value = 0.d1d2... * 10^(exp+1)
    let point = exp + 1;
    let digits_str: String = ds.iter().map(|d| (d + b'0') as char).collect();
    let mut s = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits_str)
    } else if point as usize >= digits_str.len() {
        format!("{}{}", digits_str, "0".repeat(point as usize - digits_str.len()))
    } else {
        format!("{}.{}", &digits_str[..point as usize], &digits_str[point as usize..])
    };
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if neg && s != "0" {
        s.insert(0, '-');
    }
    s
}
