//! Kauffman-bracket recoupling coefficients at `A` a primitive `2(k+2)`-th
//! root of unity.
//!
//! Normalizations: `Delta_n = (-1)^n [n+1]`, theta and tetrahedron values as
//! evaluated by the bracket on Jones-Wenzl projected graphs, and the
//! twist eigenvalue `tau_n = A^{-n(n+2)}` of a right-handed Dehn twist.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::cyclotomic::{Field, FieldElement};
use crate::error::{Result, TqftError};

/// True iff `a, b, c` are even, at most `k`, satisfy the triangle
/// inequalities and `a + b + c <= 2k`.
pub fn is_admissible_triple(a: u32, b: u32, c: u32, k: u32) -> bool {
    a % 2 == 0
        && b % 2 == 0
        && c % 2 == 0
        && a.max(b).max(c) <= k
        && a <= b + c
        && b <= a + c
        && c <= a + b
        && a + b + c <= 2 * k
}

/// Memoized recoupling data over one field.
pub struct Skein {
    field: Field,
    k: u32,
    qint: Vec<FieldElement>,
    qfact: Vec<FieldElement>,
    /// `1 / [n]!` for `n <= k + 1`; `[k+2] = 0` beyond that.
    qfact_inv: Vec<FieldElement>,
    theta_memo: Mutex<HashMap<[u32; 3], (FieldElement, FieldElement)>>,
    tet_memo: Mutex<HashMap<[u32; 6], FieldElement>>,
}

impl Skein {
    pub fn new(field: &Field) -> Self {
        let k = field.level();
        // factorials up to [2k+2]! cover every tetrahedron sum
        let top = 2 * k as usize + 3;
        let qint: Vec<FieldElement> = (0..=top).map(|n| quantum_integer(field, n as i64)).collect();
        let mut qfact = vec![FieldElement::one(field)];
        for n in 1..=top {
            let next = &qfact[n - 1] * &qint[n];
            qfact.push(next);
        }
        let last = k as usize + 1;
        let mut qfact_inv = vec![qfact[last].inv().expect("[k+1]! is a unit")];
        for n in (1..=last).rev() {
            let next = &qfact_inv[last - n] * &qint[n];
            qfact_inv.push(next);
        }
        qfact_inv.reverse();
        Skein {
            field: field.clone(),
            k,
            qint,
            qfact,
            qfact_inv,
            theta_memo: Mutex::new(HashMap::new()),
            tet_memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    /// Even colors `0, 2, ..., k - 1`.
    pub fn colors(&self) -> impl Iterator<Item = u32> {
        (0..=self.k).step_by(2)
    }

    /// `[n] = (A^{2n} - A^{-2n}) / (A^2 - A^{-2})`.
    pub fn qint(&self, n: u32) -> FieldElement {
        match self.qint.get(n as usize) {
            Some(v) => v.clone(),
            None => quantum_integer(&self.field, n as i64),
        }
    }

    pub fn qfact(&self, n: u32) -> FieldElement {
        match self.qfact.get(n as usize) {
            Some(v) => v.clone(),
            None => (1..=n).fold(FieldElement::one(&self.field), |acc, j| &acc * &self.qint(j)),
        }
    }

    /// `1 / [n]!`, defined for `n <= k + 1`.
    pub fn qfact_inv(&self, n: u32) -> Result<FieldElement> {
        self.qfact_inv.get(n as usize).cloned().ok_or(TqftError::DivisionByZero)
    }

    fn check_color(&self, n: u32) -> Result<()> {
        if n % 2 == 1 {
            return Err(TqftError::InvalidColor {
                color: n as i64,
                level: self.k,
                reason: "colors are even",
            });
        }
        if n > self.k {
            return Err(TqftError::InvalidColor {
                color: n as i64,
                level: self.k,
                reason: "color exceeds the level",
            });
        }
        Ok(())
    }

    fn check_triple(&self, a: u32, b: u32, c: u32) -> Result<()> {
        if is_admissible_triple(a, b, c, self.k) {
            Ok(())
        } else {
            Err(TqftError::Inadmissible(a, b, c))
        }
    }

    /// Loop value `Delta_n = (-1)^n [n+1]`.
    pub fn delta(&self, n: u32) -> Result<FieldElement> {
        self.check_color(n)?;
        let v = self.qint(n + 1);
        Ok(if n % 2 == 0 { v } else { -v })
    }

    /// Eigenvalue of a right-handed Dehn twist on a strand colored `n`.
    pub fn twist_coeff(&self, n: u32) -> Result<FieldElement> {
        self.check_color(n)?;
        Ok(FieldElement::a_pow(&self.field, -((n * (n + 2)) as i64)))
    }

    /// Value of a positive curl: `(-1)^n A^{n(n+2)}`.
    pub fn curl(&self, n: u32) -> Result<FieldElement> {
        self.check_color(n)?;
        let v = FieldElement::a_pow(&self.field, (n * (n + 2)) as i64);
        Ok(if n % 2 == 0 { v } else { -v })
    }

    pub fn theta(&self, a: u32, b: u32, c: u32) -> Result<FieldElement> {
        Ok(self.theta_pair(a, b, c)?.0)
    }

    /// `1 / theta(a, b, c)`, never zero for an admissible triple.
    pub fn theta_inv(&self, a: u32, b: u32, c: u32) -> Result<FieldElement> {
        Ok(self.theta_pair(a, b, c)?.1)
    }

    fn theta_pair(&self, a: u32, b: u32, c: u32) -> Result<(FieldElement, FieldElement)> {
        self.check_triple(a, b, c)?;
        let mut key = [a, b, c];
        key.sort_unstable();
        if let Some(v) = self.theta_memo.lock().expect("theta memo").get(&key) {
            return Ok(v.clone());
        }
        let i = (b + c - a) / 2;
        let j = (a + c - b) / 2;
        let l = (a + b - c) / 2;
        let num = [i + j + l + 1, i, j, l];
        let den = [i + j, j + l, i + l];
        let mut v = FieldElement::one(&self.field);
        let mut w = FieldElement::one(&self.field);
        for n in num {
            v = &v * &self.qfact(n);
            w = &w * &self.qfact_inv(n)?;
        }
        for n in den {
            v = &v * &self.qfact_inv(n)?;
            w = &w * &self.qfact(n);
        }
        if (i + j + l) % 2 == 1 {
            v = -v;
            w = -w;
        }
        self.theta_memo.lock().expect("theta memo").insert(key, (v.clone(), w.clone()));
        Ok((v, w))
    }

    /// Tetrahedron `[a b e; c d f]`: vertex triples `(a,d,e)`, `(b,c,e)`,
    /// `(a,b,f)`, `(c,d,f)`.
    pub fn tet(&self, a: u32, b: u32, e: u32, c: u32, d: u32, f: u32) -> Result<FieldElement> {
        for (x, y, z) in [(a, d, e), (b, c, e), (a, b, f), (c, d, f)] {
            self.check_triple(x, y, z)?;
        }
        let key = [a, b, e, c, d, f];
        if let Some(v) = self.tet_memo.lock().expect("tet memo").get(&key) {
            return Ok(v.clone());
        }
        let faces = [(a + d + e) / 2, (b + c + e) / 2, (a + b + f) / 2, (c + d + f) / 2];
        let quads = [(b + d + e + f) / 2, (a + c + e + f) / 2, (a + b + c + d) / 2];

        let mut inner = FieldElement::one(&self.field);
        for &x in &faces {
            for &y in &quads {
                inner = &inner * &self.qfact(y - x);
            }
        }
        for x in [a, b, c, d, e, f] {
            inner = &inner * &self.qfact_inv(x)?;
        }
        let lo = *faces.iter().max().expect("four faces");
        let hi = *quads.iter().min().expect("three quads");
        let mut sum = FieldElement::zero(&self.field);
        for s in lo..=hi {
            let mut term = self.qfact(s + 1);
            for &x in &faces {
                term = &term * &self.qfact_inv(s - x)?;
            }
            for &y in &quads {
                term = &term * &self.qfact_inv(y - s)?;
            }
            if s % 2 == 1 {
                term = -term;
            }
            sum += &term;
        }
        let v = &inner * &sum;
        self.tet_memo.lock().expect("tet memo").insert(key, v.clone());
        Ok(v)
    }

    /// Recoupling coefficient `{a b i; c d j}`: the coefficient of the
    /// `i`-channel in the fusion of the `j`-channel.
    pub fn sixj(&self, a: u32, b: u32, i: u32, c: u32, d: u32, j: u32) -> Result<FieldElement> {
        let t = self.tet(a, b, i, c, d, j)?;
        let num = &t * &self.delta(i)?;
        Ok(&num * &(&self.theta_inv(a, d, i)? * &self.theta_inv(b, c, i)?))
    }

    /// Kirby color `sum_n Delta_n e_n` over the even colors.
    pub fn omega(&self) -> Vec<(u32, FieldElement)> {
        self.colors()
            .map(|n| (n, self.delta(n).expect("even color in range")))
            .collect()
    }

    /// Zero-framed Hopf link colored `a`, `b`: `(-1)^{a+b} [(a+1)(b+1)]`.
    pub fn hopf(&self, a: u32, b: u32) -> Result<FieldElement> {
        self.check_color(a)?;
        self.check_color(b)?;
        let v = quantum_integer(&self.field, ((a + 1) * (b + 1)) as i64);
        Ok(if (a + b) % 2 == 0 { v } else { -v })
    }

    /// Scalar by which an omega-colored meridian acts on a strand colored `n`.
    pub fn encircling(&self, n: u32) -> Result<FieldElement> {
        let mut acc = FieldElement::zero(&self.field);
        for (c, dc) in self.omega() {
            acc += &(&dc * &self.hopf(c, n)?);
        }
        acc.try_div(&self.delta(n)?)
    }

    /// `1 / sum_c Delta_c^2 mu_c^{sign}`, the normalization of a twist
    /// realized by a `sign`-framed omega loop.
    pub fn twist_normalizer(&self, sign: i32) -> Result<FieldElement> {
        let mut acc = FieldElement::zero(&self.field);
        for (c, dc) in self.omega() {
            let mu = if sign > 0 { self.curl(c)? } else { self.curl(c)?.conjugate() };
            acc += &(&(&dc * &dc) * &mu);
        }
        acc.inv()
    }
}

/// `[n] = sum_{j<n} A^{2(n-1) - 4j}` (negative `n` gives `-[-n]`).
pub fn quantum_integer(field: &Field, n: i64) -> FieldElement {
    if n < 0 {
        return -quantum_integer(field, -n);
    }
    let mut acc = FieldElement::zero(field);
    for j in 0..n {
        acc += &FieldElement::a_pow(field, 2 * (n - 1) - 4 * j);
    }
    acc
}
