//! Genus one: words for `SL(2, Z)` in `L = [1,1;0,1]`, `U = [1,0;1,1]` and
//! their images on the genus-one module.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, TqftError};
use crate::graph::PlantedTree;
use crate::rep::{Generator, RepMatrix, Representation, TwistWord};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IntMatrix2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        IntMatrix2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn l() -> Self {
        Self::new(1, 1, 0, 1)
    }

    pub fn u() -> Self {
        Self::new(1, 0, 1, 1)
    }

    /// Parses `"a,b,c,d"` (row major), optionally bracketed as `[a,b;c,d]`.
    pub fn parse(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts = body
            .split([',', ';'])
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| TqftError::Parse(format!("not an integer matrix: {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match <[BigInt; 4]>::try_from(parts) {
            Ok([a, b, c, d]) => Ok(IntMatrix2 { a, b, c, d }),
            Err(_) => Err(TqftError::Parse(format!("expected four entries: {s:?}"))),
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// `L^q` or `U^q` for any integer `q`.
    pub fn letter_pow(letter: Letter, q: &BigInt) -> IntMatrix2 {
        match letter {
            Letter::L => IntMatrix2::new(BigInt::one(), q.clone(), BigInt::zero(), BigInt::one()),
            Letter::U => IntMatrix2::new(BigInt::one(), BigInt::zero(), q.clone(), BigInt::one()),
        }
    }

    pub fn max_bits(&self) -> u64 {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{};{},{}]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    L,
    U,
}

/// A word `X_1^{q_1} X_2^{q_2} ...` in `L` and `U`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlWord(pub Vec<(Letter, BigInt)>);

impl SlWord {
    fn push(&mut self, letter: Letter, q: BigInt) {
        if q.is_zero() {
            return;
        }
        if let Some((l, e)) = self.0.last_mut() {
            if *l == letter {
                *e += q;
                if e.is_zero() {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push((letter, q));
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of the letters in listed order.
    pub fn product(&self) -> IntMatrix2 {
        self.0
            .iter()
            .fold(IntMatrix2::identity(), |m, (l, q)| m.mul(&IntMatrix2::letter_pow(*l, q)))
    }

    /// One letter per factor, e.g. `L,L,L,U,U`.
    pub fn expanded(&self) -> Option<Vec<(Letter, i32)>> {
        let mut out = Vec::new();
        for (l, q) in &self.0 {
            let n = q.to_i64()?;
            if n.unsigned_abs() > 1_000_000 {
                return None;
            }
            for _ in 0..n.unsigned_abs() {
                out.push((*l, n.signum() as i32));
            }
        }
        Some(out)
    }
}

impl fmt::Display for SlWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(l, q)| {
                let l = match l {
                    Letter::L => "L",
                    Letter::U => "U",
                };
                if q.is_one() {
                    l.to_string()
                } else {
                    format!("{l}^{q}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Euclidean reduction of `m` to a word in `L`, `U`.
pub fn slw(m: &IntMatrix2) -> Result<SlWord> {
    let det = m.det();
    if !det.is_one() {
        return Err(TqftError::NotUnimodular(det.to_string()));
    }
    let mut word = SlWord::default();
    let mut cur = m.clone();
    while !cur.c.is_zero() {
        let (letter, q) = if cur.a.is_zero() {
            (Letter::L, -cur.c.clone())
        } else if cur.a.abs() > cur.c.abs() {
            (Letter::L, truncated_div(&cur.a, &cur.c))
        } else {
            (Letter::U, truncated_div(&cur.c, &cur.a))
        };
        cur = IntMatrix2::letter_pow(letter, &-&q).mul(&cur);
        word.push(letter, q);
    }
    // cur = [s, b; 0, s] with s = +-1
    if cur.a.is_one() {
        word.push(Letter::L, cur.b.clone());
    } else {
        // -I = (L U^-1)^3
        for _ in 0..3 {
            word.push(Letter::L, BigInt::one());
            word.push(Letter::U, -BigInt::one());
        }
        word.push(Letter::L, -cur.b.clone());
    }
    Ok(word)
}

fn truncated_div(x: &BigInt, y: &BigInt) -> BigInt {
    let (q, _) = x.div_rem(y);
    q
}

/// `L -> twist about the meridian of the loop`, `U -> inverse twist about the
/// face curve`.
pub fn to_twist_word(w: &SlWord) -> Result<TwistWord> {
    let mut out = TwistWord::new();
    for (l, q) in &w.0 {
        let q = q
            .to_i32()
            .ok_or_else(|| TqftError::Parse(format!("exponent {q} too large to evaluate")))?;
        match l {
            Letter::L => out.push(Generator::A(1), q),
            Letter::U => out.push(Generator::B(1), -q),
        }
    }
    Ok(out)
}

pub fn genus_one_representation(k: u32, i: u32) -> Result<Representation> {
    Representation::for_tree(&PlantedTree::new(vec![0]).expect("genus one tree"), k, i)
}

/// The image of `m` on the genus-one module `V_{k,i}`.
pub fn eval_sl(m: &IntMatrix2, k: u32, i: u32) -> Result<RepMatrix> {
    let rep = genus_one_representation(k, i)?;
    eval_sl_with(&rep, m)
}

pub fn eval_sl_with(rep: &Representation, m: &IntMatrix2) -> Result<RepMatrix> {
    rep.eval_word(&to_twist_word(&slw(m)?)?)
}
