//! Dehn twist generators acting on the admissible basis, and evaluation of
//! twist words.
//!
//! Matrices are stored row-wise with the row indexed by the source coloring:
//! entry `(x, z)` is the coefficient of `e_z` in the image of `e_x`. A word
//! `g_1 g_2 ... g_m` evaluates to the product `M(g_1) M(g_2) ... M(g_m)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{Accumulator, ElementJson, Field, FieldElement};
use crate::error::{Result, TqftError};
use crate::graph::{admissible_colorings, build_graph, AdmissibleBasis, PlantedTree};
use crate::skein::{is_admissible_triple, Skein};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// Twist about the meridian disk of an edge.
    A(usize),
    /// Twist about the face curve of a handle.
    B(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::A(e) => write!(f, "A{e}"),
            Generator::B(r) => write!(f, "B{r}"),
        }
    }
}

/// A generator raised to a nonzero power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub generator: Generator,
    pub exponent: i32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistWord(pub Vec<Syllable>);

impl TwistWord {
    pub fn new() -> Self {
        TwistWord(Vec::new())
    }

    /// Appends `g^e`, merging with a trailing syllable on the same generator.
    pub fn push(&mut self, generator: Generator, exponent: i32) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.generator == generator {
                last.exponent += exponent;
                if last.exponent == 0 {
                    self.0.pop();
                }
                return;
            }
        }
        self.0.push(Syllable { generator, exponent });
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord(
            self.0
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator,
                    exponent: -s.exponent,
                })
                .collect(),
        )
    }

    /// Parses whitespace separated syllables such as `A1^3 B1^-2 A2`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut w = TwistWord::new();
        for tok in s.split_whitespace() {
            let bad = || TqftError::Parse(format!("bad syllable {tok:?}"));
            let (head, exp) = match tok.split_once('^') {
                Some((h, e)) => (h, e.parse::<i32>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let id: usize = head.get(1..).ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let generator = match head.chars().next() {
                Some('A') => Generator::A(id),
                Some('B') => Generator::B(id),
                _ => return Err(bad()),
            };
            w.push(generator, exp);
        }
        Ok(w)
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|s| match s.exponent {
                1 => s.generator.to_string(),
                e => format!("{}^{e}", s.generator),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Row-sparse square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub rows: Vec<Vec<(usize, FieldElement)>>,
}

impl SparseMatrix {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

/// A generator matrix in the form cheapest to apply.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorMatrix {
    Diagonal(Vec<FieldElement>),
    Sparse(SparseMatrix),
}

impl GeneratorMatrix {
    pub fn dim(&self) -> usize {
        match self {
            GeneratorMatrix::Diagonal(d) => d.len(),
            GeneratorMatrix::Sparse(s) => s.dim(),
        }
    }

    /// `v * G` for a row vector `v`.
    pub fn apply_row(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        match self {
            GeneratorMatrix::Diagonal(d) => v.iter().zip(d).map(|(x, y)| x * y).collect(),
            GeneratorMatrix::Sparse(s) => {
                let field = v[0].field().clone();
                let mut acc: Vec<Option<Accumulator>> = (0..v.len()).map(|_| None).collect();
                for (x, row) in v.iter().zip(&s.rows) {
                    if x.is_zero() {
                        continue;
                    }
                    for (col, g) in row {
                        acc[*col].get_or_insert_with(|| Accumulator::new(&field)).add_product(x, g);
                    }
                }
                acc.into_iter()
                    .map(|a| a.map_or_else(|| FieldElement::zero(&field), Accumulator::finish))
                    .collect()
            }
        }
    }

    pub fn to_dense(&self, field: &Field) -> Vec<Vec<FieldElement>> {
        let n = self.dim();
        let mut out = vec![vec![FieldElement::zero(field); n]; n];
        match self {
            GeneratorMatrix::Diagonal(d) => {
                for (j, x) in d.iter().enumerate() {
                    out[j][j] = x.clone();
                }
            }
            GeneratorMatrix::Sparse(s) => {
                for (i, row) in s.rows.iter().enumerate() {
                    for (j, x) in row {
                        out[i][*j] = x.clone();
                    }
                }
            }
        }
        out
    }
}

/// Dense square matrix over the field, indexed by an admissible basis.
#[derive(Clone)]
pub struct RepMatrix {
    basis: Arc<AdmissibleBasis>,
    field: Field,
    rows: Vec<Vec<FieldElement>>,
}

impl RepMatrix {
    pub fn from_rows(basis: &Arc<AdmissibleBasis>, field: &Field, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = basis.len();
        if rows.len() != n {
            return Err(TqftError::DimensionMismatch(rows.len(), n));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(TqftError::DimensionMismatch(bad.len(), n));
        }
        Ok(RepMatrix {
            basis: basis.clone(),
            field: field.clone(),
            rows,
        })
    }

    pub fn identity(basis: &Arc<AdmissibleBasis>, field: &Field) -> Self {
        Self::scalar(basis, &FieldElement::one(field))
    }

    pub fn scalar(basis: &Arc<AdmissibleBasis>, c: &FieldElement) -> Self {
        let n = basis.len();
        let field = c.field().clone();
        let mut rows = vec![vec![FieldElement::zero(&field); n]; n];
        for (j, row) in rows.iter_mut().enumerate() {
            row[j] = c.clone();
        }
        RepMatrix {
            basis: basis.clone(),
            field,
            rows,
        }
    }

    pub fn basis(&self) -> &Arc<AdmissibleBasis> {
        &self.basis
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.rows[i][j]
    }

    pub fn trace(&self) -> FieldElement {
        let mut acc = Accumulator::new(&self.field);
        for (j, row) in self.rows.iter().enumerate() {
            acc.add(&row[j]);
        }
        acc.finish()
    }

    pub fn mul(&self, other: &RepMatrix) -> Result<RepMatrix> {
        if self.dim() != other.dim() {
            return Err(TqftError::DimensionMismatch(self.dim(), other.dim()));
        }
        let n = self.dim();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..n)
                    .map(|j| {
                        let mut acc = Accumulator::new(&self.field);
                        for (x, orow) in r.iter().zip(&other.rows) {
                            acc.add_product(x, &orow[j]);
                        }
                        acc.finish()
                    })
                    .collect()
            })
            .collect();
        Ok(RepMatrix {
            basis: self.basis.clone(),
            field: self.field.clone(),
            rows,
        })
    }

    pub fn mul_generator(&self, g: &GeneratorMatrix) -> RepMatrix {
        RepMatrix {
            basis: self.basis.clone(),
            field: self.field.clone(),
            rows: self.rows.iter().map(|r| g.apply_row(r)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> RepMatrix {
        RepMatrix {
            basis: self.basis.clone(),
            field: self.field.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<RepMatrix> {
        let mut acc = RepMatrix::identity(&self.basis, &self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson(
            self.rows
                .iter()
                .map(|r| r.iter().map(FieldElement::to_json).collect())
                .collect(),
        )
    }

    pub fn from_json(basis: &Arc<AdmissibleBasis>, field: &Field, json: &MatrixJson) -> Result<Self> {
        let rows = json
            .0
            .iter()
            .map(|r| r.iter().map(|x| FieldElement::from_json(field, x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(basis, field, rows)
    }

    /// One row per line, entries in `Mod(..)` form separated by `; `.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            out.push('[');
            out.push_str(&parts.join("; "));
            out.push_str("]\n");
        }
        out
    }
}

impl PartialEq for RepMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl fmt::Debug for RepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// JSON array of rows of field elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson(pub Vec<Vec<ElementJson>>);

/// The representation of one basis: generator matrices and word evaluation.
pub struct Representation {
    skein: Skein,
    basis: Arc<AdmissibleBasis>,
}

impl Representation {
    pub fn new(field: &Field, basis: Arc<AdmissibleBasis>) -> Result<Self> {
        if basis.level() != field.level() {
            return Err(TqftError::InvalidLevel(basis.level() as i64));
        }
        Ok(Representation {
            skein: Skein::new(field),
            basis,
        })
    }

    /// Builds field, graph and basis for `(tree, k, i)`.
    pub fn for_tree(tree: &PlantedTree, k: u32, i: u32) -> Result<Self> {
        let field = crate::cyclotomic::make_field(k as i64)?;
        let graph = Arc::new(build_graph(tree));
        let basis = Arc::new(admissible_colorings(&graph, k, i)?);
        Self::new(&field, basis)
    }

    pub fn field(&self) -> &Field {
        self.skein.field()
    }

    pub fn skein(&self) -> &Skein {
        &self.skein
    }

    pub fn basis(&self) -> &Arc<AdmissibleBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Twist about the meridian of edge `e`: `diag(tau_{c(e)}^sign)`.
    pub fn twist_a(&self, e: usize, sign: i32) -> Result<GeneratorMatrix> {
        self.basis.graph().check_edge(e)?;
        let diag = self
            .basis
            .colorings()
            .iter()
            .map(|c| {
                let t = self.skein.twist_coeff(c[e] as u32)?;
                Ok(if sign >= 0 { t } else { t.conjugate() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorMatrix::Diagonal(diag))
    }

    /// Twist about the face curve of handle `r`, realized by a `sign`-framed
    /// omega loop fused into the cycle edges.
    pub fn twist_b(&self, r: usize, sign: i32) -> Result<GeneratorMatrix> {
        let handle = self.basis.graph().handle(r)?.clone();
        let sk = &self.skein;
        let k = sk.level();
        let field = sk.field().clone();
        let m = handle.cycle.len();
        let kappa = sk.twist_normalizer(sign)?;
        let weights = sk
            .omega()
            .into_iter()
            .map(|(c, dc)| {
                let mu = sk.curl(c)?;
                // mu is +-A^m, so its inverse is its conjugate
                let mu = if sign >= 0 { mu } else { mu.conjugate() };
                Ok((c, &dc * &mu))
            })
            .collect::<Result<Vec<_>>>()?;
        let colors: Vec<u32> = sk.colors().collect();

        let mut rows = Vec::with_capacity(self.basis.len());
        for src in self.basis.colorings() {
            let x: Vec<u32> = handle.cycle.iter().map(|&e| src[e] as u32).collect();
            let y: Vec<u32> = handle.legs.iter().map(|&e| src[e] as u32).collect();
            let mut row = Vec::new();
            let mut z = vec![0u32; m];
            for_each_cycle_coloring(&colors, &y, k, &mut z, 0, &mut |z| {
                let mut dst = src.clone();
                for (t, &e) in handle.cycle.iter().enumerate() {
                    dst[e] = z[t] as u8;
                }
                let Some(col) = self.basis.index_of(&dst) else {
                    return Ok(());
                };
                let mut acc = Accumulator::new(&field);
                for (c, w) in &weights {
                    if !(0..m).all(|t| is_admissible_triple(*c, x[t], z[t], k)) {
                        continue;
                    }
                    let mut term = w.clone();
                    for t in 0..m {
                        let t1 = (t + 1) % m;
                        let fuse = &sk.delta(z[t])? * &sk.theta_inv(*c, x[t], z[t])?;
                        let tet = sk.tet(z[t], z[t1], *c, x[t1], x[t], y[t])?;
                        let bubble = &tet * &sk.theta_inv(z[t], z[t1], y[t])?;
                        term = &term * &(&fuse * &bubble);
                    }
                    acc.add(&term);
                }
                let v = &acc.finish() * &kappa;
                if !v.is_zero() {
                    row.push((col, v));
                }
                Ok(())
            })?;
            row.sort_by_key(|(j, _)| *j);
            rows.push(row);
        }
        Ok(GeneratorMatrix::Sparse(SparseMatrix { rows }))
    }

    pub fn generator(&self, g: Generator, sign: i32) -> Result<GeneratorMatrix> {
        match g {
            Generator::A(e) => self.twist_a(e, sign),
            Generator::B(r) => self.twist_b(r, sign),
        }
    }

    pub fn twa(&self, e: usize) -> Result<RepMatrix> {
        self.dense(&self.twist_a(e, 1)?)
    }

    pub fn twb(&self, r: usize) -> Result<RepMatrix> {
        self.dense(&self.twist_b(r, 1)?)
    }

    pub fn dense(&self, g: &GeneratorMatrix) -> Result<RepMatrix> {
        RepMatrix::from_rows(&self.basis, self.field(), g.to_dense(self.field()))
    }

    pub fn check_word(&self, w: &TwistWord) -> Result<()> {
        for s in w.syllables() {
            match s.generator {
                Generator::A(e) => self.basis.graph().check_edge(e)?,
                Generator::B(r) => {
                    self.basis.graph().handle(r)?;
                }
            }
        }
        Ok(())
    }

    /// Generator matrices for each syllable, with `g^{-1}` for negative
    /// exponents; reused across syllables.
    pub fn word_factors(&self, w: &TwistWord) -> Result<Vec<(GeneratorMatrix, u32)>> {
        self.check_word(w)?;
        let mut cache: Vec<((Generator, i32), GeneratorMatrix)> = Vec::new();
        let mut out = Vec::with_capacity(w.len());
        for s in w.syllables() {
            let key = (s.generator, s.exponent.signum());
            let g = match cache.iter().find(|(k, _)| *k == key) {
                Some((_, g)) => g.clone(),
                None => {
                    let g = self.generator(s.generator, key.1)?;
                    cache.push((key, g.clone()));
                    g
                }
            };
            let reps = s.exponent.unsigned_abs();
            match g {
                GeneratorMatrix::Diagonal(d) => {
                    let e = reps as i64;
                    let d = d.iter().map(|x| x.pow(e)).collect::<Result<Vec<_>>>()?;
                    out.push((GeneratorMatrix::Diagonal(d), 1));
                }
                sparse => out.push((sparse, reps)),
            }
        }
        Ok(out)
    }

    /// Product of the word's matrices, first syllable leftmost.
    pub fn eval_word(&self, w: &TwistWord) -> Result<RepMatrix> {
        let mut m = RepMatrix::identity(&self.basis, self.field());
        for (g, reps) in self.word_factors(w)? {
            for _ in 0..reps {
                m = m.mul_generator(&g);
            }
        }
        Ok(m)
    }

    /// `v * M(w)` for a row vector.
    pub fn apply_row(&self, factors: &[(GeneratorMatrix, u32)], v: Vec<FieldElement>) -> Vec<FieldElement> {
        let mut v = v;
        for (g, reps) in factors {
            for _ in 0..*reps {
                v = g.apply_row(&v);
            }
        }
        v
    }
}

/// Calls `f` on every cycle coloring `z` with `(z_t, z_{t+1}, y_t)`
/// admissible for all `t`.
fn for_each_cycle_coloring(
    colors: &[u32],
    legs: &[u32],
    k: u32,
    z: &mut Vec<u32>,
    t: usize,
    f: &mut dyn FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    let m = z.len();
    if t == m {
        return if is_admissible_triple(z[m - 1], z[0], legs[m - 1], k) {
            f(z)
        } else {
            Ok(())
        };
    }
    for &c in colors {
        z[t] = c;
        if t > 0 && !is_admissible_triple(z[t - 1], c, legs[t - 1], k) {
            continue;
        }
        for_each_cycle_coloring(colors, legs, k, z, t + 1, f)?;
    }
    Ok(())
}
