//! Conjugacy invariants of representation matrices.

use serde_json::json;

use crate::cyclotomic::{Embeddings, Field, FieldElement, Real, DEFAULT_DIGITS};
use crate::error::{Result, TqftError};
use crate::rep::RepMatrix;
use crate::sl2z::{eval_sl, IntMatrix2};

/// Determinant by Gaussian elimination over the field.
pub fn det(m: &RepMatrix) -> FieldElement {
    let field = m.field().clone();
    let mut a: Vec<Vec<FieldElement>> = m.rows().to_vec();
    let n = a.len();
    let mut acc = FieldElement::one(&field);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return FieldElement::zero(&field);
        };
        if p != col {
            a.swap(p, col);
            acc = -acc;
        }
        let pivot = a[col][col].clone();
        acc = &acc * &pivot;
        let inv = pivot.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= &delta;
            }
        }
    }
    acc
}

/// `trace(M)^n / det(M)` for an `n x n` matrix: a class function on
/// `PGL(n)`.
pub fn pgl_invariant(m: &RepMatrix) -> Result<FieldElement> {
    let d = det(m);
    if d.is_zero() {
        return Err(TqftError::Singular);
    }
    m.trace().pow(m.dim() as i64)?.try_div(&d)
}

/// `trace(M^n) / det(M)`, another projective class function.
pub fn trace_power_invariant(m: &RepMatrix) -> Result<FieldElement> {
    let d = det(m);
    if d.is_zero() {
        return Err(TqftError::Singular);
    }
    m.pow(m.dim() as u32)?.trace().try_div(&d)
}

/// `[trace(M), trace(M^2), ..., trace(M^nmax)]`.
pub fn power_traces(m: &RepMatrix, nmax: u32) -> Result<Vec<FieldElement>> {
    let mut out = Vec::with_capacity(nmax as usize);
    let mut p = m.clone();
    for j in 1..=nmax {
        out.push(p.trace());
        if j < nmax {
            p = p.mul(m)?;
        }
    }
    Ok(out)
}

/// `max_sigma |sigma(x)|` over all complex embeddings.
pub fn arch_norm(x: &FieldElement, emb: &Embeddings) -> Real {
    let bits = emb.bits();
    let mut best: Option<Real> = None;
    for j in 0..emb.len() {
        let v = Real::new(emb.eval(x, j).abs(bits), emb.digits());
        if best.as_ref().map_or(true, |b| v.gt(b)) {
            best = Some(v);
        }
    }
    best.expect("at least one embedding")
}

/// `arch_norm(trace(eval_sl(m, k, i)))` for each level.
pub fn norm_scan(m: &IntMatrix2, i: u32, levels: &[u32], digits: usize) -> Result<Vec<(u32, Real)>> {
    levels
        .iter()
        .map(|&k| {
            let v = eval_sl(m, k, i)?;
            let emb = v.field().embeddings(digits);
            Ok((k, arch_norm(&v.trace(), &emb)))
        })
        .collect()
}

/// The scalar `c` when `M = c I`.
pub fn is_scalar(m: &RepMatrix) -> Option<FieldElement> {
    let c = m.get(0, 0).clone();
    for (i, row) in m.rows().iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let ok = if i == j { *x == c } else { x.is_zero() };
            if !ok {
                return None;
            }
        }
    }
    Some(c)
}

/// Least `n <= bound` with `M^n` scalar.
pub fn projective_order(m: &RepMatrix, bound: u64) -> Result<Option<u64>> {
    let mut p = m.clone();
    for n in 1..=bound {
        if is_scalar(&p).is_some() {
            return Ok(Some(n));
        }
        p = p.mul(m)?;
    }
    Ok(None)
}

/// `det` is `+-A^j` (a root of unity in the field).
pub fn is_root_of_unity(x: &FieldElement) -> bool {
    x.as_a_power().is_some() || (-x).as_a_power().is_some()
}

/// For a `2 x 2` matrix whose determinant is a root of unity, a trace of
/// archimedean norm above 2 forces an eigenvalue off the unit circle in some
/// embedding, so no power of the matrix is scalar. Returns the norm when
/// the certificate applies.
pub fn infinite_order_certificate(m: &RepMatrix, digits: usize) -> Option<Real> {
    if m.dim() != 2 || !is_root_of_unity(&det(m)) {
        return None;
    }
    let emb = m.field().embeddings(digits);
    let norm = arch_norm(&m.trace(), &emb);
    let two = Real::parse("2", digits).expect("literal");
    norm.gt(&two).then_some(norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    Infinite,
}

#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub dimension: usize,
    pub trace: FieldElement,
    pub det: FieldElement,
    pub pgl: Option<FieldElement>,
    pub power_traces: Option<Vec<FieldElement>>,
    pub arch_norm: Option<Real>,
    pub projective_order: Option<Order>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    pub powers: Option<u32>,
    pub arch_norm: bool,
    pub order_bound: Option<u64>,
    pub digits: usize,
}

impl InvariantReport {
    pub fn compute(m: &RepMatrix, opts: &ReportOptions) -> Result<Self> {
        let digits = if opts.digits == 0 { DEFAULT_DIGITS } else { opts.digits };
        let d = det(m);
        let trace = m.trace();
        let pgl = if d.is_zero() { None } else { Some(pgl_invariant(m)?) };
        let power_traces = opts.powers.map(|n| power_traces(m, n)).transpose()?;
        let arch = opts
            .arch_norm
            .then(|| arch_norm(&trace, &m.field().embeddings(digits)));
        let projective_order = match opts.order_bound {
            None => None,
            Some(bound) => match projective_order(m, bound)? {
                Some(n) => Some(Order::Finite(n)),
                None => infinite_order_certificate(m, digits).map(|_| Order::Infinite),
            },
        };
        Ok(InvariantReport {
            dimension: m.dim(),
            trace,
            det: d,
            pgl,
            power_traces,
            arch_norm: arch,
            projective_order,
        })
    }

    pub fn field(&self) -> &Field {
        self.trace.field()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("dimension: {}\ntrace: {}\ndet: {}\n", self.dimension, self.trace, self.det);
        if let Some(p) = &self.pgl {
            out.push_str(&format!("pgl: {p}\n"));
        }
        if let Some(ts) = &self.power_traces {
            for (j, t) in ts.iter().enumerate() {
                out.push_str(&format!("trace^{}: {t}\n", j + 1));
            }
        }
        if let Some(n) = &self.arch_norm {
            out.push_str(&format!("normk: {n}\n"));
        }
        match self.projective_order {
            Some(Order::Finite(n)) => out.push_str(&format!("projective order: {n}\n")),
            Some(Order::Infinite) => out.push_str("projective order: infinite\n"),
            None => {}
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "dimension": self.dimension,
            "trace": self.trace.to_json(),
            "det": self.det.to_json(),
        });
        let obj = v.as_object_mut().expect("object");
        if let Some(p) = &self.pgl {
            obj.insert("pgl".into(), json!(p.to_json()));
        }
        if let Some(ts) = &self.power_traces {
            obj.insert(
                "power_traces".into(),
                json!(ts.iter().map(FieldElement::to_json).collect::<Vec<_>>()),
            );
        }
        if let Some(n) = &self.arch_norm {
            obj.insert("normk".into(), json!(n.to_string()));
        }
        match self.projective_order {
            Some(Order::Finite(n)) => {
                obj.insert("projective_order".into(), json!(n));
            }
            Some(Order::Infinite) => {
                obj.insert("projective_order".into(), json!("infinite"));
            }
            None => {}
        }
        v
    }
}
