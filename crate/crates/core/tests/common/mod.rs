//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use tqft::invariants::is_root_of_unity;
use tqft::rep::RepMatrix;
use tqft::sl2z::IntMatrix2;
use tqft::{Field, FieldElement};

/// Kauffman bracket state sum over a network of 2-strand boxes.
///
/// Each box has ports `in1, in2, out1, out2` and two states: straight
/// through (`in1-out1`, `in2-out2`) or turned back (`in1-in2`, `out1-out2`).
/// A Jones-Wenzl projector on two strands is `1 - e / delta`; a crossing is
/// `A * 1 + A^-1 * e`. Wires join ports; every port carries exactly one wire.
pub struct BracketNet {
    field: Field,
    boxes: Vec<(FieldElement, FieldElement)>,
    wires: Vec<(Port, Port)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Port {
    pub bx: usize,
    pub slot: usize,
}

pub const IN1: usize = 0;
pub const IN2: usize = 1;
pub const OUT1: usize = 2;
pub const OUT2: usize = 3;

pub fn port(bx: usize, slot: usize) -> Port {
    Port { bx, slot }
}

pub fn loop_value(field: &Field) -> FieldElement {
    -(FieldElement::a_pow(field, 2) + FieldElement::a_pow(field, -2))
}

impl BracketNet {
    pub fn new(field: &Field) -> Self {
        BracketNet {
            field: field.clone(),
            boxes: Vec::new(),
            wires: Vec::new(),
        }
    }

    pub fn projector(&mut self) -> usize {
        let d = loop_value(&self.field);
        let minus_inv = -d.inv().unwrap();
        self.boxes.push((FieldElement::one(&self.field), minus_inv));
        self.boxes.len() - 1
    }

    pub fn crossing(&mut self) -> usize {
        self.boxes
            .push((FieldElement::a_pow(&self.field, 1), FieldElement::a_pow(&self.field, -1)));
        self.boxes.len() - 1
    }

    pub fn wire(&mut self, a: Port, b: Port) {
        self.wires.push((a, b));
    }

    pub fn evaluate(&self) -> FieldElement {
        let n = self.boxes.len();
        let mut ports_used = vec![0u8; 4 * n];
        for (a, b) in &self.wires {
            ports_used[4 * a.bx + a.slot] += 1;
            ports_used[4 * b.bx + b.slot] += 1;
        }
        assert!(ports_used.iter().all(|&c| c == 1), "every port needs one wire");
        let d = loop_value(&self.field);
        let mut total = FieldElement::zero(&self.field);
        for state in 0u64..(1 << n) {
            let mut uf: Vec<usize> = (0..4 * n).collect();
            fn find(uf: &mut [usize], x: usize) -> usize {
                let mut r = x;
                while uf[r] != r {
                    r = uf[r];
                }
                uf[x] = r;
                r
            }
            let join = |uf: &mut Vec<usize>, a: usize, b: usize| {
                let (ra, rb) = (find(uf, a), find(uf, b));
                uf[ra] = rb;
            };
            let mut w = FieldElement::one(&self.field);
            for (b, (w_id, w_e)) in self.boxes.iter().enumerate() {
                let base = 4 * b;
                if state >> b & 1 == 0 {
                    join(&mut uf, base + IN1, base + OUT1);
                    join(&mut uf, base + IN2, base + OUT2);
                    w = &w * w_id;
                } else {
                    join(&mut uf, base + IN1, base + IN2);
                    join(&mut uf, base + OUT1, base + OUT2);
                    w = &w * w_e;
                }
            }
            for (a, b) in &self.wires {
                join(&mut uf, 4 * a.bx + a.slot, 4 * b.bx + b.slot);
            }
            let loops = (0..4 * n).filter(|&x| find(&mut uf, x) == x).count();
            total += &(&w * &d.pow(loops as i64).unwrap());
        }
        total
    }
}

/// A stack of boxes on `m` strands closed up like a braid closure.
/// `layers[t] = (j, kind)` puts a box on strands `j, j+1` (0-based).
pub fn closed_stack(field: &Field, m: usize, layers: &[(usize, Kind)]) -> FieldElement {
    let mut net = BracketNet::new(field);
    // open end of each strand: `None` means the bottom of the stack
    let mut open: Vec<Option<Port>> = vec![None; m];
    let mut bottom: Vec<Option<Port>> = vec![None; m];
    for &(j, kind) in layers {
        let b = match kind {
            Kind::Projector => net.projector(),
            Kind::Crossing => net.crossing(),
        };
        for (s, slot_in) in [(j, IN1), (j + 1, IN2)] {
            match open[s] {
                Some(p) => net.wire(p, port(b, slot_in)),
                None => bottom[s] = Some(port(b, slot_in)),
            }
        }
        open[j] = Some(port(b, OUT1));
        open[j + 1] = Some(port(b, OUT2));
    }
    for s in 0..m {
        match (open[s], bottom[s]) {
            (Some(top), Some(bot)) => net.wire(top, bot),
            _ => panic!("every strand must meet a box"),
        }
    }
    net.evaluate()
}

#[derive(Debug, Clone, Copy)]
pub enum Kind {
    Projector,
    Crossing,
}

/// Planar trivalent network with every edge colored 2, given by its faces.
/// `edges[e] = (u, v)`; each face lists its boundary as a cyclic sequence of
/// `(edge, vertex where the face leaves this edge)`. Every edge borders two
/// distinct faces, which run along its two strands.
pub fn all_twos_network(field: &Field, edges: &[(usize, usize)], faces: &[Vec<(usize, usize)>]) -> FieldElement {
    let mut net = BracketNet::new(field);
    let boxes: Vec<usize> = edges.iter().map(|_| net.projector()).collect();
    let mut side_used = vec![0usize; edges.len()];
    let mut side = vec![Vec::new(); faces.len()];
    for (f, face) in faces.iter().enumerate() {
        for &(e, _) in face {
            side_used[e] += 1;
            side[f].push(side_used[e]);
        }
    }
    assert!(side_used.iter().all(|&c| c == 2));
    let end_port = |e: usize, s: usize, vertex: usize| {
        let (u, _) = edges[e];
        let slot = match (vertex == u, s) {
            (true, 1) => IN1,
            (true, _) => IN2,
            (false, 1) => OUT1,
            (false, _) => OUT2,
        };
        port(boxes[e], slot)
    };
    for (f, face) in faces.iter().enumerate() {
        let len = face.len();
        for t in 0..len {
            let (e, leave) = face[t];
            let (e2, _) = face[(t + 1) % len];
            net.wire(end_port(e, side[f][t], leave), end_port(e2, side[f][(t + 1) % len], leave));
        }
    }
    net.evaluate()
}

/// Integer polynomials, ascending coefficients.
pub fn poly_divide(num: &[BigInt], den: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut r = num.to_vec();
    let dl = den.len();
    let lead = den[dl - 1].clone();
    assert!(lead == BigInt::one() || lead == -BigInt::one());
    if r.len() < dl {
        return (vec![BigInt::zero()], r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dl + 1];
    for s in (0..q.len()).rev() {
        let c = &r[s + dl - 1] * &lead;
        for (t, d) in den.iter().enumerate() {
            r[s + t] -= &c * d;
        }
        q[s] = c;
    }
    r.truncate(dl - 1);
    (q, r)
}

/// `Phi_n` from `x^n - 1 = prod_{d | n} Phi_d` by repeated long division.
pub fn cyclotomic_by_division(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n as usize + 1];
    p[0] = -BigInt::one();
    p[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = poly_divide(&p, &cyclotomic_by_division(d));
            assert!(r.iter().all(Zero::is_zero));
            p = q;
        }
    }
    p
}

pub fn element(field: &Field, coeffs: &[(i64, i64)]) -> FieldElement {
    let q: Vec<BigRational> = coeffs
        .iter()
        .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
        .collect();
    FieldElement::from_coeffs(field, &q)
}

/// `X = c Y` with `c = +-A^j`.
pub fn equal_up_to_root_of_unity(x: &RepMatrix, y: &RepMatrix) -> bool {
    let Some((i, j)) = (0..y.dim())
        .flat_map(|i| (0..y.dim()).map(move |j| (i, j)))
        .find(|&(i, j)| !y.get(i, j).is_zero())
    else {
        return false;
    };
    let c = x.get(i, j).try_div(y.get(i, j)).unwrap();
    is_root_of_unity(&c) && *x == y.scale(&c)
}

/// Naive product in `Z[x]`, reduced by long division.
pub fn oracle_product(a: &FieldElement, b: &FieldElement, phi: &[BigInt]) -> FieldElement {
    let (na, nb) = (a.numerator(), b.numerator());
    let mut p = vec![BigInt::from(0); na.len() + nb.len()];
    for (i, x) in na.iter().enumerate() {
        for (j, y) in nb.iter().enumerate() {
            p[i + j] += x * y;
        }
    }
    let (_, r) = poly_divide(&p, phi);
    let den = a.denominator() * b.denominator();
    let q: Vec<BigRational> = r.into_iter().map(|c| BigRational::new(c, den.clone())).collect();
    FieldElement::from_coeffs(a.field(), &q)
}

pub fn sl2z_from(a: i64, c: i64, t: i64) -> Option<IntMatrix2> {
    let (a, c) = (BigInt::from(a), BigInt::from(c));
    let e = a.extended_gcd(&c);
    if e.gcd != BigInt::from(1) {
        return None;
    }
    // a x + c y = 1
    let (d, b) = (e.x, -e.y);
    let t = BigInt::from(t);
    Some(IntMatrix2 {
        b: &b + &t * &a,
        d: &d + &t * &c,
        a,
        c,
    })
}

