//! Monodromies of slalom knots from planted trees.
//!
//! Each vertex `v` of the tree is a handle of the surface. The monodromy is
//! the bipartite Coxeter element
//! `twA(eps_1) ... twA(eps_g) * twB(1) ... twB(g)`, where `eps_v` is the edge
//! through which handle `v` hangs off its parent (the loop edge for the root).
//! The A-curves are pairwise disjoint, as are the B-curves, and `B_v` meets
//! exactly `A_v` and the `A_w` of its children.

use crate::cyclotomic::{Accumulator, FieldElement};
use crate::error::Result;
use crate::graph::{build_graph, PlantedTree};
use crate::rep::{Generator, GeneratorMatrix, RepMatrix, Representation, TwistWord};

/// Bumped whenever the compiled word or the generator conventions change;
/// cached matrices carry it.
pub const CONVENTION_VERSION: &str = "slalom-coxeter-1";

const KNOWN_KNOTS: [(&[usize], &str); 4] = [
    (&[0, 1, 1, 1, 2], "13n1320"),
    (&[0, 1, 1, 1, 3], "13n1291"),
    (&[0, 1, 1, 3, 3, 4], "15n30444"),
    (&[0, 1, 1, 3, 3, 5], "15n30419"),
];

pub fn known_knot(tree: &PlantedTree) -> Option<&'static str> {
    KNOWN_KNOTS
        .iter()
        .find(|(p, _)| *p == tree.parents())
        .map(|(_, name)| *name)
}

#[derive(Debug, Clone)]
pub struct MonodromySpec {
    pub tree: PlantedTree,
    pub word: TwistWord,
    pub knot: Option<&'static str>,
}

impl MonodromySpec {
    pub fn new(tree: &PlantedTree) -> Self {
        MonodromySpec {
            tree: tree.clone(),
            word: tree_to_word(tree),
            knot: known_knot(tree),
        }
    }

    pub fn genus(&self) -> usize {
        self.tree.genus()
    }
}

pub fn tree_to_word(tree: &PlantedTree) -> TwistWord {
    let graph = build_graph(tree);
    let mut w = TwistWord::new();
    for h in graph.handles() {
        w.push(Generator::A(h.twist_edge), 1);
    }
    for r in 1..=graph.genus() {
        w.push(Generator::B(r), 1);
    }
    w
}

pub fn coxeter(tree: &PlantedTree, k: u32, i: u32) -> Result<RepMatrix> {
    let rep = Representation::for_tree(tree, k, i)?;
    rep.eval_word(&tree_to_word(tree))
}

/// `[trace(M), ..., trace(M^nmax)]` for `M = eval(w)` without forming any
/// dense power: each basis row is pushed through the sparse factors of `w`
/// `nmax` times. When `m` is supplied it must equal `eval(w)` and supplies
/// the first step.
pub fn streaming_power_traces(
    rep: &Representation,
    w: &TwistWord,
    nmax: u32,
    m: Option<&RepMatrix>,
) -> Result<Vec<FieldElement>> {
    let field = rep.field().clone();
    let n = rep.dim();
    let factors: Vec<(GeneratorMatrix, u32)> = rep.word_factors(w)?;
    let mut acc: Vec<Accumulator> = (0..nmax).map(|_| Accumulator::new(&field)).collect();
    for r in 0..n {
        let mut v = match m {
            Some(m) => m.rows()[r].clone(),
            None => {
                let mut e = vec![FieldElement::zero(&field); n];
                e[r] = FieldElement::one(&field);
                rep.apply_row(&factors, e)
            }
        };
        for p in 0..nmax as usize {
            if p > 0 {
                v = rep.apply_row(&factors, v);
            }
            acc[p].add(&v[r]);
        }
    }
    Ok(acc.into_iter().map(Accumulator::finish).collect())
}
