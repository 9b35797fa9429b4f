//! Handlebody spine graphs built from planted trees, and their admissible
//! colorings.
//!
//! Tree vertex `v` owns a face cycle `C_v` of the spine graph. A child `w`
//! of `v` shares one edge `eps_w` between `C_v` and `C_w`; the root cycle
//! carries the outgoing edge. The meridian of `eps_v` and the curve parallel
//! to `C_v` are the two twist curves of handle `v`. In genus one the graph
//! is a loop with a stem.
//!
//! Edge ids: the outgoing edge is `0`; then for each handle in order its
//! twist edge `eps_v` followed by the other edges of `C_v` in cyclic order.
//! Handle 1 therefore has twist edge `1`. There are `3g - 1` edges in total.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, TqftError};
use crate::skein::is_admissible_triple;

/// Rooted planar tree on vertices `1..=g` given by parents `p_1 = 0` and
/// `1 <= p_v < v`; siblings are ordered by label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlantedTree {
    parents: Vec<usize>,
}

impl PlantedTree {
    pub fn new(parents: Vec<usize>) -> Result<Self> {
        if parents.is_empty() {
            return Err(TqftError::InvalidTree("empty parent array".into()));
        }
        if parents[0] != 0 {
            return Err(TqftError::InvalidTree("the first entry must be 0".into()));
        }
        for (idx, &p) in parents.iter().enumerate().skip(1) {
            let v = idx + 1;
            if p == 0 || p >= v {
                return Err(TqftError::InvalidTree(format!(
                    "parent of vertex {v} is {p}; expected 1 <= p < {v}"
                )));
            }
        }
        Ok(PlantedTree { parents })
    }

    /// Parses `"0,1,1,1,2"` or `"[0,1,1,1,2]"`.
    pub fn parse(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parents = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| TqftError::InvalidTree(format!("not a parent array: {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parents)
    }

    pub fn genus(&self) -> usize {
        self.parents.len()
    }

    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parents[v - 1]
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (1..=self.genus()).filter(|&w| self.parent(w) == v).collect()
    }

    /// Reverses every sibling order (the mirror planar structure), keeping
    /// labels in parent-before-child order.
    pub fn mirrored(&self) -> PlantedTree {
        // relabel by a preorder walk that visits children right to left
        let g = self.genus();
        let mut order = Vec::with_capacity(g);
        let mut stack = vec![1usize];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children(v));
        }
        let mut label = vec![0usize; g + 1];
        for (i, &v) in order.iter().enumerate() {
            label[v] = i + 1;
        }
        let mut parents = vec![0usize; g];
        for v in 2..=g {
            parents[label[v] - 1] = label[self.parent(v)];
        }
        PlantedTree { parents }
    }
}

impl fmt::Display for PlantedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parents.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The twist curves of one handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Handle {
    /// Edge whose meridian is the A-curve of the handle.
    pub twist_edge: usize,
    /// Edges of the face cycle in traversal order.
    pub cycle: Vec<usize>,
    /// `legs[t]` is the off-cycle edge at the vertex between `cycle[t]` and
    /// `cycle[t + 1]`.
    pub legs: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TrivalentGraph {
    tree: PlantedTree,
    /// Incident edge ids per vertex; a loop appears twice.
    vertices: Vec<[usize; 3]>,
    edge_count: usize,
    handles: Vec<Handle>,
}

pub const OUTGOING_EDGE: usize = 0;

pub fn build_graph(tree: &PlantedTree) -> TrivalentGraph {
    let g = tree.genus();
    let mut nodes = 0usize;
    let mut fresh = || {
        nodes += 1;
        nodes - 1
    };
    // shared edge eps_w of a non-root w runs from node a_w to node b_w
    let mut shared: HashMap<usize, (usize, usize)> = HashMap::new();
    for w in 2..=g {
        let a = fresh();
        let b = fresh();
        shared.insert(w, (a, b));
    }
    let root_node = fresh();

    // Temporary edge keys, renumbered below.
    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
    enum Key {
        Outgoing,
        Shared(usize),
        Connect(usize, usize),
    }
    let mut ends: HashMap<Key, (usize, usize)> = HashMap::new();
    ends.insert(Key::Outgoing, (root_node, usize::MAX));
    for (&w, &(a, b)) in &shared {
        ends.insert(Key::Shared(w), (a, b));
    }

    // per handle: cycle as (edge key, node at the end of the edge)
    let mut cycles: Vec<Vec<(Key, usize)>> = Vec::with_capacity(g);
    let mut twist_keys = Vec::with_capacity(g);
    for v in 1..=g {
        let mut slots: Vec<(usize, usize, Option<Key>)> = Vec::new();
        if v == 1 {
            slots.push((root_node, root_node, None));
        } else {
            let (a, b) = shared[&v];
            slots.push((b, a, Some(Key::Shared(v))));
        }
        for w in tree.children(v) {
            let (a, b) = shared[&w];
            slots.push((a, b, Some(Key::Shared(w))));
        }
        let mut cyc = Vec::new();
        for (si, &(_, end, key)) in slots.iter().enumerate() {
            if let Some(key) = key {
                cyc.push((key, end));
            }
            let next_start = slots[(si + 1) % slots.len()].0;
            let ck = Key::Connect(v, si);
            ends.insert(ck, (end, next_start));
            cyc.push((ck, next_start));
        }
        twist_keys.push(if v == 1 { Key::Connect(1, 0) } else { Key::Shared(v) });
        cycles.push(cyc);
    }

    let mut id_of: HashMap<Key, usize> = HashMap::new();
    id_of.insert(Key::Outgoing, OUTGOING_EDGE);
    for v in 1..=g {
        let tk = twist_keys[v - 1];
        let next = id_of.len();
        id_of.insert(tk, next);
        for &(key, _) in &cycles[v - 1] {
            if !id_of.contains_key(&key) && matches!(key, Key::Connect(..)) {
                let next = id_of.len();
                id_of.insert(key, next);
            }
        }
    }
    let edge_count = id_of.len();
    debug_assert_eq!(edge_count, 3 * g - 1);

    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (key, &(x, y)) in &ends {
        let id = id_of[key];
        incidence[x].push(id);
        if y != usize::MAX {
            incidence[y].push(id);
        }
    }
    let vertices: Vec<[usize; 3]> = incidence
        .into_iter()
        .map(|mut es| {
            es.sort_unstable();
            [es[0], es[1], es[2]]
        })
        .collect();

    let handles = cycles
        .iter()
        .zip(&twist_keys)
        .map(|(cyc, tk)| {
            let ids: Vec<usize> = cyc.iter().map(|(k, _)| id_of[k]).collect();
            let m = ids.len();
            let legs = cyc
                .iter()
                .enumerate()
                .map(|(t, &(_, node))| {
                    let mut rest = vertex_edges(&vertices, node);
                    remove_one(&mut rest, ids[t]);
                    remove_one(&mut rest, ids[(t + 1) % m]);
                    rest[0]
                })
                .collect();
            Handle {
                twist_edge: id_of[tk],
                cycle: ids,
                legs,
            }
        })
        .collect();

    TrivalentGraph {
        tree: tree.clone(),
        vertices,
        edge_count,
        handles,
    }
}

fn vertex_edges(vertices: &[[usize; 3]], node: usize) -> Vec<usize> {
    vertices[node].to_vec()
}

fn remove_one(v: &mut Vec<usize>, x: usize) {
    let pos = v.iter().position(|&y| y == x).expect("edge at vertex");
    v.remove(pos);
}

impl TrivalentGraph {
    pub fn tree(&self) -> &PlantedTree {
        &self.tree
    }

    pub fn genus(&self) -> usize {
        self.tree.genus()
    }

    /// Total number of edges including the outgoing one (`3g - 1`).
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Ids of the edges other than the outgoing one.
    pub fn internal_edges(&self) -> std::ops::Range<usize> {
        1..self.edge_count
    }

    pub fn vertices(&self) -> &[[usize; 3]] {
        &self.vertices
    }

    pub fn handles(&self) -> &[Handle] {
        &self.handles
    }

    /// Handle `r`, 1-based.
    pub fn handle(&self, r: usize) -> Result<&Handle> {
        if r == 0 {
            return Err(TqftError::InvalidHandle(r));
        }
        self.handles.get(r - 1).ok_or(TqftError::InvalidHandle(r))
    }

    pub fn check_edge(&self, e: usize) -> Result<()> {
        if e >= 1 && e < self.edge_count {
            Ok(())
        } else {
            Err(TqftError::InvalidEdge(e))
        }
    }
}

/// Admissible `(k, i)`-colorings in lexicographic order of the color vector
/// indexed by edge id.
#[derive(Debug, Clone)]
pub struct AdmissibleBasis {
    graph: Arc<TrivalentGraph>,
    k: u32,
    i: u32,
    colorings: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

pub fn check_level_and_color(k: u32, i: u32) -> Result<()> {
    if k < 3 || k % 2 == 0 {
        return Err(TqftError::InvalidLevel(k as i64));
    }
    if i % 2 == 1 {
        return Err(TqftError::InvalidColor {
            color: i as i64,
            level: k,
            reason: "boundary color must be even",
        });
    }
    if i > k {
        return Err(TqftError::InvalidColor {
            color: i as i64,
            level: k,
            reason: "boundary color exceeds the level",
        });
    }
    Ok(())
}

pub fn admissible_colorings(graph: &Arc<TrivalentGraph>, k: u32, i: u32) -> Result<AdmissibleBasis> {
    check_level_and_color(k, i)?;
    let n = graph.edge_count();
    // vertices to check once their largest edge id is colored
    let mut closes: Vec<Vec<[usize; 3]>> = vec![Vec::new(); n];
    for vtx in graph.vertices() {
        let top = *vtx.iter().max().expect("three edges");
        closes[top].push(*vtx);
    }
    let mut colors = vec![0u8; n];
    colors[OUTGOING_EDGE] = i as u8;
    let mut out = Vec::new();
    if closes[0].iter().all(|v| admissible_at(v, &colors, k)) {
        extend(1, &mut colors, &closes, k, &mut out);
    }
    let index = out.iter().enumerate().map(|(j, c)| (c.clone(), j)).collect();
    Ok(AdmissibleBasis {
        graph: graph.clone(),
        k,
        i,
        colorings: out,
        index,
    })
}

fn admissible_at(v: &[usize; 3], colors: &[u8], k: u32) -> bool {
    is_admissible_triple(colors[v[0]] as u32, colors[v[1]] as u32, colors[v[2]] as u32, k)
}

fn extend(e: usize, colors: &mut Vec<u8>, closes: &[Vec<[usize; 3]>], k: u32, out: &mut Vec<Vec<u8>>) {
    if e == colors.len() {
        out.push(colors.clone());
        return;
    }
    for c in (0..=k).step_by(2) {
        colors[e] = c as u8;
        if closes[e].iter().all(|v| admissible_at(v, colors, k)) {
            extend(e + 1, colors, closes, k, out);
        }
    }
    colors[e] = 0;
}

pub fn dim(tree: &PlantedTree, k: u32, i: u32) -> Result<usize> {
    let graph = Arc::new(build_graph(tree));
    Ok(admissible_colorings(&graph, k, i)?.len())
}

impl AdmissibleBasis {
    pub fn graph(&self) -> &Arc<TrivalentGraph> {
        &self.graph
    }

    pub fn level(&self) -> u32 {
        self.k
    }

    pub fn boundary_color(&self) -> u32 {
        self.i
    }

    pub fn len(&self) -> usize {
        self.colorings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colorings.is_empty()
    }

    pub fn colorings(&self) -> &[Vec<u8>] {
        &self.colorings
    }

    pub fn get(&self, j: usize) -> &[u8] {
        &self.colorings[j]
    }

    pub fn index_of(&self, coloring: &[u8]) -> Option<usize> {
        self.index.get(coloring).copied()
    }

    /// Basis as a JSON list of color vectors.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(
            self.colorings
                .iter()
                .map(|c| c.iter().map(|&x| x as u32).collect::<Vec<u32>>())
                .collect::<Vec<_>>(),
        )
    }
}
