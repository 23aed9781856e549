//! Functional graphs of `φ_{λ,p}` on `P¹(F_q)`.
//!
//! Nodes are identified by their integer encoding `0..q`, with `q` standing
//! for `∞`; on every wire format they are rendered as decimal strings and
//! `"inf"`.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{FieldSpec, HasSpec, ProjPoint};
use crate::ring::FiniteField;
use crate::selfmap::{SelfMapCtx, SelfMapError};

pub const DEFAULT_MAX_NODES: u64 = 1_000_000;
pub const MAX_NODES_ENV: &str = "HDFLOW_MAX_NODES";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("field has {order} elements, above the graph bound {bound}")]
    FieldTooLarge { order: u64, bound: u64 },
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error(transparent)]
    SelfMap(#[from] SelfMapError),
}

/// Graph size bound: `HDFLOW_MAX_NODES` if set and valid, else [`DEFAULT_MAX_NODES`].
pub fn max_nodes() -> u64 {
    std::env::var(MAX_NODES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_NODES)
}

pub fn to_node<F: FiniteField>(field: &F, x: &ProjPoint<F::Elem>) -> u64 {
    match x {
        ProjPoint::Finite(e) => field.index(e),
        ProjPoint::Infinity => field.order(),
    }
}

pub fn from_node<F: FiniteField>(field: &F, n: u64) -> ProjPoint<F::Elem> {
    if n == field.order() {
        ProjPoint::Infinity
    } else {
        ProjPoint::Finite(field.element(n))
    }
}

fn label(q: u64, n: u64) -> String {
    if n == q {
        "inf".to_string()
    } else {
        n.to_string()
    }
}

fn parse_label(q: u64, s: &str) -> Result<u64, DynamicsError> {
    if s == "inf" {
        return Ok(q);
    }
    match s.parse::<u64>() {
        Ok(n) if n < q => Ok(n),
        _ => Err(DynamicsError::Malformed(format!("bad node {s:?}"))),
    }
}

/// Rotates `cycle` so that it starts at its smallest node.
fn canonical_rotation(mut cycle: Vec<u64>) -> Vec<u64> {
    if let Some(pos) = cycle.iter().enumerate().min_by_key(|(_, n)| **n).map(|(i, _)| i) {
        cycle.rotate_left(pos);
    }
    cycle
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    pub period: usize,
    pub nodes: Vec<u64>,
}

/// Tail and cycle of a single forward orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub tail: Vec<u64>,
    pub cycle: Vec<u64>,
}

impl Orbit {
    /// `{"tail":[...],"cycle":[...]}` with node labels.
    pub fn to_json(&self, order: u64) -> String {
        #[derive(Serialize)]
        struct Wire {
            tail: Vec<String>,
            cycle: Vec<String>,
        }
        let labels = |v: &[u64]| v.iter().map(|&n| label(order, n)).collect::<Vec<_>>();
        let wire = Wire { tail: labels(&self.tail), cycle: labels(&self.cycle) };
        serde_json::to_string(&wire).expect("orbit serializes")
    }
}

/// The functional graph of `φ` on all `q + 1` points of `P¹(F_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitGraph {
    field: FieldSpec,
    lambda: u64,
    order: u64,
    edges: Vec<u64>,
    cycles: Vec<Cycle>,
    tails: Vec<usize>,
    cycle_of: Vec<Option<usize>>,
}

impl OrbitGraph {
    /// Decomposes the map `n ↦ edges[n]` on `0..=order` into cycles and tails.
    pub fn from_edges(
        field: FieldSpec,
        lambda: u64,
        order: u64,
        edges: Vec<u64>,
    ) -> Result<Self, DynamicsError> {
        let n = edges.len();
        if n as u64 != order + 1 {
            return Err(DynamicsError::Malformed(format!("{n} edges for {} nodes", order + 1)));
        }
        if let Some(bad) = edges.iter().find(|&&t| t > order) {
            return Err(DynamicsError::Malformed(format!("edge target {bad} out of range")));
        }
        const UNSEEN: usize = usize::MAX;
        // visit stamp per node; the walk started at `start` stamps with `start`
        let mut stamp = vec![UNSEEN; n];
        let mut tails = vec![0usize; n];
        let mut cycle_of: Vec<Option<usize>> = vec![None; n];
        let mut cycles = Vec::new();
        let mut path = Vec::new();
        for start in 0..n {
            if stamp[start] != UNSEEN {
                continue;
            }
            path.clear();
            let mut cur = start;
            while stamp[cur] == UNSEEN {
                stamp[cur] = start;
                path.push(cur);
                cur = edges[cur] as usize;
            }
            let mut rest = path.len();
            if stamp[cur] == start {
                // closed a new cycle inside this walk
                let pos = path.iter().position(|&x| x == cur).expect("on path");
                let nodes: Vec<u64> = path[pos..].iter().map(|&x| x as u64).collect();
                let idx = cycles.len();
                for &x in &path[pos..] {
                    cycle_of[x] = Some(idx);
                }
                cycles.push(nodes);
                rest = pos;
            }
            for &x in path[..rest].iter().rev() {
                tails[x] = tails[edges[x] as usize] + 1;
            }
        }
        let mut cycles: Vec<Vec<u64>> = cycles.into_iter().map(canonical_rotation).collect();
        cycles.sort_by_key(|c| (c.len(), c[0]));
        for (idx, c) in cycles.iter().enumerate() {
            for &x in c {
                cycle_of[x as usize] = Some(idx);
            }
        }
        Ok(OrbitGraph {
            field,
            lambda,
            order,
            edges,
            cycles: cycles
                .into_iter()
                .map(|nodes| Cycle { period: nodes.len(), nodes })
                .collect(),
            tails,
            cycle_of,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// `q`; also the node id of `∞`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn node_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[u64] {
        &self.edges
    }

    pub fn image(&self, node: u64) -> u64 {
        self.edges[node as usize]
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Distance from `node` to its cycle.
    pub fn tail_length(&self, node: u64) -> usize {
        self.tails[node as usize]
    }

    pub fn tails(&self) -> &[usize] {
        &self.tails
    }

    /// The cycle that `node` eventually falls into.
    pub fn terminal_cycle(&self, node: u64) -> &Cycle {
        let mut cur = node;
        for _ in 0..self.tails[node as usize] {
            cur = self.image(cur);
        }
        &self.cycles[self.cycle_of[cur as usize].expect("tail ends on a cycle")]
    }

    pub fn period_of(&self, node: u64) -> Option<usize> {
        self.cycle_of[node as usize].map(|c| self.cycles[c].period)
    }

    pub fn is_periodic(&self, node: u64) -> bool {
        self.cycle_of[node as usize].is_some()
    }

    /// Nodes mapping to `node`, ascending.
    pub fn preimages(&self, node: u64) -> Vec<u64> {
        (0..self.edges.len() as u64).filter(|&x| self.image(x) == node).collect()
    }

    pub fn label(&self, node: u64) -> String {
        label(self.order, node)
    }

    pub fn to_json(&self) -> String {
        let targets: Vec<String> = self.edges.iter().map(|&t| self.label(t)).collect();
        let wire = GraphWire {
            p: self.field.p,
            f: self.field.f,
            modulus: &self.field.modulus,
            lambda: self.lambda,
            edges: NodeMap { order: self.order, values: &targets },
            cycles: self
                .cycles
                .iter()
                .map(|c| CycleWire {
                    period: c.period,
                    nodes: c.nodes.iter().map(|&n| self.label(n)).collect(),
                })
                .collect(),
            tails: NodeMap { order: self.order, values: &self.tails },
        };
        serde_json::to_string(&wire).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, DynamicsError> {
        let wire: GraphWireIn =
            serde_json::from_str(s).map_err(|e| DynamicsError::Malformed(e.to_string()))?;
        let order = wire.p.checked_pow(wire.f as u32).ok_or_else(|| {
            DynamicsError::Malformed("field order overflows".to_string())
        })?;
        let mut edges = vec![u64::MAX; order as usize + 1];
        for (from, to) in &wire.edges {
            edges[parse_label(order, from)? as usize] = parse_label(order, to)?;
        }
        if edges.contains(&u64::MAX) {
            return Err(DynamicsError::Malformed("missing edge".to_string()));
        }
        let spec = FieldSpec { p: wire.p, f: wire.f, modulus: wire.modulus };
        let g = OrbitGraph::from_edges(spec, wire.lambda, order, edges)?;
        let cycles: Vec<Cycle> = wire
            .cycles
            .iter()
            .map(|c| {
                Ok(Cycle {
                    period: c.period,
                    nodes: c.nodes.iter().map(|s| parse_label(order, s)).collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<_, DynamicsError>>()?;
        if cycles != g.cycles {
            return Err(DynamicsError::Malformed("cycles disagree with edges".to_string()));
        }
        for (node, t) in &wire.tails {
            if g.tails[parse_label(order, node)? as usize] != *t {
                return Err(DynamicsError::Malformed(format!("tail of {node} disagrees with edges")));
            }
        }
        Ok(g)
    }

    /// Graphviz digraph; cycle nodes carry their period in the label.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph phi {{").unwrap();
        writeln!(
            out,
            "  // p={} f={} modulus={:?} lambda={}",
            self.field.p, self.field.f, self.field.modulus, self.lambda
        )
        .unwrap();
        for c in &self.cycles {
            for &x in &c.nodes {
                let l = self.label(x);
                writeln!(out, "  \"{l}\" [label=\"{l} (period {})\", peripheries=2];", c.period).unwrap();
            }
        }
        for (from, &to) in self.edges.iter().enumerate() {
            writeln!(out, "  \"{}\" -> \"{}\";", self.label(from as u64), self.label(to)).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

struct NodeMap<'a, T: Serialize> {
    order: u64,
    values: &'a [T],
}

impl<T: Serialize> Serialize for NodeMap<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.values.len()))?;
        for (n, v) in self.values.iter().enumerate() {
            map.serialize_entry(&label(self.order, n as u64), v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct CycleWire {
    period: usize,
    nodes: Vec<String>,
}

#[derive(Serialize)]
struct GraphWire<'a> {
    p: u64,
    f: usize,
    modulus: &'a [u64],
    lambda: u64,
    edges: NodeMap<'a, String>,
    cycles: Vec<CycleWire>,
    tails: NodeMap<'a, usize>,
}

#[derive(Deserialize)]
struct CycleWireIn {
    period: usize,
    nodes: Vec<String>,
}

#[derive(Deserialize)]
struct GraphWireIn {
    p: u64,
    f: usize,
    modulus: Vec<u64>,
    lambda: u64,
    edges: HashMap<String, String>,
    cycles: Vec<CycleWireIn>,
    tails: HashMap<String, usize>,
}

/// Evaluates `φ` on every point of `P¹(F_q)` in parallel and decomposes the result.
pub fn functional_graph<F: FiniteField + HasSpec>(
    ctx: &SelfMapCtx<F>,
) -> Result<OrbitGraph, DynamicsError> {
    functional_graph_bounded(ctx, max_nodes())
}

pub fn functional_graph_bounded<F: FiniteField + HasSpec>(
    ctx: &SelfMapCtx<F>,
    bound: u64,
) -> Result<OrbitGraph, DynamicsError> {
    let k = ctx.field();
    let q = k.order();
    if q > bound {
        return Err(DynamicsError::FieldTooLarge { order: q, bound });
    }
    // build the rational map once up front so workers share it
    let _ = ctx.rational();
    let edges = (0..=q)
        .into_par_iter()
        .map(|n| Ok(to_node(k, &ctx.eval(&from_node(k, n))?)))
        .collect::<Result<Vec<u64>, SelfMapError>>()?;
    OrbitGraph::from_edges(k.spec(), k.index(ctx.lambda()), q, edges)
}

/// Forward orbit of `start` split into tail and cycle (Brent's algorithm).
pub fn orbit<F: FiniteField>(ctx: &SelfMapCtx<F>, start: &ProjPoint<F::Elem>) -> Result<Orbit, DynamicsError> {
    let k = ctx.field();
    let step = |x: &ProjPoint<F::Elem>| ctx.eval(x);

    // cycle length
    let mut power = 1usize;
    let mut lam = 1usize;
    let mut tortoise = start.clone();
    let mut hare = step(start)?;
    while tortoise != hare {
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = step(&hare)?;
        lam += 1;
    }

    // tail length
    let mut tortoise = start.clone();
    let mut hare = start.clone();
    for _ in 0..lam {
        hare = step(&hare)?;
    }
    let mut tail = Vec::new();
    while tortoise != hare {
        tail.push(to_node(k, &tortoise));
        tortoise = step(&tortoise)?;
        hare = step(&hare)?;
    }

    let mut cycle = Vec::with_capacity(lam);
    let mut cur = tortoise;
    for _ in 0..lam {
        cycle.push(to_node(k, &cur));
        cur = step(&cur)?;
    }
    Ok(Orbit { tail, cycle: canonical_rotation(cycle) })
}

/// Every periodic node with its exact period, by node id.
pub fn periodic_points<F: FiniteField + HasSpec>(
    ctx: &SelfMapCtx<F>,
) -> Result<Vec<(u64, usize)>, DynamicsError> {
    let g = functional_graph(ctx)?;
    let mut out: Vec<(u64, usize)> = g
        .cycles()
        .iter()
        .flat_map(|c| c.nodes.iter().map(move |&n| (n, c.period)))
        .collect();
    out.sort_unstable();
    Ok(out)
}
