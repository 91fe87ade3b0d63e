//! Reduction from the two-level spin glass (TLSG) to triangle balance, with
//! exhaustive solvers for both sides and a correspondence check.
//!
//! A star vertex `v*` is joined to every TLSG vertex, so TLSG vertex `i`
//! becomes star edge `i` and TLSG edge `{u, v}` becomes the triangle
//! `(v*u, v*v, uv)`. The TLSG graph is triangle-free, so these are the only
//! triangles. Edge costs are zero and the triangle for `{u, v}` costs
//! `1 - c_uv * s(x_u) * s(x_v)` with `s(1) = +1`, `s(0) = -1`; its base edge
//! is ignored. Any assignment therefore costs exactly `|E| + H(spins)`.

use crate::error::{Error, Result};
use crate::graph::{enumerate_triangles, NodeId, SignState, SignedEdge, SignedGraph};
use crate::rng;
use crate::scalar::Scalar;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

pub const MAX_TLSG_BRUTE_FORCE_VERTICES: usize = 20;
pub const MAX_VERIFY_VERTICES: usize = 14;
/// Above this many balance edges only the star edges are enumerated.
pub const MAX_FULL_BALANCE_EDGES: usize = 22;

/// Nearest-neighbour pairs of two stacked `width x height` grids. Vertex id is
/// `level * width * height + y * width + x`. Order: level 0 then level 1
/// (right neighbour before down neighbour, row-major), then the vertical pairs.
pub fn grid_edges(width: usize, height: usize) -> Vec<(usize, usize)> {
    let layer = width * height;
    let mut edges = Vec::new();
    for level in 0..2 {
        for y in 0..height {
            for x in 0..width {
                let v = level * layer + y * width + x;
                if x + 1 < width {
                    edges.push((v, v + 1));
                }
                if y + 1 < height {
                    edges.push((v, v + width));
                }
            }
        }
    }
    edges.extend((0..layer).map(|v| (v, v + layer)));
    edges
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TlsgInstance {
    width: usize,
    height: usize,
    edges: Vec<(usize, usize)>,
    costs: Vec<i8>,
}

impl TlsgInstance {
    /// `costs` follow the order of [`grid_edges`].
    pub fn new(width: usize, height: usize, costs: Vec<i8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("grid dimensions must be positive"));
        }
        let edges = grid_edges(width, height);
        if costs.len() != edges.len() {
            return Err(Error::invalid(format!(
                "{} costs for {} grid edges",
                costs.len(),
                edges.len()
            )));
        }
        if let Some(c) = costs.iter().find(|c| !(-1..=1).contains(*c)) {
            return Err(Error::invalid(format!("edge cost {c} not in {{-1, 0, 1}}")));
        }
        Ok(TlsgInstance { width, height, edges, costs })
    }

    /// Costs drawn uniformly from `{-1, 0, +1}`.
    pub fn random(width: usize, height: usize, seed: u64) -> Result<Self> {
        let mut r = rng::seeded(rng::substream(seed, "tlsg"));
        let n = grid_edges(width, height).len();
        Self::new(width, height, (0..n).map(|_| r.random_range(-1i8..=1)).collect())
    }

    pub fn uniform(width: usize, height: usize, cost: i8) -> Result<Self> {
        let n = grid_edges(width, height).len();
        Self::new(width, height, vec![cost; n])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.width * self.height
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn costs(&self) -> &[i8] {
        &self.costs
    }

    /// Header `w h`, then `u v c` per edge in any order. Every grid edge must
    /// appear exactly once and no other pair may appear.
    pub fn parse<R: Read>(input: R) -> Result<Self> {
        let mut lines = BufReader::new(input)
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| match l {
                Ok(s) => !s.trim().is_empty() && !s.trim_start().starts_with('#'),
                Err(_) => true,
            });
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `w h` header"))?;
        let header = header?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(hline, format!("bad dimension {t:?}"))))
            .collect::<Result<_>>()?;
        let [w, h] = dims[..] else {
            return Err(Error::parse(hline, "header must be `w h`"));
        };
        if w == 0 || h == 0 {
            return Err(Error::parse(hline, "grid dimensions must be positive"));
        }
        let grid = grid_edges(w, h);
        let index: HashMap<(usize, usize), usize> = grid.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut costs: Vec<Option<i8>> = vec![None; grid.len()];
        for (lineno, line) in lines {
            let line = line?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(Error::parse(lineno, "expected `u v c`"));
            }
            let u: usize = toks[0].parse().map_err(|_| Error::parse(lineno, "bad vertex"))?;
            let v: usize = toks[1].parse().map_err(|_| Error::parse(lineno, "bad vertex"))?;
            let c: i8 = toks[2].parse().map_err(|_| Error::parse(lineno, "bad cost"))?;
            if !(-1..=1).contains(&c) {
                return Err(Error::parse(lineno, format!("cost {c} not in {{-1, 0, 1}}")));
            }
            let key = (u.min(v), u.max(v));
            let &i = index
                .get(&key)
                .ok_or_else(|| Error::parse(lineno, format!("{u}-{v} is not a grid edge")))?;
            if costs[i].replace(c).is_some() {
                return Err(Error::parse(lineno, format!("edge {u}-{v} listed twice")));
            }
        }
        if let Some(i) = costs.iter().position(Option::is_none) {
            let (u, v) = grid[i];
            return Err(Error::invalid(format!("grid edge {u}-{v} missing from instance")));
        }
        Self::new(w, h, costs.into_iter().map(|c| c.unwrap_or(0)).collect())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(std::fs::File::open(path)?)
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.width, self.height)?;
        for (&(u, v), c) in self.edges.iter().zip(&self.costs) {
            writeln!(out, "{u} {v} {c}")?;
        }
        Ok(())
    }
}

/// `H(x) = -sum c_uv x_u x_v` for spins in `{-1, +1}`.
pub fn tlsg_energy(instance: &TlsgInstance, spins: &[i8]) -> Result<i64> {
    if spins.len() != instance.vertex_count() {
        return Err(Error::invalid(format!(
            "{} spins for {} vertices",
            spins.len(),
            instance.vertex_count()
        )));
    }
    if spins.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::invalid("spins must be -1 or +1"));
    }
    Ok(energy_unchecked(instance, spins))
}

fn energy_unchecked(instance: &TlsgInstance, spins: &[i8]) -> i64 {
    -instance
        .edges
        .iter()
        .zip(&instance.costs)
        .map(|(&(u, v), &c)| c as i64 * spins[u] as i64 * spins[v] as i64)
        .sum::<i64>()
}

fn spins_of_mask(mask: u64, n: usize) -> Vec<i8> {
    // Vertex 0 is the most significant bit, so ascending masks are in
    // lexicographic order with -1 before +1.
    (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { 1 } else { -1 }).collect()
}

/// Exhaustive ground state; ties go to the lexicographically smallest spins.
pub fn brute_force_tlsg(instance: &TlsgInstance) -> Result<(i64, Vec<i8>)> {
    let n = instance.vertex_count();
    if n > MAX_TLSG_BRUTE_FORCE_VERTICES {
        return Err(Error::TooLarge { size: n, limit: MAX_TLSG_BRUTE_FORCE_VERTICES });
    }
    let mut best = (i64::MAX, Vec::new());
    for mask in 0..(1u64 << n) {
        let spins = spins_of_mask(mask, n);
        let e = energy_unchecked(instance, &spins);
        if e < best.0 {
            best = (e, spins);
        }
    }
    Ok(best)
}

/// Triangle balance instance produced by the reduction.
#[derive(Clone, Debug)]
pub struct ReductionOutput<T> {
    /// Undirected, every sign unknown.
    pub graph: SignedGraph<T>,
    pub star_vertex: NodeId,
    /// TLSG vertex `i` maps to this graph edge (the star edge `v* - i`).
    pub vertex_to_edge: Vec<usize>,
    /// TLSG edge `j` maps to this graph edge.
    pub base_edge: Vec<usize>,
    /// TLSG edge `j` maps to this index of `graph.triangles()`.
    pub edge_to_triangle: Vec<usize>,
    /// Cost of each graph edge; all zero.
    pub edge_costs: Vec<i64>,
    /// Per triangle, cost of each corner. The corner index has bit `k` set
    /// when the `k`-th edge of the triangle (ascending edge index) is positive.
    pub triangle_costs: Vec<[i64; 8]>,
}

fn sign(bit: bool) -> i64 {
    if bit {
        1
    } else {
        -1
    }
}

pub fn reduce_to_triangle_balance<T: Scalar>(instance: &TlsgInstance) -> Result<ReductionOutput<T>> {
    let n = instance.vertex_count();
    let star = n;
    let mut edges: Vec<SignedEdge<T>> = (0..n).map(|v| SignedEdge::new(star, v, SignState::Unknown)).collect();
    edges.extend(instance.edges.iter().map(|&(u, v)| SignedEdge::new(u, v, SignState::Unknown)));
    let graph = SignedGraph::new(n + 1, false, edges)?;

    let vertex_to_edge: Vec<usize> = (0..n).collect();
    let base_edge: Vec<usize> = (0..instance.edges.len()).map(|j| n + j).collect();
    let triangles = graph.triangles();
    if triangles.len() != instance.edges.len() {
        return Err(Error::invalid("grid graph is not triangle-free"));
    }
    let by_base: HashMap<usize, usize> = triangles
        .iter()
        .enumerate()
        .map(|(t, tri)| (tri.edges[2], t))
        .collect();
    let mut edge_to_triangle = Vec::with_capacity(instance.edges.len());
    let mut triangle_costs = vec![[0i64; 8]; triangles.len()];
    for (j, (&(u, v), &c)) in instance.edges.iter().zip(&instance.costs).enumerate() {
        let &t = by_base
            .get(&base_edge[j])
            .ok_or_else(|| Error::invalid("grid edge without its star triangle"))?;
        // Star edges have the smallest indices: the triangle is [u, v, base].
        debug_assert_eq!(triangles[t].edges, [vertex_to_edge[u], vertex_to_edge[v], base_edge[j]]);
        for (corner, cost) in triangle_costs[t].iter_mut().enumerate() {
            let (zu, zv) = (corner & 1 == 1, corner & 2 == 2);
            *cost = 1 - c as i64 * sign(zu) * sign(zv);
        }
        edge_to_triangle.push(t);
    }
    Ok(ReductionOutput {
        edge_costs: vec![0; graph.edge_count()],
        graph,
        star_vertex: NodeId(star),
        vertex_to_edge,
        base_edge,
        edge_to_triangle,
        triangle_costs,
    })
}

impl<T: Scalar> ReductionOutput<T> {
    /// Total edge plus triangle cost of a sign assignment over all graph edges.
    pub fn cost(&self, assignment: &[bool]) -> i64 {
        let edge: i64 = self
            .edge_costs
            .iter()
            .zip(assignment)
            .map(|(&c, &x)| if x { c } else { 0 })
            .sum();
        let tri: i64 = self
            .graph
            .triangles()
            .iter()
            .zip(&self.triangle_costs)
            .map(|(t, table)| {
                let corner = t.edges.iter().enumerate().fold(0, |k, (b, &e)| k | (assignment[e] as usize) << b);
                table[corner]
            })
            .sum();
        edge + tri
    }

    /// Spins read off the star edges.
    pub fn spins(&self, assignment: &[bool]) -> Vec<i8> {
        self.vertex_to_edge.iter().map(|&e| if assignment[e] { 1 } else { -1 }).collect()
    }

    /// Star edges set from spins; base edges negative.
    pub fn assignment_from_spins(&self, spins: &[i8]) -> Vec<bool> {
        let mut x = vec![false; self.graph.edge_count()];
        for (&e, &s) in self.vertex_to_edge.iter().zip(spins) {
            x[e] = s > 0;
        }
        x
    }

    /// Exhaustive optimum over every edge sign. Ties go to the smallest
    /// assignment with edge 0 most significant.
    pub fn brute_force_full(&self) -> Result<(i64, Vec<bool>)> {
        let m = self.graph.edge_count();
        if m > MAX_FULL_BALANCE_EDGES {
            return Err(Error::TooLarge { size: m, limit: MAX_FULL_BALANCE_EDGES });
        }
        let mut best = (i64::MAX, Vec::new());
        let mut x = vec![false; m];
        for mask in 0..(1u64 << m) {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = mask >> (m - 1 - i) & 1 == 1;
            }
            let c = self.cost(&x);
            if c < best.0 {
                best = (c, x.clone());
            }
        }
        Ok(best)
    }

    /// Exact optimum that enumerates only the star edges. Every base edge
    /// lies in exactly one triangle, so for fixed star signs it is set to the
    /// better value for that triangle (negative on ties).
    pub fn brute_force(&self) -> Result<(i64, Vec<bool>)> {
        let n = self.vertex_to_edge.len();
        if n > MAX_TLSG_BRUTE_FORCE_VERTICES {
            return Err(Error::TooLarge { size: n, limit: MAX_TLSG_BRUTE_FORCE_VERTICES });
        }
        let triangles = self.graph.triangles();
        let mut best = (i64::MAX, Vec::new());
        for mask in 0..(1u64 << n) {
            let mut x = vec![false; self.graph.edge_count()];
            for (i, &e) in self.vertex_to_edge.iter().enumerate() {
                x[e] = mask >> (n - 1 - i) & 1 == 1;
            }
            for (j, &b) in self.base_edge.iter().enumerate() {
                let t = self.edge_to_triangle[j];
                let corner = |xb: bool| {
                    triangles[t].edges.iter().enumerate().fold(0, |k, (bit, &e)| {
                        k | ((if e == b { xb } else { x[e] }) as usize) << bit
                    })
                };
                let table = &self.triangle_costs[t];
                x[b] = table[corner(true)] + self.edge_costs[b] < table[corner(false)];
            }
            let c = self.cost(&x);
            if c < best.0 {
                best = (c, x);
            }
        }
        Ok(best)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateChecks {
    /// Grid is triangle-free and the mappings are bijections.
    pub structure: bool,
    /// Balance optimum equals `|E|` plus the TLSG optimum.
    pub objective_identity: bool,
    /// Spins read off an optimal balance solution are a ground state.
    pub balance_to_tlsg: bool,
    /// A ground state lifted to edge signs is balance-optimal.
    pub tlsg_to_balance: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub width: usize,
    pub height: usize,
    pub vertices: usize,
    pub edges: usize,
    pub offset: i64,
    pub tlsg_min_energy: i64,
    pub tlsg_witness: Vec<i8>,
    pub balance_min_cost: i64,
    pub balance_witness: Vec<bool>,
    pub energy_of_balance_witness: i64,
    pub cost_of_tlsg_witness: i64,
    pub checks: CertificateChecks,
    pub passed: bool,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Solve both sides exhaustively and check that optima correspond.
pub fn verify_correspondence(instance: &TlsgInstance) -> Result<Certificate> {
    let n = instance.vertex_count();
    if n > MAX_VERIFY_VERTICES {
        return Err(Error::TooLarge { size: n, limit: MAX_VERIFY_VERTICES });
    }
    let red: ReductionOutput<f64> = reduce_to_triangle_balance(instance)?;
    let grid: SignedGraph<f64> = SignedGraph::new(
        n,
        false,
        instance.edges.iter().map(|&(u, v)| SignedEdge::new(u, v, SignState::Unknown)).collect(),
    )?;
    let mut seen_edges = red.vertex_to_edge.clone();
    seen_edges.extend(&red.base_edge);
    seen_edges.sort_unstable();
    let mut seen_tris = red.edge_to_triangle.clone();
    seen_tris.sort_unstable();
    let structure = enumerate_triangles(&grid).is_empty()
        && seen_edges == (0..red.graph.edge_count()).collect::<Vec<_>>()
        && seen_tris == (0..red.graph.triangles().len()).collect::<Vec<_>>()
        && red.vertex_to_edge.iter().all(|&e| red.graph.edge(e).pair().1 == red.star_vertex.0);

    let (h_min, spins) = brute_force_tlsg(instance)?;
    let (b_min, x) = red.brute_force()?;
    let offset = instance.edges.len() as i64;
    let energy_of_balance_witness = energy_unchecked(instance, &red.spins(&x));
    let cost_of_tlsg_witness = red.cost(&red.assignment_from_spins(&spins));
    let checks = CertificateChecks {
        structure,
        objective_identity: b_min == offset + h_min,
        balance_to_tlsg: energy_of_balance_witness == h_min,
        tlsg_to_balance: cost_of_tlsg_witness == b_min,
    };
    let passed = checks.structure && checks.objective_identity && checks.balance_to_tlsg && checks.tlsg_to_balance;
    Ok(Certificate {
        width: instance.width,
        height: instance.height,
        vertices: n,
        edges: instance.edges.len(),
        offset,
        tlsg_min_energy: h_min,
        tlsg_witness: spins,
        balance_min_cost: b_min,
        balance_witness: x,
        energy_of_balance_witness,
        cost_of_tlsg_witness,
        checks,
        passed,
    })
}

/// Checks `cost(x) = |E| + H(spins(x))`. Every triangle table is checked on
/// all 8 corners, which covers every assignment because the cost is a sum of
/// per-triangle terms; instances with at most
/// [`MAX_FULL_BALANCE_EDGES`] balance edges are also enumerated directly.
pub fn offset_identity_holds(instance: &TlsgInstance) -> Result<bool> {
    let red: ReductionOutput<f64> = reduce_to_triangle_balance(instance)?;
    let triangles = red.graph.triangles();
    for (j, (&(u, v), &c)) in instance.edges.iter().zip(&instance.costs).enumerate() {
        let t = red.edge_to_triangle[j];
        for corner in 0..8usize {
            let bit = |e: usize| {
                let k = triangles[t].edges.iter().position(|&x| x == e).expect("edge in triangle");
                corner >> k & 1 == 1
            };
            let (su, sv) = (sign(bit(red.vertex_to_edge[u])), sign(bit(red.vertex_to_edge[v])));
            if red.triangle_costs[t][corner] != 1 + -(c as i64) * su * sv {
                return Ok(false);
            }
        }
    }
    if red.edge_costs.iter().any(|&c| c != 0) {
        return Ok(false);
    }
    let m = red.graph.edge_count();
    if m <= MAX_FULL_BALANCE_EDGES {
        let offset = instance.edges.len() as i64;
        let mut x = vec![false; m];
        for mask in 0..(1u64 << m) {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = mask >> i & 1 == 1;
            }
            if red.cost(&x) != offset + energy_unchecked(instance, &red.spins(&x)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
