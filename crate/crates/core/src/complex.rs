//! Left-right Cayley complexes: squares, local views, and the derived graphs.
//!
//! Vertices are numbered `0..2|G|`: vertex `g` is `(g, 0)` and vertex
//! `|G| + g` is `(g, 1)`. Generator positions (indices into A and B) are used
//! wherever a triple `(g, a, b)` is stored.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{check_symmetric_set, check_tnc, FiniteGroup, GeneratorSet, Side, TncVerdict};

/// Largest vertex count accepted by the dense eigensolver.
pub const SPECTRUM_GUARD: usize = 4096;
const EIGEN_TOL: f64 = 1e-9;

/// A square `{(g,0), (ag,1), (gb,1), (agb,0)}` stored by its canonical triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Square {
    pub g: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Vertex {
    pub element: usize,
    pub side: u8,
}

/// An undirected multigraph given by its edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Multigraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Common degree, if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        let first = *d.first()?;
        d.iter().all(|&x| x == first).then_some(first)
    }

    /// Adjacency matrix with edge multiplicities; a loop counts twice.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; self.vertices]; self.vertices];
        for &(u, v) in &self.edges {
            m[u][v] += 1;
            m[v][u] += 1;
        }
        m
    }

    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
            }
        }
        (0..self.vertices).filter(|&x| find(&mut parent, x) == x).count()
    }

    /// Full adjacency spectrum, ascending.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        if self.vertices > SPECTRUM_GUARD {
            return Err(Error::capacity("spectrum-vertices", SPECTRUM_GUARD, self.vertices));
        }
        let adj = self.adjacency();
        let m = DMatrix::from_fn(self.vertices, self.vertices, |i, j| adj[i][j] as f64);
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        Ok(ev)
    }

    /// λ(𝒢): the largest |λ| over eigenvalues other than ±degree.
    /// Returns 0 when every eigenvalue is ±degree.
    pub fn second_eigenvalue(&self) -> Result<f64> {
        let degree = self
            .regular_degree()
            .ok_or_else(|| Error::Contract("second eigenvalue needs a regular graph".into()))? as f64;
        let lambda = self
            .spectrum()?
            .into_iter()
            .filter(|x| (x.abs() - degree).abs() > EIGEN_TOL * degree.max(1.0))
            .map(f64::abs)
            .fold(0.0, f64::max);
        Ok(lambda)
    }
}

/// Ramanujan bound 2√(Δ−1).
pub fn ramanujan_bound(degree: usize) -> f64 {
    2.0 * ((degree as f64) - 1.0).max(0.0).sqrt()
}

/// Double cover of the Cayley graph: `(g,0) — (sg,1)` for a left set,
/// `(g,0) — (gs,1)` for a right set.
pub fn cayley_double_cover(group: &FiniteGroup, set: &GeneratorSet) -> Multigraph {
    let n = group.order();
    let mut edges = Vec::with_capacity(n * set.len());
    for g in 0..n {
        for &s in set.elements() {
            let h = match set.side() {
                Side::Left => group.mul(s, g),
                Side::Right => group.mul(g, s),
            };
            edges.push((g, n + h));
        }
    }
    Multigraph { vertices: 2 * n, edges }
}

/// The four graphs derived from a complex.
#[derive(Clone, Debug)]
pub struct ComplexGraphs {
    pub g_a: Multigraph,
    pub g_b: Multigraph,
    pub g_union: Multigraph,
    pub g_square0: Multigraph,
    pub g_square1: Multigraph,
}

/// A left-right Cayley complex satisfying total no-conjugacy.
#[derive(Clone, Debug)]
pub struct LeftRightComplex {
    group: FiniteGroup,
    a_set: GeneratorSet,
    b_set: GeneratorSet,
    delta: usize,
    inv_a: Vec<usize>,
    inv_b: Vec<usize>,
    squares: Vec<Square>,
    /// Square id of every raw triple, indexed `g·Δ² + a·Δ + b`.
    square_of: Vec<u32>,
}

impl LeftRightComplex {
    pub fn build(group: FiniteGroup, a_set: GeneratorSet, b_set: GeneratorSet) -> Result<Self> {
        if a_set.side() != Side::Left || b_set.side() != Side::Right {
            return Err(Error::Complex("A must act on the left and B on the right".into()));
        }
        if a_set.len() != b_set.len() || a_set.is_empty() {
            return Err(Error::Complex(format!(
                "|A| = {} and |B| = {} must be equal and positive",
                a_set.len(),
                b_set.len()
            )));
        }
        for (name, set) in [("A", &a_set), ("B", &b_set)] {
            if !check_symmetric_set(&group, set) {
                return Err(Error::Complex(format!("{name} must be inverse-closed and avoid the identity")));
            }
        }
        if let TncVerdict::Violated { a, g, b } = check_tnc(&group, &a_set, &b_set)? {
            return Err(Error::Tnc { a, g, b });
        }
        let delta = a_set.len();
        let inv_a = a_set.inverse_positions(&group).expect("checked symmetric");
        let inv_b = b_set.inverse_positions(&group).expect("checked symmetric");
        let n = group.order();
        let raw = n * delta * delta;
        if raw > u32::MAX as usize {
            return Err(Error::capacity("raw-square-triples", u32::MAX as usize, raw));
        }
        let mut square_of = vec![u32::MAX; raw];
        let mut squares = Vec::with_capacity(raw / 2);
        let key = |g: usize, i: usize, j: usize| (g * delta + i) * delta + j;
        for g in 0..n {
            for i in 0..delta {
                for j in 0..delta {
                    if square_of[key(g, i, j)] != u32::MAX {
                        continue;
                    }
                    let agb = group.mul(group.mul(a_set.elements()[i], g), b_set.elements()[j]);
                    let partner = (agb, inv_a[i], inv_b[j]);
                    if partner == (g, i, j) {
                        return Err(Error::Internal(format!(
                            "square involution fixes ({g}, {i}, {j}) although TNC holds"
                        )));
                    }
                    // Enumeration is lexicographic, so the first triple met is the smaller one.
                    debug_assert!((g, i, j) < partner);
                    let id = squares.len() as u32;
                    square_of[key(g, i, j)] = id;
                    square_of[key(partner.0, partner.1, partner.2)] = id;
                    squares.push(Square { g, a: i, b: j });
                }
            }
        }
        Ok(LeftRightComplex {
            group,
            a_set,
            b_set,
            delta,
            inv_a,
            inv_b,
            squares,
            square_of,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn a_set(&self) -> &GeneratorSet {
        &self.a_set
    }

    pub fn b_set(&self) -> &GeneratorSet {
        &self.b_set
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn inverse_a(&self, i: usize) -> usize {
        self.inv_a[i]
    }

    pub fn inverse_b(&self, j: usize) -> usize {
        self.inv_b[j]
    }

    pub fn n_squares(&self) -> usize {
        self.squares.len()
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    /// Vertices on one side, `|G|`.
    pub fn side_size(&self) -> usize {
        self.group.order()
    }

    pub fn vertex(&self, v: usize) -> Vertex {
        let n = self.group.order();
        Vertex {
            element: v % n,
            side: (v / n) as u8,
        }
    }

    /// Id of the square containing the raw triple `(g, A[i], B[j])`.
    pub fn square_id(&self, g: usize, i: usize, j: usize) -> usize {
        self.square_of[(g * self.delta + i) * self.delta + j] as usize
    }

    /// The four vertices of a square: `(g,0), (agb,0), (ag,1), (gb,1)`.
    pub fn square_vertices(&self, q: usize) -> [usize; 4] {
        let Square { g, a, b } = self.squares[q];
        let n = self.group.order();
        let ag = self.group.mul(self.a_set.elements()[a], g);
        let gb = self.group.mul(g, self.b_set.elements()[b]);
        let agb = self.group.mul(ag, self.b_set.elements()[b]);
        [g, agb, n + ag, n + gb]
    }

    /// φ_v as an array: entry `i·Δ + j` is the square at grid position (A[i], B[j]).
    pub fn local_view(&self, v: usize) -> Vec<usize> {
        let Vertex { element: g, side } = self.vertex(v);
        let d = self.delta;
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(if side == 0 {
                    self.square_id(g, i, j)
                } else {
                    let ag = self.group.mul(self.a_set.elements()[i], g);
                    self.square_id(ag, self.inv_a[i], j)
                });
            }
        }
        out
    }

    /// Local views of all vertices on one side, indexed by group element.
    pub fn side_views(&self, side: u8) -> Vec<Vec<usize>> {
        let n = self.group.order();
        (0..n).map(|g| self.local_view(side as usize * n + g)).collect()
    }

    pub fn graphs(&self) -> ComplexGraphs {
        let n = self.group.order();
        let g_a = cayley_double_cover(&self.group, &self.a_set);
        let g_b = cayley_double_cover(&self.group, &self.b_set);
        let mut union_edges = g_a.edges.clone();
        union_edges.extend(&g_b.edges);
        let mut e0 = Vec::with_capacity(self.squares.len());
        let mut e1 = Vec::with_capacity(self.squares.len());
        for q in 0..self.squares.len() {
            let [g, agb, ag, gb] = self.square_vertices(q);
            e0.push((g, agb));
            e1.push((ag - n, gb - n));
        }
        ComplexGraphs {
            g_a,
            g_b,
            g_union: Multigraph {
                vertices: 2 * n,
                edges: union_edges,
            },
            g_square0: Multigraph { vertices: n, edges: e0 },
            g_square1: Multigraph { vertices: n, edges: e1 },
        }
    }

    pub fn report(&self) -> Result<ComplexReport> {
        let gr = self.graphs();
        Ok(ComplexReport {
            order: self.group.order(),
            delta: self.delta,
            n_squares: Some(self.n_squares()),
            tnc: true,
            tnc_witness: None,
            lambda_a: gr.g_a.second_eigenvalue()?,
            lambda_b: gr.g_b.second_eigenvalue()?,
            lambda_union: gr.g_union.second_eigenvalue()?,
            lambda_square: Some(gr.g_square0.second_eigenvalue()?.max(gr.g_square1.second_eigenvalue()?)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexReport {
    pub order: usize,
    pub delta: usize,
    pub n_squares: Option<usize>,
    pub tnc: bool,
    pub tnc_witness: Option<TncVerdict>,
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub lambda_union: f64,
    pub lambda_square: Option<f64>,
}

/// Summary of a would-be complex; when TNC fails the square data are absent
/// and the witness is recorded.
pub fn complex_report(group: &FiniteGroup, a_set: &GeneratorSet, b_set: &GeneratorSet) -> Result<ComplexReport> {
    let verdict = check_tnc(group, a_set, b_set)?;
    if verdict.holds() {
        return LeftRightComplex::build(group.clone(), a_set.clone(), b_set.clone())?.report();
    }
    let g_a = cayley_double_cover(group, a_set);
    let g_b = cayley_double_cover(group, b_set);
    let mut union = g_a.clone();
    union.edges.extend(&g_b.edges);
    Ok(ComplexReport {
        order: group.order(),
        delta: a_set.len(),
        n_squares: None,
        tnc: false,
        tnc_witness: Some(verdict),
        lambda_a: g_a.second_eigenvalue()?,
        lambda_b: g_b.second_eigenvalue()?,
        lambda_union: union.second_eigenvalue()?,
        lambda_square: None,
    })
}

/// Integer matrix product, for adjacency identities.
pub fn int_mat_mul(x: &[Vec<u64>], y: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = x.len();
    let m = y.first().map_or(0, Vec::len);
    let mut out = vec![vec![0u64; m]; n];
    for i in 0..n {
        for (k, &xik) in x[i].iter().enumerate() {
            if xik != 0 {
                for j in 0..m {
                    out[i][j] += xik * y[k][j];
                }
            }
        }
    }
    out
}
