//! Zig-zag graphs, Kirchhoff polynomials and a Monte Carlo estimate of the
//! parametric period `∫_Δ Ω / Ψ²`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Undirected multigraph-free graph on vertices `0..vertices`; edge `e` of
/// the list carries the Schwinger parameter `α_{e+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        for &(a, b) in &edges {
            if a >= vertices || b >= vertices || a == b {
                return Err(Error::InvalidArgument(format!("bad edge ({a}, {b})")));
            }
        }
        let g = Graph { vertices, edges };
        if !g.is_connected() {
            return Err(Error::InvalidArgument("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn loop_order(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        let merged = self.edges.iter().filter(|&&(a, b)| uf.union(a, b)).count();
        merged + 1 == self.vertices
    }

    pub fn from_json(s: &str) -> Result<Graph> {
        let g: Graph = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Graph::new(g.vertices, g.edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serialises")
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Merge and report whether the classes were distinct.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

/// The `(n+1)`-cycle `v_0 … v_n` with the chords `{v_i, v_{i+2}}`,
/// `i = 0 … n-2`: `n+1` vertices, `2n` edges, `n` loops.
pub fn zigzag_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("zig-zag graphs start at n = 3, got {n}")));
    }
    let v = n + 1;
    let mut edges: Vec<(usize, usize)> = (0..v).map(|i| (i, (i + 1) % v)).collect();
    edges.extend((0..n - 1).map(|i| (i, i + 2)));
    Graph::new(v, edges)
}

/// The wheel with `n` spokes: hub `0`, rim `1 … n`.
pub fn wheel_graph(n: usize) -> Result<Graph> {
    let mut edges: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
    edges.extend((1..=n).map(|i| (i, i % n + 1)));
    Graph::new(n + 1, edges)
}

/// Brute-force isomorphism test over vertex permutations; for small graphs.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.vertices != h.vertices || g.edges.len() != h.edges.len() {
        return false;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    let n = g.vertices;
    let mut adj = vec![vec![0u32; n]; n];
    for &(a, b) in &h.edges {
        adj[a][b] += 1;
        adj[b][a] += 1;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let mut used = adj.clone();
        g.edges.iter().all(|&(a, b)| {
            let (x, y) = (p[a], p[b]);
            if used[x][y] == 0 {
                return false;
            }
            used[x][y] -= 1;
            used[y][x] -= 1;
            true
        })
    })
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return f(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if permutations(p, k + 1, f) {
            return true;
        }
        p.swap(k, i);
    }
    false
}

/// `Ψ_G = Σ_T Π_{e ∉ T} α_e`; each monomial is the set of edges off a
/// spanning tree, as a bit mask, with coefficient one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KirchhoffPoly {
    pub edges: usize,
    pub monomials: Vec<u64>,
    /// Edge indices of each monomial, for evaluation.
    factors: Vec<Vec<usize>>,
}

impl KirchhoffPoly {
    pub fn degree(&self) -> usize {
        self.factors.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn eval(&self, alpha: &[f64]) -> f64 {
        let mut sum = 0.0;
        for f in &self.factors {
            sum += f.iter().map(|&e| alpha[e]).product::<f64>();
        }
        sum
    }
}

/// Spanning trees by enumerating `(V-1)`-subsets of edges.
pub fn kirchhoff(g: &Graph) -> KirchhoffPoly {
    let e = g.edges.len();
    assert!(e < 64, "edge sets are stored as 64-bit masks");
    let t = g.vertices - 1;
    let mut monomials = Vec::new();
    let mut chosen = Vec::with_capacity(t);
    subsets(e, t, 0, &mut chosen, &mut |tree| {
        let mut uf = UnionFind::new(g.vertices);
        if tree.iter().all(|&k| uf.union(g.edges[k].0, g.edges[k].1)) {
            let mask = tree.iter().fold((1u64 << e) - 1, |m, &k| m & !(1u64 << k));
            monomials.push(mask);
        }
    });
    monomials.sort_unstable();
    let factors = monomials.iter().map(|&m| (0..e).filter(|k| m >> k & 1 == 1).collect()).collect();
    KirchhoffPoly { edges: e, monomials, factors }
}

fn subsets(n: usize, k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if chosen.len() == k {
        f(chosen);
        return;
    }
    for i in start..n {
        if n - i < k - chosen.len() {
            break;
        }
        chosen.push(i);
        subsets(n, k, i + 1, chosen, f);
        chosen.pop();
    }
}

/// Number of spanning trees by the matrix-tree theorem: determinant of the
/// Laplacian with the last row and column removed, by fraction-free
/// Bareiss elimination.
pub fn spanning_tree_count(g: &Graph) -> BigInt {
    let n = g.vertices - 1;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for &(a, b) in &g.edges {
        for (x, y) in [(a, b), (b, a)] {
            if x < n {
                m[x][x] += 1;
                if y < n {
                    m[x][y] -= 1;
                }
            }
        }
    }
    let mut prev = BigInt::one();
    let mut sign = 1;
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    m[n - 1][n - 1].clone() * sign
}

/// Result of [`mc_period`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub blocks: usize,
    /// Dirichlet shape of the sampling density.
    pub shape: f64,
    pub block_means: Vec<f64>,
}

pub const MC_BLOCKS: usize = 32;

/// Sampling shape used by [`mc_period`]: `1/E` for `E` edges.
///
/// Near a face where the edges of a subgraph with `h` loops and `N` edges
/// shrink, `Ψ⁻²` grows like `λ^{-2h}`. Under Dirichlet(`a`) sampling the
/// second moment of the weight converges iff `N(2-a) > 4h` for every such
/// subgraph; for primitive graphs the worst case `N = 2h+1`, `h = n-1`
/// gives `a < 2/(2n-1)`. Uniform sampling (`a = 1`) has infinite variance.
/// With `a = 1/E` the fourth moment is finite too, and `Γ(Ea) = 1`.
pub fn default_shape(g: &Graph) -> f64 {
    1.0 / g.edges.len() as f64
}

/// `∫_Δ Ω/Ψ²` in the chart `Σ α = 1` by importance sampling with the
/// default shape; see [`mc_period_with_shape`].
pub fn mc_period(g: &Graph, samples: u64, seed: u64, workers: usize) -> Result<McEstimate> {
    mc_period_with_shape(g, samples, seed, workers, default_shape(g))
}

/// `∫_Δ Ω/Ψ² = E_q[Ψ(α)⁻² / q(α)]` for `α` drawn from the symmetric
/// Dirichlet density `q` of shape `a` on the simplex (`a = 1` is uniform,
/// `q = (E-1)!`).
///
/// The samples are split into [`MC_BLOCKS`] blocks; block `b` draws from
/// ChaCha8 stream `b` of `seed`, so the result does not depend on the
/// number of workers. The estimate is the median of the block means and
/// the standard error is `1.2533 · sd(block means) / √blocks`, the
/// asymptotic standard error of a median of normal means.
pub fn mc_period_with_shape(g: &Graph, samples: u64, seed: u64, workers: usize, shape: f64) -> Result<McEstimate> {
    let psi = kirchhoff(g);
    let e = g.edges.len();
    if 2 * psi.degree() != e {
        return Err(Error::InvalidArgument(format!(
            "integrand is not projective: deg Ψ² = {} but {} edge variables",
            2 * psi.degree(),
            e
        )));
    }
    if samples < MC_BLOCKS as u64 * 2 {
        return Err(Error::InvalidArgument(format!("need at least {} samples", MC_BLOCKS * 2)));
    }
    if !(shape > 0.0 && shape <= 1.0) {
        return Err(Error::InvalidArgument(format!("Dirichlet shape must lie in (0, 1], got {shape}")));
    }
    let gamma = Gamma::new(shape, 1.0).map_err(|err| Error::InvalidArgument(err.to_string()))?;
    // log(1/q) up to the factor Π α^{1-a}: E lnΓ(a) - lnΓ(E a).
    let log_norm = e as f64 * ln_gamma(shape) - ln_gamma(e as f64 * shape);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|err| Error::InvalidArgument(err.to_string()))?;
    let per = samples / MC_BLOCKS as u64;
    let extra = samples % MC_BLOCKS as u64;
    let block_means: Vec<f64> = pool.install(|| {
        (0..MC_BLOCKS)
            .into_par_iter()
            .map(|b| {
                let count = per + u64::from((b as u64) < extra);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(b as u64);
                block_mean(&psi, count, &gamma, shape, log_norm, &mut rng)
            })
            .collect()
    });
    let mut sorted = block_means.clone();
    sorted.sort_by(f64::total_cmp);
    let median = 0.5 * (sorted[MC_BLOCKS / 2 - 1] + sorted[MC_BLOCKS / 2]);
    let mean = block_means.iter().sum::<f64>() / MC_BLOCKS as f64;
    let var = block_means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (MC_BLOCKS - 1) as f64;
    let std_error = 1.2533 * (var / MC_BLOCKS as f64).sqrt();
    Ok(McEstimate { estimate: median, std_error, samples, blocks: MC_BLOCKS, shape, block_means })
}

/// Mean importance weight over `count` Dirichlet points, Neumaier-summed.
fn block_mean(psi: &KirchhoffPoly, count: u64, gamma: &Gamma<f64>, a: f64, log_norm: f64, rng: &mut ChaCha8Rng) -> f64 {
    let e = psi.edges;
    let n = psi.degree() as f64;
    let mut alpha = vec![0.0; e];
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for _ in 0..count {
        let mut total = 0.0;
        let mut top: f64 = 0.0;
        for x in alpha.iter_mut() {
            *x = gamma.sample(rng);
            total += *x;
            top = top.max(*x);
        }
        // Ψ is homogeneous of degree n: evaluate on α/top to stay in range,
        // then move to the chart Σα = 1.
        let mut log_prod = 0.0;
        for x in alpha.iter_mut() {
            log_prod += (*x / total).ln();
            *x /= top;
        }
        let log_psi = psi.eval(&alpha).ln() + n * (top / total).ln();
        let x = (log_norm + (1.0 - a) * log_prod - 2.0 * log_psi).exp();
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    (sum + comp) / count as f64
}
