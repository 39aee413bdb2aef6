//! The absorbing chain: transition matrix P, absorption vector D,
//! effective transition P̃ = (I − D)P, finite-horizon propagation and the
//! asymptotic absorption matrix Π = (I − P̃)⁻¹ D.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{CsrMatrix, DenseLu, DenseMatrix, SparseLu};
use crate::weights::WeightTransform;

/// Construction invariants (row sums of P and P̃).
pub const BUILD_TOL: f64 = 1e-12;
/// Row sums of Π and of finite-horizon mixtures.
pub const ROW_SUM_TOL: f64 = 1e-9;

/// How absorption probabilities D_uu are assigned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AbsorptionModel {
    Constant(f64),
    /// `1 / (d_out + 1)`
    DegreeBased,
    /// `1 / (d_w,out + 1)` over α-transformed weights
    WeightedDegreeBased,
}

impl Default for AbsorptionModel {
    fn default() -> Self {
        AbsorptionModel::DegreeBased
    }
}

impl FromStr for AbsorptionModel {
    type Err = Error;

    /// `const:<a>`, `degree` or `wdegree`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degree" => Ok(AbsorptionModel::DegreeBased),
            "wdegree" => Ok(AbsorptionModel::WeightedDegreeBased),
            _ => {
                let a = s.strip_prefix("const:").ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "absorption `{s}` (expected const:<a> | degree | wdegree)"
                    ))
                })?;
                let a: f64 = a
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("absorption constant `{a}`")))?;
                if !(a > 0.0 && a < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "absorption constant {a} outside (0,1)"
                    )));
                }
                Ok(AbsorptionModel::Constant(a))
            }
        }
    }
}

impl fmt::Display for AbsorptionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsorptionModel::Constant(a) => write!(f, "const:{a}"),
            AbsorptionModel::DegreeBased => write!(f, "degree"),
            AbsorptionModel::WeightedDegreeBased => write!(f, "wdegree"),
        }
    }
}

/// Walk length: a finite number of steps or the absorption limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Horizon {
    Finite(usize),
    Infinite,
}

impl Default for Horizon {
    fn default() -> Self {
        Horizon::Infinite
    }
}

impl FromStr for Horizon {
    type Err = Error;

    /// `t:<steps>` or `inf`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Horizon::Infinite);
        }
        let t = s
            .strip_prefix("t:")
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| Error::InvalidParameter(format!("horizon `{s}` (expected t:<n> | inf)")))?;
        if t == 0 {
            return Err(Error::InvalidParameter("horizon t must be at least 1".into()));
        }
        Ok(Horizon::Finite(t))
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Finite(t) => write!(f, "t:{t}"),
            Horizon::Infinite => write!(f, "inf"),
        }
    }
}

/// Row-stochastic P over α-transformed weights.
pub fn build_transition(g: &Graph, alpha: WeightTransform) -> Result<CsrMatrix> {
    let rows = (0..g.n())
        .map(|u| {
            let edges = g.out_edges(u);
            let total: f64 = edges.iter().map(|&(_, w)| alpha.apply(w)).sum();
            if !(total > 0.0) {
                return Err(Error::ZeroRow(g.label(u).to_string()));
            }
            Ok(edges
                .iter()
                .map(|&(v, w)| (v, alpha.apply(w) / total))
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CsrMatrix::from_rows(g.n(), rows))
}

/// Diagonal of D.
pub fn build_absorption(g: &Graph, model: AbsorptionModel, alpha: WeightTransform) -> Result<Vec<f64>> {
    match model {
        AbsorptionModel::Constant(a) => {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "absorption constant {a} outside (0,1)"
                )));
            }
            Ok(vec![a; g.n()])
        }
        AbsorptionModel::DegreeBased => (0..g.n())
            .map(|u| Ok(1.0 / (g.out_degree(u)? as f64 + 1.0)))
            .collect(),
        AbsorptionModel::WeightedDegreeBased => (0..g.n())
            .map(|u| Ok(1.0 / (g.weighted_out_degree(u, alpha)? + 1.0)))
            .collect(),
    }
}

/// P̃ = (I − D)P.
pub fn effective_transition(p: &CsrMatrix, d: &[f64]) -> CsrMatrix {
    assert_eq!(p.n_rows(), d.len());
    let keep: Vec<f64> = d.iter().map(|x| 1.0 - x).collect();
    p.scale_rows(&keep)
}

/// P, D and P̃ for one graph and configuration.
#[derive(Debug, Clone)]
pub struct AbsorbingChain {
    pub p: CsrMatrix,
    pub d: Vec<f64>,
    pub pt: CsrMatrix,
}

impl AbsorbingChain {
    pub fn new(g: &Graph, alpha: WeightTransform, model: AbsorptionModel) -> Result<Self> {
        if !g.is_augmented() {
            return Err(Error::InvalidParameter(
                "graph must carry a self-loop on every node".into(),
            ));
        }
        let p = build_transition(g, alpha)?;
        let d = build_absorption(g, model, alpha)?;
        let pt = effective_transition(&p, &d);
        Ok(AbsorbingChain { p, d, pt })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }
}

/// Both blocks of the t-step augmented chain restricted to some source rows.
#[derive(Debug, Clone)]
pub struct FiniteBlocks {
    pub t: usize,
    /// Source node of each row.
    pub sources: Vec<usize>,
    /// P̃^t
    pub transient: DenseMatrix,
    /// (Σ_{j<t} P̃^j) D
    pub absorbed: DenseMatrix,
}

impl FiniteBlocks {
    /// q_uv = p̃^(t)_uv + p^(t)_uv', the walker's location mass at v.
    pub fn mixture(&self) -> DenseMatrix {
        let mut q = self.transient.clone();
        for (a, b) in q.as_mut_slice().iter_mut().zip(self.absorbed.as_slice()) {
            *a += b;
        }
        q
    }
}

/// Blocks of P̂^t for the listed source rows, by vector-times-matrix
/// iteration.
pub fn propagate_rows(pt: &CsrMatrix, d: &[f64], t: usize, sources: &[usize]) -> Result<FiniteBlocks> {
    if t == 0 {
        return Err(Error::InvalidParameter("horizon t must be at least 1".into()));
    }
    let n = d.len();
    let mut transient = DenseMatrix::zeros(sources.len(), n);
    let mut absorbed = DenseMatrix::zeros(sources.len(), n);
    transient
        .as_mut_slice()
        .par_chunks_mut(n)
        .zip(absorbed.as_mut_slice().par_chunks_mut(n))
        .zip(sources.par_iter())
        .for_each(|((tr, ab), &u)| {
            let mut cur = vec![0.0; n];
            let mut next = vec![0.0; n];
            cur[u] = 1.0;
            for _ in 0..t {
                for v in 0..n {
                    ab[v] += cur[v] * d[v];
                }
                pt.left_mul(&cur, &mut next);
                std::mem::swap(&mut cur, &mut next);
            }
            tr.copy_from_slice(&cur);
        });
    Ok(FiniteBlocks {
        t,
        sources: sources.to_vec(),
        transient,
        absorbed,
    })
}

/// Both blocks of P̂^t for every source.
pub fn propagate_finite(pt: &CsrMatrix, d: &[f64], t: usize) -> Result<FiniteBlocks> {
    let all: Vec<usize> = (0..d.len()).collect();
    propagate_rows(pt, d, t, &all)
}

/// Solver selection for Π.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Graphs with fewer nodes use dense LU.
    pub dense_threshold: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { dense_threshold: 512 }
    }
}

fn identity_minus(pt: &CsrMatrix) -> CsrMatrix {
    let rows = (0..pt.n_rows())
        .map(|i| {
            let mut row: Vec<(usize, f64)> = pt.row(i).map(|(j, v)| (j, -v)).collect();
            match row.binary_search_by_key(&i, |e| e.0) {
                Ok(k) => row[k].1 += 1.0,
                Err(k) => row.insert(k, (i, 1.0)),
            }
            row
        })
        .collect();
    CsrMatrix::from_rows(pt.n_cols(), rows)
}

/// Π = (I − P̃)⁻¹ D, one row per source.
pub fn asymptotic_absorption(pt: &CsrMatrix, d: &[f64], cfg: SolverConfig) -> Result<DenseMatrix> {
    let all: Vec<usize> = (0..d.len()).collect();
    asymptotic_rows(pt, d, cfg, &all)
}

enum Factor {
    Dense(DenseLu),
    Sparse(SparseLu),
}

/// Rows `sources` of Π.
///
/// Row u is `e_uᵀ (I − P̃)⁻¹` scaled by D, i.e. a transposed solve against
/// a single factorisation. Rows are solved in parallel.
pub fn asymptotic_rows(
    pt: &CsrMatrix,
    d: &[f64],
    cfg: SolverConfig,
    sources: &[usize],
) -> Result<DenseMatrix> {
    let n = d.len();
    if d.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::InvalidParameter(
            "every absorption probability must lie in (0,1]".into(),
        ));
    }
    let a = identity_minus(pt);
    let factor = if n < cfg.dense_threshold {
        Factor::Dense(DenseLu::factor(&a.to_dense().transpose())?)
    } else {
        let lu = SparseLu::factor(&a)?;
        log::debug!("sparse LU: n={n}, fill={}", lu.fill());
        Factor::Sparse(lu)
    };
    let mut pi = DenseMatrix::zeros(sources.len(), n);
    pi.as_mut_slice()
        .par_chunks_mut(n.max(1))
        .zip(sources.par_iter())
        .for_each(|(row, &u)| {
            let mut e = vec![0.0; n];
            e[u] = 1.0;
            let y = match &factor {
                Factor::Dense(lu) => lu.solve(&e),
                Factor::Sparse(lu) => lu.solve_transpose(&e),
            };
            for ((r, y), dv) in row.iter_mut().zip(y).zip(d) {
                *r = y * dv;
            }
        });
    for (k, &u) in sources.iter().enumerate() {
        let s: f64 = pi.row(k).iter().sum();
        if !((s - 1.0).abs() <= ROW_SUM_TOL) {
            return Err(Error::Numerical(format!(
                "absorption row {u} sums to {s}, expected 1"
            )));
        }
    }
    Ok(pi)
}

/// Per-source destination distribution at a horizon: Π at infinity, the
/// finite mixture p̃^(t) + p^(t)' otherwise.
#[derive(Debug, Clone)]
pub struct AbsorptionDistribution {
    pub horizon: Horizon,
    pub q: DenseMatrix,
}

impl AbsorptionDistribution {
    pub fn compute(chain: &AbsorbingChain, horizon: Horizon, cfg: SolverConfig) -> Result<Self> {
        let q = match horizon {
            Horizon::Infinite => asymptotic_absorption(&chain.pt, &chain.d, cfg)?,
            Horizon::Finite(t) => propagate_finite(&chain.pt, &chain.d, t)?.mixture(),
        };
        Ok(AbsorptionDistribution { horizon, q })
    }

    pub fn n(&self) -> usize {
        self.q.rows()
    }

    pub fn row(&self, u: usize) -> &[f64] {
        self.q.row(u)
    }
}
