//! Checkable envelopes on walk and absorption probabilities, used as
//! oracles against the solver output.

use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, DenseMatrix};
use crate::markov::AbsorbingChain;

/// `lower ≤ value ≤ upper`, with the tighter side's margin as slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

impl Sandwich {
    pub fn slack(&self) -> f64 {
        (self.value - self.lower).min(self.upper - self.value)
    }
}

/// Row `u` of `m^t`.
fn row_power(m: &CsrMatrix, u: usize, t: usize) -> Vec<f64> {
    let n = m.n_rows();
    let mut cur = vec![0.0; n];
    let mut next = vec![0.0; n];
    cur[u] = 1.0;
    for _ in 0..t {
        m.left_mul(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

fn keep_range(d: &[f64]) -> (f64, f64) {
    d.iter()
        .map(|x| 1.0 - x)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| (lo.min(k), hi.max(k)))
}

/// Envelope on p̃^(t)_uv from the un-absorbed walk p^(t)_uv:
/// `(1−D_uu)·min(1−D)^{t−1}·p^(t) ≤ p̃^(t) ≤ (1−D_uu)·max(1−D)^{t−1}·p^(t)`.
pub fn walk_bounds(chain: &AbsorbingChain, u: usize, v: usize, t: usize) -> Result<Sandwich> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be at least 1".into()));
    }
    let p = row_power(&chain.p, u, t)[v];
    let pt = row_power(&chain.pt, u, t)[v];
    let (lo, hi) = keep_range(&chain.d);
    let ku = 1.0 - chain.d[u];
    let e = (t - 1) as i32;
    Ok(Sandwich {
        lower: ku * lo.powi(e) * p,
        value: pt,
        upper: ku * hi.powi(e) * p,
    })
}

/// Envelope on π_uw (w ≠ u) from geometric reweighting of p^(t)_uw,
/// summed to `truncation` steps. The lower sum is a valid bound as is; the
/// upper sum adds the worst-case tail `max(1−D)^T / (1 − max(1−D))`.
pub fn absorption_bounds(
    chain: &AbsorbingChain,
    pi: &DenseMatrix,
    u: usize,
    w: usize,
    truncation: usize,
) -> Result<Sandwich> {
    if u == w {
        return Err(Error::InvalidParameter("absorption bound needs w ≠ u".into()));
    }
    let n = chain.n();
    let (lo, hi) = keep_range(&chain.d);
    let mut cur = vec![0.0; n];
    let mut next = vec![0.0; n];
    cur[u] = 1.0;
    let (mut s_lo, mut s_hi) = (0.0, 0.0);
    let (mut f_lo, mut f_hi) = (1.0, 1.0);
    for _ in 0..truncation {
        chain.p.left_mul(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        s_lo += f_lo * cur[w];
        s_hi += f_hi * cur[w];
        f_lo *= lo;
        f_hi *= hi;
    }
    // f_hi now equals hi^T.
    s_hi += f_hi / (1.0 - hi);
    let scale = (1.0 - chain.d[u]) * chain.d[w];
    Ok(Sandwich {
        lower: scale * s_lo,
        value: pi[(u, w)],
        upper: scale * s_hi,
    })
}

fn check_triple(u: usize, v: usize, w: usize, n: usize) -> Result<()> {
    if u >= n || v >= n || w >= n {
        return Err(Error::NodeIndex(u.max(v).max(w)));
    }
    if u == v || u == w {
        return Err(Error::InvalidParameter(
            "transitivity bound needs u ≠ v and u ≠ w".into(),
        ));
    }
    Ok(())
}

/// Checks `π_uw ≥ p̃_uw·D_ww + π_uv·π_vw / D_vv` and returns
/// `(holds, π_uw − rhs)`.
///
/// This is the transitivity inequality in its commonly quoted form. It does
/// not hold in general: `π_uv / D_vv` is the expected number of visits to v,
/// which overcounts walks returning to v. See
/// [`first_passage_transitivity_bound`] for the valid version.
pub fn verify_transitivity_bound(
    pi: &DenseMatrix,
    pt: &CsrMatrix,
    d: &[f64],
    u: usize,
    v: usize,
    w: usize,
) -> Result<(bool, f64)> {
    check_triple(u, v, w, d.len())?;
    let rhs = pt.get(u, w) * d[w] + pi[(u, v)] * pi[(v, w)] / d[v];
    let slack = pi[(u, w)] - rhs;
    Ok((slack >= 0.0, slack))
}

/// Checks `π_uw ≥ p̃_uw·D_ww + π_uv·π_vw / π_vv` for distinct u, v, w.
///
/// `π_uv / π_vv` is the probability that a walk from u ever reaches v, so the
/// second term counts walks that reach v and are then absorbed at w, which
/// is disjoint from the one-step absorption u → w.
pub fn first_passage_transitivity_bound(
    pi: &DenseMatrix,
    pt: &CsrMatrix,
    d: &[f64],
    u: usize,
    v: usize,
    w: usize,
) -> Result<(bool, f64)> {
    check_triple(u, v, w, d.len())?;
    if v == w {
        return Err(Error::InvalidParameter("first-passage bound needs v ≠ w".into()));
    }
    let rhs = pt.get(u, w) * d[w] + pi[(u, v)] * pi[(v, w)] / pi[(v, v)];
    let slack = pi[(u, w)] - rhs;
    Ok((slack >= -1e-12, slack))
}
