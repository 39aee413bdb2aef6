//! Edge-weight conversion α and node weight μ.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Conversion α applied to edge weights before normalisation.
///
/// Zero weights map to zero under every kind, so a zero-weight edge carries
/// no walk probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WeightTransform {
    Unit,
    Identity,
    Power(f64),
}

impl WeightTransform {
    pub fn apply(self, w: f64) -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        match self {
            WeightTransform::Unit => 1.0,
            WeightTransform::Identity => w,
            WeightTransform::Power(b) => w.powf(b),
        }
    }
}

impl Default for WeightTransform {
    fn default() -> Self {
        WeightTransform::Unit
    }
}

fn param(s: &str, what: &str) -> Result<f64> {
    let v: f64 = s
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{what}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{what}: `{s}` is not finite")));
    }
    Ok(v)
}

impl FromStr for WeightTransform {
    type Err = Error;

    /// `unit`, `weight` or `pow:<beta>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(WeightTransform::Unit),
            "weight" => Ok(WeightTransform::Identity),
            _ => match s.strip_prefix("pow:") {
                Some(b) => Ok(WeightTransform::Power(param(b, "alpha exponent")?)),
                None => Err(Error::InvalidParameter(format!(
                    "alpha `{s}` (expected unit | weight | pow:<beta>)"
                ))),
            },
        }
    }
}

impl fmt::Display for WeightTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightTransform::Unit => write!(f, "unit"),
            WeightTransform::Identity => write!(f, "weight"),
            WeightTransform::Power(b) => write!(f, "pow:{b}"),
        }
    }
}

/// Node weight μ used as a multiplier on each destination's entropy term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NodeWeight {
    Unit,
    /// `(d_w,out / d_out)^γ`
    DegreeRatio(f64),
}

impl Default for NodeWeight {
    fn default() -> Self {
        NodeWeight::Unit
    }
}

impl FromStr for NodeWeight {
    type Err = Error;

    /// `unit` or `ratio:<gamma>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "unit" {
            return Ok(NodeWeight::Unit);
        }
        match s.strip_prefix("ratio:") {
            Some(g) => Ok(NodeWeight::DegreeRatio(param(g, "mu exponent")?)),
            None => Err(Error::InvalidParameter(format!(
                "mu `{s}` (expected unit | ratio:<gamma>)"
            ))),
        }
    }
}

impl fmt::Display for NodeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeWeight::Unit => write!(f, "unit"),
            NodeWeight::DegreeRatio(g) => write!(f, "ratio:{g}"),
        }
    }
}

/// μ(u), with d_w,out taken over α-transformed weights.
pub fn node_weight(g: &Graph, u: usize, mu: NodeWeight, alpha: WeightTransform) -> Result<f64> {
    match mu {
        NodeWeight::Unit => Ok(1.0),
        NodeWeight::DegreeRatio(gamma) => {
            let d = g.out_degree(u)?;
            if d == 0 || gamma == 0.0 {
                return Ok(1.0);
            }
            let dw = g.weighted_out_degree(u, alpha)?;
            Ok((dw / d as f64).powf(gamma))
        }
    }
}

/// μ for every node.
pub fn node_weights(g: &Graph, mu: NodeWeight, alpha: WeightTransform) -> Vec<f64> {
    (0..g.n())
        .map(|u| node_weight(g, u, mu, alpha).expect("index in range"))
        .collect()
}
