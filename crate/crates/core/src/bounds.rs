//! Counting bounds for flag-no-square triangulations, evaluated in natural-log
//! space, and per-instance sanity checks.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::complex::{validate_closed_pseudomanifold, SimplicialComplex};
use crate::flagcheck::{has_induced_square, is_flag, is_fns};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("the chain needs x ≥ 50, got {0}")]
    PreconditionX(u64),
    #[error("expected a 4-dimensional complex, got dimension {0}")]
    WrongDimension(usize),
    #[error("input is not flag-no-square")]
    NotFns,
    #[error("input is not a closed pseudomanifold: {0}")]
    NotPseudomanifold(String),
}

/// `ln C(n, k)` for real arguments, `-∞` outside `0 ≤ k ≤ n`.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// `ln(e^a + e^b)`.
pub fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Edge budget `(5/√2)·n^{1.5}` of a graph without induced squares and with
/// clique number at most 5.
pub fn edge_bound(n: f64) -> f64 {
    5.0 / 2f64.sqrt() * n.powf(1.5)
}

/// `ln Σ_{i ≤ top} C(n, i)` for integer `n`, summed from `top` down and
/// stopped once the remaining terms are below `e^{-60}` of the total.
fn ln_partial_binomial_sum(n: u64, top: u64) -> f64 {
    let top = top.min(n);
    let mut term = ln_binomial(n as f64, top as f64);
    let mut total = f64::NEG_INFINITY;
    let mut i = top;
    loop {
        total = ln_add(total, term);
        if i == 0 || (2 * i <= n && term < total - 60.0) {
            return total;
        }
        // C(n, i-1) = C(n, i) · i / (n - i + 1)
        term += (i as f64).ln() - ((n - i + 1) as f64).ln();
        i -= 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub edge_count: usize,
    pub edge_bound: f64,
    /// `|E| ≤ edge_bound`.
    pub edge_pass: bool,
    pub has_induced_square: bool,
    pub clique_number: Option<usize>,
    /// The bound is only proved without induced squares and with cliques of
    /// size at most 5; otherwise the comparison is informational.
    pub hypotheses_hold: bool,
    /// Natural logs of the successive upper bounds on `t(x)`.
    pub log_t_chain: Vec<f64>,
    pub chain_pass: bool,
}

impl BoundReport {
    /// `ln` of the final bound `e^{9 x^{1.5} ln x}`.
    pub fn log_t_upper(&self) -> Option<f64> {
        self.log_t_chain.last().copied()
    }
}

/// Compares the edge count of the 1-skeleton with `(5/√2)·n^{1.5}`.
pub fn edge_bound_check(k: &SimplicialComplex) -> BoundReport {
    let g = k.skeleton_graph();
    let n = g.vertex_count();
    let bound = edge_bound(n as f64);
    let square = has_induced_square(k).0;
    let clique_number = is_flag(k).0.then_some(k.dim() + 1);
    BoundReport {
        n,
        edge_count: g.edge_count(),
        edge_bound: bound,
        edge_pass: g.edge_count() as f64 <= bound,
        has_induced_square: square,
        clique_number,
        hypotheses_hold: !square && clique_number.is_some_and(|c| c <= 5),
        log_t_chain: vec![],
        chain_pass: true,
    }
}

/// Evaluates every step of the upper-bound chain for `t(x)`:
///
/// 0. `ln Σ_{y≤x} Σ_{i≤B(y)} C(C(y,2), i)`, `B(y) = (5/√2) y^{1.5}`
/// 1. `ln x + ln Σ_{i≤B(x)} C(C(x,2), i)`
/// 2. `ln B(x)x + ln C(x², B(x))`
/// 3. `ln B(x)x + 5√2 x^{1.5} ln x`
/// 4. `ln 5 + (5√2 x^{1.5} + 2.5) ln x`
/// 5. `ln 5 + 8 x^{1.5} ln x`
/// 6. `9 x^{1.5} ln x`
///
/// and checks that the sequence is strictly increasing.
pub fn t_upper_chain(x: u64) -> Result<BoundReport, BoundsError> {
    if x < 50 {
        return Err(BoundsError::PreconditionX(x));
    }
    let xf = x as f64;
    let lx = xf.ln();
    let b = |y: f64| edge_bound(y);
    let pairs = |y: u64| y * (y - 1) / 2;

    let mut l0 = f64::NEG_INFINITY;
    for y in 1..=x {
        l0 = ln_add(l0, ln_partial_binomial_sum(pairs(y), b(y as f64).floor() as u64));
    }
    let l1 = lx + ln_partial_binomial_sum(pairs(x), b(xf).floor() as u64);
    let l2 = (b(xf) * xf).ln() + ln_binomial(xf * xf, b(xf));
    let l3 = (b(xf) * xf).ln() + 5.0 * 2f64.sqrt() * xf.powf(1.5) * lx;
    let l4 = 5f64.ln() + (5.0 * 2f64.sqrt() * xf.powf(1.5) + 2.5) * lx;
    let l5 = 5f64.ln() + 8.0 * xf.powf(1.5) * lx;
    let l6 = 9.0 * xf.powf(1.5) * lx;
    let chain = vec![l0, l1, l2, l3, l4, l5, l6];
    let chain_pass = chain.iter().all(|v| v.is_finite()) && chain.windows(2).all(|w| w[0] < w[1]);
    Ok(BoundReport {
        n: x as usize,
        edge_count: 0,
        edge_bound: b(xf),
        edge_pass: true,
        has_induced_square: false,
        clique_number: None,
        hypotheses_hold: true,
        log_t_chain: chain,
        chain_pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiVertexReport {
    pub chi: i64,
    pub vertices: usize,
    /// `χ ≥ f₀`.
    pub pass: bool,
}

/// Checks `χ(K) ≥ f₀(K)` for a flag-no-square closed 4-dimensional
/// pseudomanifold. A failure on an fns 4-manifold is a hard error.
pub fn chi_vertex_check(k: &SimplicialComplex) -> Result<ChiVertexReport, BoundsError> {
    if k.dim() != 4 {
        return Err(BoundsError::WrongDimension(k.dim()));
    }
    if !is_fns(k) {
        return Err(BoundsError::NotFns);
    }
    let r = validate_closed_pseudomanifold(k);
    if !r.is_closed_pseudomanifold() {
        return Err(BoundsError::NotPseudomanifold(r.problem.unwrap_or_default()));
    }
    let chi = k.euler_characteristic();
    Ok(ChiVertexReport { chi, vertices: k.vertex_count(), pass: chi >= k.vertex_count() as i64 })
}
