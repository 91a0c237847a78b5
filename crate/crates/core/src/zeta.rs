//! Ihara zeta functions and Artin-Ihara L-functions of graphs and hypergraphs.
//!
//! Every function here returns the reciprocal `ζ⁻¹` or `L⁻¹`: an exact
//! polynomial for the determinant routes, a truncated series for the Euler
//! routes. Hypergraph functions are computed on the incidence graph `B_H`
//! and brought back by `u² → u`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::algebra::{Cyclo, CycloMatrix, CycloPoly, Rational, ScalarMatrix};
use crate::covering::{edge_frobenius_table, frobenius, FreeCovering, SheetAssignment};
use crate::cycles::{
    closed_walk_counts, enumerate_hypergraph_primes_in, prime_counts_from_traces,
};
use crate::error::{Error, Result};
use crate::hypergraph::{incidence_graph, Graph, Hypergraph};
use crate::representation::{validate_irreps, EntryDoc, Representation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// `det(I − u·W₁)`.
    EdgeDet,
    /// `(1 − u²)^{r−1} det(I − Au + (D − I)u²)`.
    ThreeTerm,
    /// Product of Euler factors over explicitly enumerated prime classes.
    Euler,
    /// Euler product with prime counts recovered from closed-path counts.
    EulerCensus,
    /// `exp(Σ Nₙ uⁿ / n)` from (twisted) closed-path counts.
    TraceExp,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::EdgeDet => "edge-det",
            Method::ThreeTerm => "three-term",
            Method::Euler => "euler",
            Method::EulerCensus => "euler-census",
            Method::TraceExp => "trace-exp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Method::EdgeDet,
            Method::ThreeTerm,
            Method::Euler,
            Method::EulerCensus,
            Method::TraceExp,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
    }

    pub fn is_series(self) -> bool {
        matches!(self, Method::Euler | Method::EulerCensus | Method::TraceExp)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A reciprocal zeta or L-function with the route that produced it.
///
/// For series methods `reciprocal` is the series inverse of the Euler
/// product, truncated at `truncation`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaResult {
    pub reciprocal: CycloPoly,
    pub method: Method,
    pub truncation: Option<usize>,
}

impl ZetaResult {
    fn exact(reciprocal: CycloPoly, method: Method) -> Self {
        ZetaResult {
            reciprocal,
            method,
            truncation: None,
        }
    }

    /// Builds a result from an Euler-type series for `ζ` itself.
    fn from_series(series: CycloPoly, method: Method, n: usize) -> Result<Self> {
        Ok(ZetaResult {
            reciprocal: series.series_inverse(n)?,
            method,
            truncation: Some(n),
        })
    }

    /// Coefficients `0..=N` of `ζ` itself.
    pub fn series(&self, n: usize) -> Result<CycloPoly> {
        Ok(self.reciprocal.series_inverse(n)?)
    }

    /// Coefficient list of the reciprocal, padded through the truncation.
    pub fn coefficient_docs(&self) -> Vec<EntryDoc> {
        let len = match self.truncation {
            Some(n) => n + 1,
            None => self.reciprocal.coeffs().len(),
        };
        (0..len)
            .map(|k| EntryDoc::from_cyclo(&self.reciprocal.coeff(k)))
            .collect()
    }
}

impl Serialize for ZetaResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ZetaResult", 3)?;
        st.serialize_field("reciprocal_coeffs", &self.coefficient_docs())?;
        st.serialize_field("method", self.method.as_str())?;
        st.serialize_field("truncation", &self.truncation)?;
        st.end()
    }
}

/// An L-function result together with what it was computed for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LFunctionResult {
    #[serde(flatten)]
    pub result: ZetaResult,
    pub representation_dim: usize,
    pub representation_order: u32,
    pub group_order: usize,
    pub base_vertices: usize,
    pub cover_vertices: usize,
}

impl LFunctionResult {
    fn new(result: ZetaResult, cover: &FreeCovering, rep: &Representation) -> Self {
        LFunctionResult {
            result,
            representation_dim: rep.dim(),
            representation_order: rep.order(),
            group_order: cover.group().order(),
            base_vertices: cover.base().num_vertices(),
            cover_vertices: cover.cover().num_vertices(),
        }
    }
}

/// The edge adjacency matrix: `W₁[a][b] = 1` iff `b` continues `a` without
/// backtracking.
pub fn edge_adjacency(g: &Graph) -> ScalarMatrix {
    let m = g.num_directed();
    let mut w = ScalarMatrix::zeros(1, m, m);
    for a in 0..m {
        for b in g.successors(a) {
            w.set(a, b, Cyclo::one(1));
        }
    }
    w
}

pub fn graph_zeta_edge_det(g: &Graph) -> CycloPoly {
    edge_adjacency(g)
        .det_one_minus_u()
        .expect("square integer matrix")
}

/// `ζ⁻¹` from the three-term formula as `numerator / denominator`. The
/// denominator is `1 − u²` for trees and 1 otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeTermReciprocal {
    pub numerator: CycloPoly,
    pub denominator: CycloPoly,
}

impl ThreeTermReciprocal {
    pub fn into_polynomial(self) -> Result<CycloPoly> {
        Ok(self.numerator.exact_div(&self.denominator)?)
    }
}

pub fn graph_zeta_three_term(g: &Graph) -> Result<ThreeTermReciprocal> {
    if !g.is_connected() {
        return Err(Error::Disconnected("three-term formula needs a connected graph".into()));
    }
    let n = g.num_vertices();
    let adj = g.adjacency_counts();
    let mut m = CycloMatrix::zeros(1, n, n);
    for (i, row) in adj.iter().enumerate() {
        for (j, &a) in row.iter().enumerate() {
            let q = if i == j { g.degree(i) as i64 - 1 } else { 0 };
            m.set(i, j, CycloPoly::from_ints(1, &[i64::from(i == j), -a, q]));
        }
    }
    let det = m.det()?;
    let one_minus_u2 = CycloPoly::from_ints(1, &[1, 0, -1]);
    let r = g.cycle_rank();
    Ok(if r >= 1 {
        ThreeTermReciprocal {
            numerator: &det * &one_minus_u2.pow((r - 1) as u32),
            denominator: CycloPoly::one(1),
        }
    } else {
        ThreeTermReciprocal {
            numerator: det,
            denominator: one_minus_u2,
        }
    })
}

fn halve(p: &CycloPoly) -> Result<CycloPoly> {
    p.sqrt_substitute()
        .map_err(|e| Error::Internal(format!("bipartite reciprocal has odd support: {e}")))
}

/// `ζ_H⁻¹(u) = ζ_{B_H}⁻¹(√u)` by the edge determinant of `B_H`.
pub fn hypergraph_zeta(h: &Hypergraph) -> Result<CycloPoly> {
    if !h.is_connected() {
        return Err(Error::Disconnected("hypergraph is not connected".into()));
    }
    halve(&graph_zeta_edge_det(incidence_graph(h).graph()))
}

pub fn hypergraph_zeta_three_term(h: &Hypergraph) -> Result<CycloPoly> {
    if !h.is_connected() {
        return Err(Error::Disconnected("hypergraph is not connected".into()));
    }
    halve(&graph_zeta_three_term(incidence_graph(h).graph())?.into_polynomial()?)
}

// Integer power series helpers for the Euler routes; zeta functions have
// integer coefficients, so these stay in ℤ.

fn series_mul_into(f: &mut Vec<BigInt>, g: &[BigInt], step: usize, n: usize) {
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, fi) in f.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        for (j, gj) in g.iter().enumerate() {
            let k = i + j * step;
            if k > n {
                break;
            }
            out[k] += fi * gj;
        }
    }
    *f = out;
}

/// `∏_ℓ (1 − u^ℓ)^{−c_ℓ}` through degree `n`, from the number `c_ℓ` of
/// prime classes of each length.
pub fn euler_product(prime_counts: &[BigUint], n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::zero(); n + 1];
    f[0] = BigInt::one();
    for (l, c) in prime_counts.iter().enumerate().skip(1) {
        if l > n || c.is_zero() {
            continue;
        }
        // (1 − x)^{−c} = Σ_j C(c + j − 1, j) xʲ
        let c = BigInt::from(c.clone());
        let mut g = vec![BigInt::one()];
        for j in 1..=n / l {
            let next = &g[j - 1] * (&c + BigInt::from(j - 1)) / BigInt::from(j);
            g.push(next);
        }
        series_mul_into(&mut f, &g, l, n);
    }
    f
}

/// `exp(Σ_{k≥1} a_k u^k / k)` through degree `n` in integers.
pub fn trace_exp(traces: &[BigUint], n: usize) -> Vec<BigInt> {
    let a = |k: usize| -> BigInt {
        traces
            .get(k)
            .map(|x| BigInt::from(x.clone()))
            .unwrap_or_default()
    };
    // k z_k = Σ_{j=1..k} a_j z_{k−j}
    let mut z = vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for j in 1..=k {
            acc += a(j) * &z[k - j];
        }
        debug_assert!((&acc % BigInt::from(k)).is_zero());
        z.push(acc / BigInt::from(k));
    }
    z
}

fn int_series(coeffs: Vec<BigInt>, n: usize) -> CycloPoly {
    CycloPoly::from_rationals(1, coeffs.into_iter().map(Rational::from_integer).collect()).truncate(n)
}

/// `ζ_g` through degree `n` from an explicit list of prime-class lengths.
pub fn graph_zeta_euler_from_lengths(
    lengths: impl IntoIterator<Item = usize>,
    n: usize,
) -> Result<ZetaResult> {
    let mut counts = vec![BigUint::zero(); n + 1];
    for l in lengths {
        if l <= n {
            counts[l] += 1u32;
        }
    }
    ZetaResult::from_series(int_series(euler_product(&counts, n), n), Method::Euler, n)
}

/// Euler product with prime counts taken from `tr(W₁ᵏ)` by Möbius inversion.
pub fn graph_zeta_euler_census(g: &Graph, n: usize) -> Result<ZetaResult> {
    let primes = prime_counts_from_traces(&closed_walk_counts(g, n));
    ZetaResult::from_series(int_series(euler_product(&primes, n), n), Method::EulerCensus, n)
}

pub fn graph_zeta_trace_exp(g: &Graph, n: usize) -> Result<ZetaResult> {
    ZetaResult::from_series(int_series(trace_exp(&closed_walk_counts(g, n), n), n), Method::TraceExp, n)
}

/// `ζ_g` by `method`; series methods need the truncation `n`.
pub fn graph_zeta(g: &Graph, method: Method, n: Option<usize>) -> Result<ZetaResult> {
    let need_n = || n.ok_or_else(|| Error::Parse(format!("method {method} needs a truncation")));
    match method {
        Method::EdgeDet => Ok(ZetaResult::exact(graph_zeta_edge_det(g), method)),
        Method::ThreeTerm => Ok(ZetaResult::exact(
            graph_zeta_three_term(g)?.into_polynomial()?,
            method,
        )),
        Method::Euler => {
            let n = need_n()?;
            let primes = crate::cycles::enumerate_graph_primes(g, n);
            graph_zeta_euler_from_lengths(primes.iter().map(|c| c.len()), n)
        }
        Method::EulerCensus => graph_zeta_euler_census(g, need_n()?),
        Method::TraceExp => graph_zeta_trace_exp(g, need_n()?),
    }
}

/// `ζ_H` by `method`; the truncation `n` is in the hypergraph variable.
pub fn hypergraph_zeta_by(h: &Hypergraph, method: Method, n: Option<usize>) -> Result<ZetaResult> {
    if !h.is_connected() {
        return Err(Error::Disconnected("hypergraph is not connected".into()));
    }
    let b = incidence_graph(h);
    let out = match method {
        Method::EdgeDet => ZetaResult::exact(hypergraph_zeta(h)?, method),
        Method::ThreeTerm => ZetaResult::exact(hypergraph_zeta_three_term(h)?, method),
        Method::Euler => {
            let n = need_truncation(method, n)?;
            let primes = enumerate_hypergraph_primes_in(&b, n);
            graph_zeta_euler_from_lengths(primes.iter().map(|c| c.len()), n)?
        }
        _ => {
            let n = need_truncation(method, n)?;
            let r = graph_zeta(b.graph(), method, Some(2 * n))?;
            ZetaResult {
                reciprocal: halve(&r.reciprocal)?,
                method,
                truncation: Some(n),
            }
        }
    };
    Ok(out)
}

fn need_truncation(method: Method, n: Option<usize>) -> Result<usize> {
    n.ok_or_else(|| Error::Parse(format!("method {method} needs a truncation")))
}

fn check_group(cover: &FreeCovering, rep: &Representation) -> Result<()> {
    if rep.group() != cover.group() {
        return Err(Error::GroupMismatch);
    }
    Ok(())
}

/// `W_{1,ρ}`: block `(a, b)` is `ρ(σ(a))` where `W₁[a][b] = 1`, so the
/// trace of `W_{1,ρ}ᵏ` sums `χ_ρ(σ(a₁)⋯σ(a_k))` over closed paths.
pub fn twisted_edge_adjacency(
    cover: &FreeCovering,
    sheets: &SheetAssignment,
    rep: &Representation,
) -> Result<ScalarMatrix> {
    check_group(cover, rep)?;
    let g = cover.base_incidence().graph();
    let sigma = edge_frobenius_table(cover, sheets);
    let m = g.num_directed();
    let d = rep.dim();
    let mut w = ScalarMatrix::zeros(rep.order(), m * d, m * d);
    for a in 0..m {
        let block = rep.matrix(sigma[a]);
        for b in g.successors(a) {
            for i in 0..d {
                for j in 0..d {
                    w.set(a * d + i, b * d + j, block.get(i, j).clone());
                }
            }
        }
    }
    Ok(w)
}

/// `L(u, ρ, B_Y/B_X)⁻¹ = det(I − u·W_{1,ρ})`.
pub fn lfunction_edge_det(
    cover: &FreeCovering,
    sheets: &SheetAssignment,
    rep: &Representation,
) -> Result<CycloPoly> {
    Ok(twisted_edge_adjacency(cover, sheets, rep)?.det_one_minus_u()?)
}

/// `L(u, ρ, Y/X)⁻¹` from the bipartite L-function by `u² → u`.
pub fn hypergraph_lfunction(
    cover: &FreeCovering,
    sheets: &SheetAssignment,
    rep: &Representation,
) -> Result<CycloPoly> {
    halve(&lfunction_edge_det(cover, sheets, rep)?)
}

/// `L(u, ρ, Y/X)⁻¹` through degree `n` as `∏ det(I − ρ(F(C)) u^ℓ)` over the
/// enumerated prime classes of `X` with `ℓ ≤ n`.
pub fn lfunction_euler(
    cover: &FreeCovering,
    sheets: &SheetAssignment,
    rep: &Representation,
    n: usize,
) -> Result<ZetaResult> {
    check_group(cover, rep)?;
    let mut acc = CycloPoly::one(rep.order()).truncate(n);
    for class in enumerate_hypergraph_primes_in(cover.base_incidence(), n) {
        let f = frobenius(cover, sheets, &class.bipartite_edges)?;
        let factor = rep.matrix(f).det_one_minus_u()?.substitute_power(class.len());
        acc = acc.checked_mul(&factor)?.truncate(n);
    }
    Ok(ZetaResult {
        reciprocal: acc,
        method: Method::Euler,
        truncation: Some(n),
    })
}

/// Twisted closed-path counts in `B_X`: entry `k` is
/// `Σ χ_ρ(F(C))` over based closed paths `C` of length `k` without
/// backtracking or tail, counted by tracking Frobenius elements along walks.
pub fn twisted_trace_counts(
    cover: &FreeCovering,
    sheets: &SheetAssignment,
    rep: &Representation,
    max: usize,
) -> Result<Vec<Cyclo>> {
    check_group(cover, rep)?;
    let grp = cover.group();
    let q = grp.order();
    let g = cover.base_incidence().graph();
    let m = g.num_directed();
    let sigma = edge_frobenius_table(cover, sheets);
    let succ: Vec<Vec<usize>> = (0..m).map(|d| g.successors(d).collect()).collect();
    let mut by_element = vec![vec![BigUint::zero(); q]; max + 1];
    for start in 0..m {
        let closes: Vec<bool> = (0..m).map(|b| succ[b].contains(&start)).collect();
        let mut state = vec![BigUint::zero(); m * q];
        state[start * q + sigma[start]] = BigUint::one();
        for slot in by_element.iter_mut().skip(1) {
            for b in 0..m {
                if closes[b] {
                    for (h, c) in slot.iter_mut().enumerate() {
                        *c += &state[b * q + h];
                    }
                }
            }
            let mut next = vec![BigUint::zero(); m * q];
            for b in 0..m {
                for h in 0..q {
                    let c = &state[b * q + h];
                    if c.is_zero() {
                        continue;
                    }
                    for &x in &succ[b] {
                        next[x * q + grp.mul(h, sigma[x])] += c;
                    }
                }
            }
            state = next;
        }
    }
    let chars: Vec<Cyclo> = (0..q).map(|h| rep.character(h)).collect();
    Ok(by_element
        .into_iter()
        .map(|counts| {
            counts
                .into_iter()
                .zip(&chars)
                .fold(Cyclo::zero(rep.order()), |acc, (c, x)| {
                    &acc + &x.scale(&Rational::from_integer(c.into()))
                })
        })
        .collect())
}

/// `L(u, ρ, Y/X)⁻¹` through degree `n` as the inverse of
/// `exp(Σ N_k u^k / k)` on `B_Y/B_X`, then `u² → u`.
pub fn lfunction_trace_exp(
    cover: &FreeCovering,
    sheets: &SheetAssignment,
    rep: &Representation,
    n: usize,
) -> Result<ZetaResult> {
    let counts = twisted_trace_counts(cover, sheets, rep, 2 * n)?;
    let log = CycloPoly::from_coeffs(
        rep.order(),
        counts
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == 0 {
                    Cyclo::zero(rep.order())
                } else {
                    c.scale(&Rational::new(1.into(), (k as i64).into()))
                }
            })
            .collect(),
    );
    let series = halve(&log.series_exp(2 * n)?)?;
    ZetaResult::from_series(series, Method::TraceExp, n)
}

/// `L(u, ρ, Y/X)` by `method`, as an [`LFunctionResult`].
pub fn hypergraph_lfunction_by(
    cover: &FreeCovering,
    sheets: &SheetAssignment,
    rep: &Representation,
    method: Method,
    n: Option<usize>,
) -> Result<LFunctionResult> {
    let result = match method {
        Method::EdgeDet => ZetaResult::exact(hypergraph_lfunction(cover, sheets, rep)?, method),
        Method::Euler => lfunction_euler(cover, sheets, rep, need_truncation(method, n)?)?,
        Method::TraceExp => lfunction_trace_exp(cover, sheets, rep, need_truncation(method, n)?)?,
        Method::ThreeTerm | Method::EulerCensus => {
            return Err(Error::Parse(format!(
                "method {method} is not available for L-functions"
            )))
        }
    };
    Ok(LFunctionResult::new(result, cover, rep))
}

/// Default Euler truncation: twice the number of directed edges of `B_X`.
pub fn default_truncation(cover: &FreeCovering) -> usize {
    2 * cover.base_incidence().graph().num_directed()
}

/// Compares two polynomials after moving both into a common field.
pub fn same_polynomial(a: &CycloPoly, b: &CycloPoly) -> bool {
    let (a, b) = CycloPoly::unify(a, b);
    a.to_exact() == b.to_exact()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorLine {
    pub dim: usize,
    pub reciprocal: Vec<EntryDoc>,
}

/// Outcome of checking `ζ_Y = ∏_ρ L(u, ρ, Y/X)^{d_ρ}` and its special cases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub cover_reciprocal: Vec<EntryDoc>,
    pub base_reciprocal: Vec<EntryDoc>,
    pub factors: Vec<FactorLine>,
    pub product_reciprocal: Vec<EntryDoc>,
    pub factorization_holds: bool,
    pub trivial_matches_base: bool,
    pub regular_matches_cover: bool,
    pub base_divides_cover: bool,
}

impl FactorizationReport {
    pub fn all_pass(&self) -> bool {
        self.factorization_holds
            && self.trivial_matches_base
            && self.regular_matches_cover
            && self.base_divides_cover
    }
}

fn docs(p: &CycloPoly) -> Vec<EntryDoc> {
    p.coeffs().iter().map(EntryDoc::from_cyclo).collect()
}

pub fn verify_factorization(
    cover: &FreeCovering,
    sheets: &SheetAssignment,
    irreps: &[Representation],
) -> Result<FactorizationReport> {
    validate_irreps(irreps)?;
    let first = &irreps[0];
    if first.group() != cover.group() {
        return Err(Error::GroupMismatch);
    }
    let zeta_y = hypergraph_zeta(cover.cover())?;
    let zeta_x = hypergraph_zeta(cover.base())?;
    let mut factors = Vec::with_capacity(irreps.len());
    let mut product = CycloPoly::one(1);
    for rep in irreps {
        let l = hypergraph_lfunction(cover, sheets, rep)?;
        let (p, l2) = CycloPoly::unify(&product, &l);
        product = p.checked_mul(&l2.pow(rep.dim() as u32))?;
        factors.push(FactorLine {
            dim: rep.dim(),
            reciprocal: docs(&l),
        });
    }
    let group = first.group_arc().clone();
    let trivial = hypergraph_lfunction(cover, sheets, &Representation::trivial(group.clone()))?;
    let regular = hypergraph_lfunction(cover, sheets, &Representation::regular(group))?;
    let base_divides_cover = matches!(zeta_y.div_rem(&zeta_x), Ok((_, r)) if r.is_zero());
    Ok(FactorizationReport {
        cover_reciprocal: docs(&zeta_y),
        base_reciprocal: docs(&zeta_x),
        factors,
        product_reciprocal: docs(&product),
        factorization_holds: same_polynomial(&product, &zeta_y),
        trivial_matches_base: same_polynomial(&trivial, &zeta_x),
        regular_matches_cover: same_polynomial(&regular, &zeta_y),
        base_divides_cover,
    })
}
