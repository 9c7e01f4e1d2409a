//! The induced-norm machinery on the span of a constructed basis.
//!
//! A certified basis turns its span into a normed space under
//! `‖x‖_E = Σ_i |e*_i(x)|·d_i` with `d_i = 1/(2^i·‖e*_i‖_C)`, and the
//! two-parameter family
//!
//!   `‖z‖_{(n,𝔞)} = sup_𝔟 Σ_{i=1}^n (d_{𝔟(i)}·|e*_{𝔟(i)}(z)| / e^{𝔞(i)})^{𝔞(i)}`
//!
//! over strictly increasing index tuples 𝔟 defines the neighborhoods
//! `G_{(n,𝔞)} = {z ∈ K∩E : ‖z‖_{(n,𝔞)} ≤ 2^{−n}}` of a vector topology that
//! is strictly weaker than the F-norm topology yet still Hausdorff. The
//! closure-based neighborhoods are approximated from inside by the G sets,
//! so membership answers are Yes/Unknown and a Yes is always sound.

use serde::{Deserialize, Serialize};

use crate::basis::LshBasis;
use crate::space::{
    k_membership, lp_fnorm, pairing, pairing_abs_bound, scale_into, BoundedBall, KMembership,
    SparseVector,
};
use crate::{Error, Result, Tolerance};

/// Tuples cheaper than this are enumerated outright; beyond it the
/// order-respecting DP evaluates the same supremum.
const ENUMERATION_BUDGET: u128 = 100_000;

/// Relative dust threshold under which a functional evaluation is treated
/// as an exact zero. Guards support detection against cancellation noise.
const PAIRING_DUST: f64 = 1e-14;

/// Exponent choices 𝔞(1..n), each strictly inside (0,1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ExponentFunction {
    values: Vec<f64>,
}

impl ExponentFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values
            .iter()
            .any(|&v| !(v.is_finite() && 0.0 < v && v < 1.0))
        {
            return Err(Error::InvalidExponentFunction(
                "every exponent must lie strictly inside (0,1)".into(),
            ));
        }
        Ok(ExponentFunction { values })
    }

    pub fn constant(value: f64, n: usize) -> Result<Self> {
        ExponentFunction::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 1-based position access.
    pub fn at(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl TryFrom<Vec<f64>> for ExponentFunction {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        ExponentFunction::new(values)
    }
}

impl From<ExponentFunction> for Vec<f64> {
    fn from(e: ExponentFunction) -> Vec<f64> {
        e.values
    }
}

/// One candidate neighborhood of 0: the pair (n, 𝔞) plus the radius u of
/// the additive F-norm ball U.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct NeighborhoodSpec {
    pub n: u32,
    pub exponents: ExponentFunction,
    pub u: f64,
}

#[derive(Deserialize)]
struct RawSpec {
    n: u32,
    exponents: ExponentFunction,
    u: f64,
}

impl TryFrom<RawSpec> for NeighborhoodSpec {
    type Error = Error;
    fn try_from(raw: RawSpec) -> Result<Self> {
        NeighborhoodSpec::new(raw.n, raw.exponents, raw.u)
    }
}

impl NeighborhoodSpec {
    pub fn new(n: u32, exponents: ExponentFunction, u: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be positive".into()));
        }
        if exponents.len() != n as usize {
            return Err(Error::InvalidSpec(format!(
                "exponent function has length {}, expected n = {n}",
                exponents.len()
            )));
        }
        if !(u.is_finite() && u >= 0.0) {
            return Err(Error::InvalidSpec(format!("u must be ≥ 0, got {u}")));
        }
        Ok(NeighborhoodSpec { n, exponents, u })
    }
}

/// Strictly increasing positive indices 𝔟(1) < … < 𝔟(n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct IndexTuple {
    indices: Vec<u32>,
}

impl IndexTuple {
    pub fn new(indices: Vec<u32>) -> Result<Self> {
        if indices.first().is_some_and(|&i| i == 0) || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec(
                "index tuple must be strictly increasing and positive".into(),
            ));
        }
        Ok(IndexTuple { indices })
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// Uniform random strictly increasing n-tuple inside {1..max_index}.
    pub fn random(rng: &mut impl rand::Rng, n: usize, max_index: u32) -> IndexTuple {
        assert!(max_index as usize >= n && n >= 1);
        let mut picked = Vec::with_capacity(n);
        // reservoir-free selection: walk indices, keep selection probability exact
        let mut need = n;
        let mut left = max_index as usize;
        for i in 1..=max_index {
            if need == 0 {
                break;
            }
            if rng.random_range(0..left) < need {
                picked.push(i);
                need -= 1;
            }
            left -= 1;
        }
        IndexTuple { indices: picked }
    }
}

impl TryFrom<Vec<u32>> for IndexTuple {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        IndexTuple::new(v)
    }
}

impl From<IndexTuple> for Vec<u32> {
    fn from(t: IndexTuple) -> Vec<u32> {
        t.indices
    }
}

/// Functional evaluations of x against every built index, with expansion
/// coefficients; only produced when x certifiably lies in the span.
#[derive(Debug, Clone)]
pub struct Expansion {
    /// e*_i(x) for i = 1..m, cancellation dust zeroed.
    pub dual_values: Vec<f64>,
    /// γ_i with x = Σ γ_i·e_i on the span.
    pub coefficients: Vec<f64>,
}

fn dual_values(basis: &LshBasis, x: &SparseVector) -> Vec<f64> {
    basis
        .elements()
        .iter()
        .map(|el| {
            let v = pairing(&el.estar, x);
            if v.abs() <= PAIRING_DUST * pairing_abs_bound(&el.estar, x) {
                0.0
            } else {
                v
            }
        })
        .collect()
}

/// Expand x over the basis prefix and certify the residual vanishes.
pub fn expansion(basis: &LshBasis, x: &SparseVector, tol: Tolerance) -> Result<Expansion> {
    let dual = dual_values(basis, x);
    let mut recon = SparseVector::zero();
    let mut coeffs = Vec::with_capacity(dual.len());
    for (el, &v) in basis.elements().iter().zip(&dual) {
        let diag = pairing(&el.estar, &el.e);
        let gamma = if v == 0.0 { 0.0 } else { v / diag };
        coeffs.push(gamma);
        if gamma != 0.0 {
            recon = recon.add(&el.e.scale(gamma));
        }
    }
    let residual = x.sub(&recon);
    let scale = x.max_abs().max(recon.max_abs()).max(1.0);
    let linf = residual.max_abs();
    if linf > tol.eps * scale {
        return Err(Error::SpanError { residual: linf });
    }
    Ok(Expansion {
        dual_values: dual,
        coefficients: coeffs,
    })
}

/// `‖x‖_E = Σ_i |e*_i(x)|·d_i`, optionally truncated to the first N terms.
/// A norm on the span: homogeneous, subadditive, zero only at zero.
pub fn norm_e(
    basis: &LshBasis,
    x: &SparseVector,
    truncate: Option<usize>,
    tol: Tolerance,
) -> Result<f64> {
    let exp = expansion(basis, x, tol)?;
    let upto = truncate.unwrap_or(basis.len()).min(basis.len());
    Ok(basis.elements()[..upto]
        .iter()
        .zip(&exp.dual_values)
        .map(|(el, &v)| v.abs() * el.cert.d)
        .sum())
}

/// A δ(ε) certificate for the continuity of ‖·‖_E at 0 along `(K−K)∩E`:
/// any z ∈ (K−K)∩span with `‖z‖_p < δ` has `‖z‖_E < eps`.
///
/// Split the sum at N with `4·2^{−N} ≤ eps/2`: on K−K every functional obeys
/// `|e*_n(z)| ≤ 4‖e*_n‖_C`, so the tail contributes at most `4·2^{−N}`. On
/// the head, `|z_j| ≤ ‖z‖_p^{1/p} < δ^{1/p}` and `|e*_n(z)| ≤ ‖e*_n‖_1·max|z_j|`,
/// so `δ = (eps/(2·S))^p` with `S = max(1, Σ_{n≤N} ‖e*_n‖_1·d_n)` bounds the
/// head by eps/2. Clamping S below at 1 only shrinks δ, which stays sound.
pub fn delta_for_eps(basis: &LshBasis, eps: f64) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let n_split = ((8.0 / eps).log2().ceil().max(1.0)) as usize;
    let head: f64 = basis.elements()[..n_split.min(basis.len())]
        .iter()
        .map(|el| el.estar.l1_norm() * el.cert.d)
        .sum();
    let s = head.max(1.0);
    Ok((eps / (2.0 * s)).powf(basis.model.p))
}

/// Shared term evaluator: position i of a tuple hitting basis index j
/// contributes `(d_j·|e*_j(z)|/e^{𝔞(i)})^{𝔞(i)}`, and 0^𝔞 = 0.
fn tuple_term(weight_j: f64, a_i: f64) -> f64 {
    if weight_j == 0.0 {
        0.0
    } else {
        (weight_j / a_i.exp()).powf(a_i)
    }
}

/// Evaluate one tuple, summing positions tail-first. Both supremum routes
/// and the sampling oracle go through this single evaluator, so their
/// values are comparable bit-for-bit.
pub fn np_norm_for_tuple(
    basis: &LshBasis,
    z: &SparseVector,
    tuple: &IndexTuple,
    exponents: &ExponentFunction,
    tol: Tolerance,
) -> Result<f64> {
    let exp = expansion(basis, z, tol)?;
    let weights = index_weights(basis, &exp);
    Ok(eval_tuple(tuple.indices(), &weights, exponents))
}

/// d_j·|e*_j(z)| per built index (1-based position j-1 in the vec).
fn index_weights(basis: &LshBasis, exp: &Expansion) -> Vec<f64> {
    basis
        .elements()
        .iter()
        .zip(&exp.dual_values)
        .map(|(el, &v)| el.cert.d * v.abs())
        .collect()
}

fn eval_tuple(indices: &[u32], weights: &[f64], exponents: &ExponentFunction) -> f64 {
    let mut acc = 0.0;
    for (pos, &j) in indices.iter().enumerate().rev() {
        let w = weights.get(j as usize - 1).copied().unwrap_or(0.0);
        acc += tuple_term(w, exponents.at(pos + 1));
    }
    acc
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// `‖z‖_{(n,𝔞)}`: the exact supremum over strictly increasing n-tuples.
///
/// Terms vanish unless the tuple hits the basis-support of z; any
/// position-to-support matching is realizable inside {1..J+n} where J is
/// the largest support index, so enumerating those tuples is exhaustive.
/// Past the enumeration budget the order-respecting DP computes the same
/// value; the two routes agree exactly and tests hold them to that.
pub fn np_norm(
    basis: &LshBasis,
    z: &SparseVector,
    n: u32,
    exponents: &ExponentFunction,
    tol: Tolerance,
) -> Result<f64> {
    let weights = np_norm_weights(basis, z, n, exponents, tol)?;
    let horizon = enumeration_horizon(&weights, n);
    if binomial(horizon as u128 + n as u128, n as u128) <= ENUMERATION_BUDGET {
        Ok(np_norm_enumerated(&weights, n, exponents))
    } else {
        Ok(np_norm_dp_on_weights(&weights, n, exponents))
    }
}

/// Enumeration route, exposed for the agreement tests.
pub fn np_norm_enumeration(
    basis: &LshBasis,
    z: &SparseVector,
    n: u32,
    exponents: &ExponentFunction,
    tol: Tolerance,
) -> Result<f64> {
    let weights = np_norm_weights(basis, z, n, exponents, tol)?;
    Ok(np_norm_enumerated(&weights, n, exponents))
}

/// DP route, exposed for the agreement tests.
pub fn np_norm_dp(
    basis: &LshBasis,
    z: &SparseVector,
    n: u32,
    exponents: &ExponentFunction,
    tol: Tolerance,
) -> Result<f64> {
    let weights = np_norm_weights(basis, z, n, exponents, tol)?;
    Ok(np_norm_dp_on_weights(&weights, n, exponents))
}

fn np_norm_weights(
    basis: &LshBasis,
    z: &SparseVector,
    n: u32,
    exponents: &ExponentFunction,
    tol: Tolerance,
) -> Result<Vec<f64>> {
    if n == 0 || exponents.len() != n as usize {
        return Err(Error::InvalidSpec(format!(
            "need n ≥ 1 with matching exponent length, got n = {n}, len = {}",
            exponents.len()
        )));
    }
    let exp = expansion(basis, z, tol)?;
    Ok(index_weights(basis, &exp))
}

fn enumeration_horizon(weights: &[f64], _n: u32) -> u32 {
    weights
        .iter()
        .rposition(|&w| w != 0.0)
        .map_or(0, |j| j as u32 + 1)
}

fn np_norm_enumerated(weights: &[f64], n: u32, exponents: &ExponentFunction) -> f64 {
    let top = enumeration_horizon(weights, n) + n;
    let n = n as usize;
    let mut tuple: Vec<u32> = (1..=n as u32).collect();
    let mut best = 0.0f64;
    loop {
        best = best.max(eval_tuple(&tuple, weights, exponents));
        // next strictly increasing tuple inside {1..top}
        let mut pos = n;
        loop {
            if pos == 0 {
                return best;
            }
            pos -= 1;
            if tuple[pos] < top - (n - 1 - pos) as u32 {
                tuple[pos] += 1;
                for q in pos + 1..n {
                    tuple[q] = tuple[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// States are (position i, support index s_k). A transition to (i', k')
/// is legal when the index gap covers the position gap, s_{k'} − s_k ≥ i' − i,
/// and a start (i, k) needs s_k ≥ i so earlier positions fit below it.
/// Filler positions contribute exact zeros, matching the enumeration.
#[allow(clippy::needless_range_loop)]
fn np_norm_dp_on_weights(weights: &[f64], n: u32, exponents: &ExponentFunction) -> f64 {
    let support: Vec<u32> = weights
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w != 0.0)
        .map(|(j, _)| j as u32 + 1)
        .collect();
    let n = n as usize;
    if support.is_empty() {
        return 0.0;
    }
    let kk = support.len();
    // memo[i][k]: best tail sum when position i+1 takes support index s_{k+1}
    let mut memo = vec![vec![0.0f64; kk]; n];
    for i in (0..n).rev() {
        for k in 0..kk {
            let mut suffix = 0.0f64;
            for i2 in i + 1..n {
                for k2 in k + 1..kk {
                    if support[k2] - support[k] >= (i2 - i) as u32 {
                        suffix = suffix.max(memo[i2][k2]);
                    }
                }
            }
            let w = weights[support[k] as usize - 1];
            memo[i][k] = tuple_term(w, exponents.at(i + 1)) + suffix;
        }
    }
    let mut best = 0.0f64;
    for i in 0..n {
        for k in 0..kk {
            if support[k] >= (i + 1) as u32 {
                best = best.max(memo[i][k]);
            }
        }
    }
    best
}

/// Verdict for `z ∈ G_{(n,𝔞)} = {z ∈ K∩E : ‖z‖_{(n,𝔞)} ≤ 2^{−n}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GSetMembership {
    In,
    OutOfG,
    /// The norm test passed but the K-membership test was inconclusive.
    KUnknown,
}

pub fn g_set_contains(
    basis: &LshBasis,
    z: &SparseVector,
    n: u32,
    exponents: &ExponentFunction,
    tol: Tolerance,
) -> Result<GSetMembership> {
    let norm = np_norm(basis, z, n, exponents, tol)?;
    let threshold = (-(n as f64)).exp2();
    if tol.gt(norm, threshold) {
        return Ok(GSetMembership::OutOfG);
    }
    Ok(match k_membership(z, &basis.ball, &basis.model, tol) {
        KMembership::In { .. } => GSetMembership::In,
        KMembership::Out => GSetMembership::OutOfG,
        KMembership::Unknown => GSetMembership::KUnknown,
    })
}

/// One-sided membership verdict for the neighborhood `F_{(n,𝔞)} + U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RhoMembership {
    /// Certificate g ∈ G_{(n,𝔞)} with ‖x − g‖_p ≤ u; since G ⊆ F this
    /// proves x ∈ F + U.
    Yes {
        g: SparseVector,
    },
    Unknown,
}

impl RhoMembership {
    pub fn is_yes(&self) -> bool {
        matches!(self, RhoMembership::Yes { .. })
    }
}

/// Search for a G-certificate among the span part of x, its prefix
/// truncations, dyadic down-scalings of those, and 0. Sound one-sided:
/// a Yes is a verified certificate, an Unknown is merely "not found".
pub fn rho_neighborhood_contains(
    basis: &LshBasis,
    x: &SparseVector,
    spec: &NeighborhoodSpec,
    tol: Tolerance,
) -> Result<RhoMembership> {
    // dual evaluations are defined for any x, span member or not; the
    // out-of-span remainder is simply part of ‖x − g‖_p
    let dual = dual_values(basis, x);
    let mut prefixes: Vec<SparseVector> = Vec::with_capacity(basis.len() + 1);
    let mut acc = SparseVector::zero();
    prefixes.push(acc.clone());
    for (el, &v) in basis.elements().iter().zip(&dual) {
        let diag = pairing(&el.estar, &el.e);
        if v != 0.0 {
            acc = acc.add(&el.e.scale(v / diag));
        }
        prefixes.push(acc.clone());
    }

    // longest prefixes first: the full span part is the natural certificate
    for len in (0..prefixes.len()).rev() {
        for halvings in 0..=8 {
            let g = prefixes[len].scale((-(halvings as f64)).exp2());
            if g_set_contains(basis, &g, spec.n, &spec.exponents, tol)? == GSetMembership::In
                && tol.le(lp_fnorm(&x.sub(&g), &basis.model), spec.u)
            {
                return Ok(RhoMembership::Yes { g });
            }
            if prefixes[len].is_zero() {
                break;
            }
        }
    }
    Ok(RhoMembership::Unknown)
}

/// Smallest m ≤ m_max with `‖x‖_{(m,𝔠)} > 2^{−m}`, certifying that x
/// escapes `G_{(m,𝔠)}`. Exists for every nonzero span vector because the
/// largest single term is a fixed positive lower bound for every m while
/// `2^{−m}` decays.
pub fn separation_witness(
    basis: &LshBasis,
    x: &SparseVector,
    c_exponent: f64,
    m_max: u32,
    tol: Tolerance,
) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ZeroSeparationWitness);
    }
    for m in 1..=m_max {
        let exps = ExponentFunction::constant(c_exponent, m as usize)?;
        let norm = np_norm(basis, x, m, &exps, tol)?;
        if tol.gt(norm, (-(m as f64)).exp2()) {
            return Ok(m);
        }
    }
    Err(Error::NoWitnessFound { m_max })
}

/// Basis-support of x: indices whose functional does not vanish on x.
pub fn support(basis: &LshBasis, x: &SparseVector, tol: Tolerance) -> Result<Vec<u32>> {
    let exp = expansion(basis, x, tol)?;
    Ok(exp
        .dual_values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v != 0.0)
        .map(|(j, _)| j as u32 + 1)
        .collect())
}

/// `P_J(x) = Σ_{i∈J} γ_i·e_i` with γ the expansion coefficients, i.e. the
/// pairing against the normalized coordinate functionals e*_i/e*_i(e_i).
/// Idempotent on the span up to ε_num, and the basis-supports of P_J(x)
/// and (I−P_J)(x) are disjoint.
pub fn project(
    basis: &LshBasis,
    x: &SparseVector,
    j_set: &[u32],
    tol: Tolerance,
) -> Result<SparseVector> {
    let exp = expansion(basis, x, tol)?;
    let mut out = SparseVector::zero();
    for &j in j_set {
        if let Some(el) = basis.element(j) {
            let gamma = exp.coefficients[j as usize - 1];
            if gamma != 0.0 {
                out = out.add(&el.e.scale(gamma));
            }
        }
    }
    Ok(out)
}

/// `|x|_{(p)} = Σ_i |e*_i(x)|^p·d_i·r_i^{1−p}`: the p-bracket functional
/// controlled by the summability bound.
pub fn p_bracket_norm(basis: &LshBasis, x: &SparseVector, tol: Tolerance) -> Result<f64> {
    let exp = expansion(basis, x, tol)?;
    let p = basis.model.p;
    Ok(basis
        .elements()
        .iter()
        .zip(&exp.dual_values)
        .filter(|&(_, &v)| v != 0.0)
        .map(|(el, &v)| v.abs().powf(p) * el.cert.d * el.cert.r.powf(1.0 - p))
        .sum())
}

/// Per-k row of a witness scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub k: u32,
    pub fnorm_p: f64,
    pub norm_e: f64,
    /// Yes/Unknown per spec, in spec order.
    pub membership: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecOutcome {
    pub spec: NeighborhoodSpec,
    /// Least k₀ with membership Yes for every k₀ ≤ k ≤ k_max, when one exists.
    pub k0: Option<u32>,
}

/// Scan of the sequence x_k = c^{1/p}·δ_k (boundary-normalized coordinate
/// directions): τ-separated from 0 at constant F-norm c, yet `‖x_k‖_E → 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub descriptor: String,
    pub rows: Vec<WitnessRow>,
    pub specs: Vec<SpecOutcome>,
}

impl WitnessReport {
    /// Columns: k, fnorm_p, norm_E, then per spec a Yes/Unknown column and
    /// a k₀ column (k₀ repeated per row, empty when none exists).
    pub fn to_csv(&self) -> String {
        let mut header = String::from("k,fnorm_p,norm_E");
        for (idx, _) in self.specs.iter().enumerate() {
            header.push_str(&format!(",spec{0}_member,spec{0}_k0", idx + 1));
        }
        let mut out = header;
        out.push('\n');
        for row in &self.rows {
            let mut line = format!("{},{},{}", row.k, row.fnorm_p, row.norm_e);
            for (m, spec) in row.membership.iter().zip(&self.specs) {
                let k0 = spec.k0.map_or(String::new(), |v| v.to_string());
                line.push_str(&format!(",{},{}", if *m { "Yes" } else { "Unknown" }, k0));
            }
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Run the witness scan for k = 1..k_max against each spec.
pub fn witness_sequence(
    basis: &LshBasis,
    ball: &BoundedBall,
    specs: &[NeighborhoodSpec],
    k_max: u32,
    tol: Tolerance,
) -> Result<WitnessReport> {
    if basis.len() < k_max as usize {
        return Err(Error::BasisTooShort {
            len: basis.len(),
            need: k_max as usize,
        });
    }
    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let unit = SparseVector::unit(k);
        let t = scale_into(&unit, ball, &basis.model)?;
        let x_k = unit.scale(t);
        let membership = specs
            .iter()
            .map(|spec| Ok(rho_neighborhood_contains(basis, &x_k, spec, tol)?.is_yes()))
            .collect::<Result<Vec<bool>>>()?;
        rows.push(WitnessRow {
            k,
            fnorm_p: lp_fnorm(&x_k, &basis.model),
            norm_e: norm_e(basis, &x_k, None, tol)?,
            membership,
        });
    }
    let specs = specs
        .iter()
        .enumerate()
        .map(|(idx, spec)| {
            let mut k0 = None;
            for row in rows.iter().rev() {
                if row.membership[idx] {
                    k0 = Some(row.k);
                } else {
                    break;
                }
            }
            SpecOutcome {
                spec: spec.clone(),
                k0,
            }
        })
        .collect();
    Ok(WitnessReport {
        descriptor: "boundary-normalized coordinate directions c^{1/p}·δ_k".into(),
        rows,
        specs,
    })
}
