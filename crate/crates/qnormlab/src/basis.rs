//! Constructive engine for ℓ₁-Hamel-Schauder bases.
//!
//! The inductive step extends a biorthogonal prefix by one element: a linear
//! solve produces `x_{k+1} ∈ E_{k+1}\E_k` annihilated by the prefix
//! functionals together with a normalized dual `x*_{k+1}`, then the scaling
//! step picks `s ≥ 1` and a boundary factor `t` so that the pair
//! `e_{k+1} = t^{1/p}·s^a·x_{k+1}`, `e*_{k+1} = t^{−1}·s^b·x*_{k+1}`
//! satisfies the two basis inequalities
//!
//!   (1)  2^i·‖e*_i‖_C·‖e_i‖_p ≤ r_i        (2)  ‖e*_i‖_C ≥ 1
//!
//! with a machine-checked certificate per index. The exponent window
//! −a < b < −p·a makes s^{a+b} ≥ 1 while s^{ap+b} decays, which is what lets
//! one scalar s satisfy both sides at once.

use serde::{Deserialize, Serialize};

use crate::audit::{AuditEntry, AuditReport, Counterexample};
use crate::linalg::solve_particular;
use crate::space::{
    brute_force_dual_norm, dual_norm_over, lp_fnorm, pairing, BoundedBall, DualFunctional,
    LpSpaceModel, SparseVector, SubspaceChain,
};
use crate::{Error, Result, Tolerance};

/// Oracle sample count used when re-verifying dual-norm certificates.
const VERIFY_ORACLE_TRIALS: usize = 512;
const VERIFY_ORACLE_SEED: u64 = 0x5eed;

/// The summable weight sequence (r_i): positive, each term < 1, total ≤ 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusSequence {
    /// r_k = base^{−k}; base ≥ 2 keeps the full series total 1/(base−1) ≤ 1.
    Geometric { base: f64 },
    /// Explicit finite list; the total is its exact sum.
    Custom(Vec<f64>),
}

impl RadiusSequence {
    pub fn geometric(base: f64) -> Result<Self> {
        if !(base.is_finite() && base >= 2.0) {
            return Err(Error::InvalidParams(format!(
                "geometric radius base must be ≥ 2 so the series sums within 1, got {base}"
            )));
        }
        Ok(RadiusSequence::Geometric { base })
    }

    pub fn custom(terms: Vec<f64>) -> Result<Self> {
        if terms
            .iter()
            .any(|&r| !(r.is_finite() && 0.0 < r && r < 1.0))
        {
            return Err(Error::InvalidParams(
                "custom radius terms must lie in (0,1)".into(),
            ));
        }
        let total: f64 = terms.iter().sum();
        if total > 1.0 {
            return Err(Error::InvalidParams(format!(
                "custom radius terms must sum within 1, got {total}"
            )));
        }
        Ok(RadiusSequence::Custom(terms))
    }

    /// 1-based term access; None past the end of a custom list.
    pub fn term(&self, k: u32) -> Option<f64> {
        match self {
            RadiusSequence::Geometric { base } => Some(base.powi(-(k as i32))),
            RadiusSequence::Custom(terms) => terms.get(k as usize - 1).copied(),
        }
    }

    /// Full-series total: `1/(base−1)` for the geometric family, the exact
    /// finite sum for a custom list.
    pub fn total(&self) -> f64 {
        match self {
            RadiusSequence::Geometric { base } => 1.0 / (base - 1.0),
            RadiusSequence::Custom(terms) => terms.iter().sum(),
        }
    }
}

impl Default for RadiusSequence {
    fn default() -> Self {
        RadiusSequence::Geometric { base: 4.0 }
    }
}

/// Construction parameters. Legal exponent window: a > 0, −a < b < −p·a.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisParams {
    pub a: f64,
    pub b: f64,
    pub r: RadiusSequence,
    /// Multiplies the scaling lower bound; ≥ 1. Larger margins trade exact
    /// boundary equalities for certificate slack.
    pub margin: f64,
}

impl BasisParams {
    /// a = 1, b = −(1+p)/2 (midpoint of the legal window), r_k = 4^{−k}.
    /// Margin 1 for the power-of-two instance family (p = 1/2), 2 otherwise.
    pub fn defaults(model: &LpSpaceModel) -> Self {
        BasisParams {
            a: 1.0,
            b: -(1.0 + model.p) / 2.0,
            r: RadiusSequence::default(),
            margin: if model.p == 0.5 { 1.0 } else { 2.0 },
        }
    }

    pub fn validate(&self, model: &LpSpaceModel) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::InvalidParams(format!(
                "a must be positive, got {}",
                self.a
            )));
        }
        if !(self.b.is_finite() && self.a + self.b > 0.0 && model.p * self.a + self.b < 0.0) {
            return Err(Error::InvalidParams(format!(
                "b must satisfy −a < b < −p·a, got a={}, b={}, p={}",
                self.a, self.b, model.p
            )));
        }
        if !(self.margin.is_finite() && self.margin >= 1.0) {
            return Err(Error::InvalidParams(format!(
                "margin must be ≥ 1, got {}",
                self.margin
            )));
        }
        Ok(())
    }
}

/// Per-index certificate: every quantity the basis inequalities mention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// ‖e_i‖_p
    pub norm_e: f64,
    /// ‖e*_i‖_C
    #[serde(rename = "dualnorm_C")]
    pub dualnorm_c: f64,
    /// d_i = 1/(2^i·‖e*_i‖_C)
    pub d: f64,
    pub r: f64,
    pub s: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisElement {
    pub i: u32,
    pub e: SparseVector,
    pub estar: DualFunctional,
    pub cert: Certificate,
}

/// Parameter summary kept with a serialized basis. `r_sum` is the full
/// series total Σr_i, needed downstream by the summability bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsSummary {
    pub a: f64,
    pub b: f64,
    pub margin: f64,
    pub r_sum: f64,
}

/// A constructed basis prefix with certificates. On every prefix the
/// elements are linearly independent and span E_m: biorthogonality with
/// e*_i(e_i) > 0 forces independence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LshBasis {
    pub model: LpSpaceModel,
    #[serde(rename = "C")]
    pub ball: BoundedBall,
    pub params: ParamsSummary,
    elements: Vec<BasisElement>,
}

impl LshBasis {
    pub fn empty(model: LpSpaceModel, ball: BoundedBall, params: &BasisParams) -> Self {
        LshBasis {
            model,
            ball,
            params: ParamsSummary {
                a: params.a,
                b: params.b,
                margin: params.margin,
                r_sum: params.r.total(),
            },
            elements: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// 1-based element access.
    pub fn element(&self, i: u32) -> Option<&BasisElement> {
        self.elements.get(i as usize - 1)
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    /// Full-series total Σr_i recorded at build time.
    pub fn r_sum(&self) -> f64 {
        self.params.r_sum
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("basis serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// One biorthogonal extension step. Produces `x_{k+1} ∈ E_{k+1}\E_k` with
/// `e*_i(x_{k+1}) = 0` for i ≤ k, and `x*_{k+1}` with `x*_{k+1}(x_{k+1}) = 1`
/// and `x*_{k+1}(e_i) = 0`, both by finite solves over the coordinates of
/// E_{k+1}; the dual solution is supported inside those coordinates.
pub fn extend_biorthogonal(
    prefix: &LshBasis,
    chain: &SubspaceChain,
) -> Result<(SparseVector, DualFunctional)> {
    let k = prefix.len();
    let step = k + 1;
    let v_next = chain
        .generator(step)
        .ok_or_else(|| Error::InvalidParams(format!("chain provides no generator {step}")))?;

    let x = if k == 0 {
        v_next.clone()
    } else {
        let gens: Vec<SparseVector> = (1..=k)
            .map(|j| {
                chain
                    .generator(j)
                    .ok_or_else(|| Error::InvalidParams(format!("chain provides no generator {j}")))
            })
            .collect::<Result<_>>()?;
        let rows: Vec<Vec<f64>> = prefix
            .elements
            .iter()
            .map(|el| gens.iter().map(|v| pairing(&el.estar, v)).collect())
            .collect();
        let rhs: Vec<f64> = prefix
            .elements
            .iter()
            .map(|el| -pairing(&el.estar, &v_next))
            .collect();
        let alpha = solve_particular(&rows, &rhs).ok_or(Error::SingularChain { step })?;
        let mut x = v_next.clone();
        for (j, &aj) in alpha.iter().enumerate() {
            if aj != 0.0 {
                x = x.add(&gens[j].scale(aj));
            }
        }
        x
    };

    // a dependent generator collapses x into E_k, where the prefix
    // functionals annihilate only the zero vector
    let gen_scale = (1..=step)
        .filter_map(|j| chain.generator(j))
        .map(|v| v.max_abs())
        .fold(0.0f64, f64::max);
    if x.max_abs() <= 1e-12 * gen_scale.max(1.0) {
        return Err(Error::SingularChain { step });
    }

    let coords = chain.coordinates_up_to(step);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    let mut rhs: Vec<f64> = Vec::with_capacity(k + 1);
    rows.push(coords.iter().map(|&c| x.get(c)).collect());
    rhs.push(1.0);
    for el in &prefix.elements {
        rows.push(coords.iter().map(|&c| el.e.get(c)).collect());
        rhs.push(0.0);
    }
    let w = solve_particular(&rows, &rhs).ok_or(Error::SingularChain { step })?;
    let xstar = DualFunctional::from_entries(
        coords
            .iter()
            .zip(&w)
            .filter(|&(_, &wi)| wi != 0.0)
            .map(|(&c, &wi)| (c, wi))
            .collect(),
    )?;
    Ok((x, xstar))
}

/// Deterministic closed-form scaling for step k:
/// `s = margin · max(1, (r_k / (2^k·‖x*‖_C·‖x‖_p))^{1/(ap+b)})`, so that
/// `s^{a+b} ≥ 1` and `2^k·s^{ap+b}·‖x*‖_C·‖x‖_p ≤ r_k`, and
/// `t = (c/‖s^a·x‖_p)^{1/p}` places `s^a·x` on the boundary of C.
pub fn choose_scaling(
    k: u32,
    x: &SparseVector,
    xstar: &DualFunctional,
    params: &BasisParams,
    ball: &BoundedBall,
    model: &LpSpaceModel,
) -> Result<(f64, f64)> {
    let fail = |reason: &str| Error::ScalingFailure {
        step: k as usize,
        reason: reason.into(),
    };
    if x.is_zero() {
        return Err(fail("x is zero"));
    }
    if pairing(xstar, x) <= 0.0 {
        return Err(fail("x*(x) must be positive"));
    }
    let r_k = params
        .r
        .term(k)
        .ok_or_else(|| fail("radius sequence exhausted"))?;
    let norm_x = lp_fnorm(x, model);
    let dual_x = dual_norm_over(xstar, ball, model).value;
    if dual_x == 0.0 {
        return Err(fail("x* has zero dual norm"));
    }
    let decay = model.p * params.a + params.b;
    let base = r_k / ((k as f64).exp2() * dual_x * norm_x);
    let s = params.margin * base.powf(1.0 / decay).max(1.0);
    let y = x.scale(s.powf(params.a));
    let t = crate::space::scale_into(&y, ball, model)?;
    Ok((s, t))
}

fn certificate_failure(index: u32, condition: &str, lhs: f64, rhs: f64) -> Error {
    Error::CertificateFailure {
        index,
        condition: condition.into(),
        lhs,
        rhs,
    }
}

/// Build a length-m certified basis. Aborts with the failing certificate if
/// any inequality cannot be certified under `tol`.
pub fn build_lsh_basis(
    model: &LpSpaceModel,
    ball: &BoundedBall,
    chain: &SubspaceChain,
    params: &BasisParams,
    m: usize,
    tol: Tolerance,
) -> Result<LshBasis> {
    params.validate(model)?;
    let mut partial_sum = 0.0;
    for k in 1..=m {
        let r_k = params
            .r
            .term(k as u32)
            .ok_or_else(|| Error::InvalidParams(format!("radius sequence provides no term {k}")))?;
        if !(0.0 < r_k && r_k < 1.0) {
            return Err(Error::InvalidParams(format!(
                "radius term r_{k} = {r_k} outside (0,1)"
            )));
        }
        partial_sum += r_k;
    }
    if partial_sum > 1.0 + tol.eps {
        return Err(Error::InvalidParams(format!(
            "radius terms sum to {partial_sum} > 1 over the requested length"
        )));
    }

    let mut basis = LshBasis::empty(*model, *ball, params);
    for k in 1..=m as u32 {
        let (x, xstar) = extend_biorthogonal(&basis, chain)?;
        let (s, t) = choose_scaling(k, &x, &xstar, params, ball, model)?;
        let e = x.scale(s.powf(params.a) * t.powf(1.0 / model.p));
        let estar = xstar.scale(s.powf(params.b) / t);

        let norm_e = lp_fnorm(&e, model);
        let dualnorm_c = dual_norm_over(&estar, ball, model).value;
        let r_k = params.r.term(k).expect("validated above");
        let lhs1 = (k as f64).exp2() * dualnorm_c * norm_e;
        if !tol.le(lhs1, r_k) {
            return Err(certificate_failure(
                k,
                "2^i·‖e*_i‖_C·‖e_i‖_p ≤ r_i",
                lhs1,
                r_k,
            ));
        }
        if !tol.ge(dualnorm_c, 1.0) {
            return Err(certificate_failure(k, "‖e*_i‖_C ≥ 1", dualnorm_c, 1.0));
        }
        let diag = pairing(&estar, &e);
        if diag <= 0.0 {
            return Err(certificate_failure(k, "e*_i(e_i) > 0", diag, 0.0));
        }
        for other in &basis.elements {
            let cross = pairing(&estar, &other.e)
                .abs()
                .max(pairing(&other.estar, &e).abs());
            if !tol.le(cross, 0.0) {
                return Err(certificate_failure(
                    k,
                    "e*_i(e_j) = 0 for i ≠ j",
                    cross,
                    0.0,
                ));
            }
        }

        basis.elements.push(BasisElement {
            i: k,
            e,
            estar,
            cert: Certificate {
                norm_e,
                dualnorm_c,
                d: 1.0 / ((k as f64).exp2() * dualnorm_c),
                r: r_k,
                s,
                t,
            },
        });
    }
    Ok(basis)
}

/// Re-derive every certified quantity from scratch and re-check the basis
/// invariants; failures become report entries, never panics. The dual norms
/// are cross-checked against the sampling oracle.
pub fn verify_lsh_certificates(basis: &LshBasis, tol: Tolerance) -> AuditReport {
    let mut entries = Vec::new();
    for el in &basis.elements {
        let i = el.i;
        let norm_e = lp_fnorm(&el.e, &basis.model);
        let dualnorm_c = dual_norm_over(&el.estar, &basis.ball, &basis.model).value;
        let sampled = brute_force_dual_norm(
            &el.estar,
            &basis.ball,
            &basis.model,
            VERIFY_ORACLE_TRIALS,
            VERIFY_ORACLE_SEED ^ u64::from(i),
        );

        let mut cross = 0.0f64;
        for other in basis.elements.iter().filter(|o| o.i != i) {
            cross = cross.max(pairing(&el.estar, &other.e).abs());
        }
        let diag = pairing(&el.estar, &el.e);
        entries.push(AuditEntry::inequality(
            format!("biorthogonality[{i}]"),
            basis.len(),
            tol.le(cross, 0.0) && diag > 0.0,
            Counterexample::new(
                serde_json::json!({"index": i, "diagonal": diag}),
                cross,
                0.0,
            ),
        ));

        let lhs1 = (i as f64).exp2() * dualnorm_c * norm_e;
        let mut ineq1 = AuditEntry::inequality(
            format!("inequality1[{i}]"),
            1,
            tol.le(lhs1, el.cert.r),
            Counterexample::new(serde_json::json!({"index": i}), lhs1, el.cert.r),
        );
        ineq1.margin = Some(lhs1 / el.cert.r);
        entries.push(ineq1);

        entries.push(AuditEntry::inequality(
            format!("inequality2[{i}]"),
            1,
            tol.ge(dualnorm_c, 1.0),
            Counterexample::new(serde_json::json!({"index": i}), dualnorm_c, 1.0),
        ));

        let d_expected = 1.0 / ((i as f64).exp2() * dualnorm_c);
        let consistent = tol.eq(norm_e, el.cert.norm_e)
            && tol.eq(dualnorm_c, el.cert.dualnorm_c)
            && tol.eq(d_expected, el.cert.d);
        entries.push(AuditEntry::inequality(
            format!("certificate-consistency[{i}]"),
            1,
            consistent,
            Counterexample::new(
                serde_json::json!({
                    "index": i,
                    "stored": {"norm_e": el.cert.norm_e, "dualnorm_C": el.cert.dualnorm_c, "d": el.cert.d},
                    "recomputed": {"norm_e": norm_e, "dualnorm_C": dualnorm_c, "d": d_expected},
                }),
                d_expected,
                el.cert.d,
            ),
        ));

        // oracle never exceeds the closed form, and the included coordinate
        // extremes make it attain the closed form here
        let oracle_ok = sampled <= dualnorm_c + tol.eps * dualnorm_c.max(1.0)
            && (dualnorm_c - sampled).abs() <= 1e-6 * dualnorm_c.max(1.0);
        entries.push(AuditEntry::inequality(
            format!("oracle-agreement[{i}]"),
            VERIFY_ORACLE_TRIALS,
            oracle_ok,
            Counterexample::new(serde_json::json!({"index": i}), sampled, dualnorm_c),
        ));
    }
    AuditReport::new(entries)
}
