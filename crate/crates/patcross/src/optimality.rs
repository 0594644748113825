//! Optimality machinery: block parameters of balanced and averaged effects
//! matrices, the per-subject inequality ledger, dominance certificates
//! against competing designs, efficiency lower bounds, and the combined
//! direct-plus-carryover variance functional in three independent forms.
//!
//! ```
//! use patcross::optimality::{efficiency, functional_a_closed};
//! use patcross::ratmat::qr;
//!
//! assert_eq!(efficiency(3, 3).unwrap().e_star_decimal, "0.993103");
//! assert_eq!(functional_a_closed(3, 4, 3, 0, 0).unwrap(), qr(981, 17));
//! ```

use crate::catalog::PattersonParams;
use crate::design::{classify, stats, CrossoverDesign, DesignError};
use crate::infomat::{
    effects_info, patterson_closed, schur_effects, EffectSet, EffectsInfo, PeriodMode,
};
use crate::ratmat::{qi, qr, MatError, Q, RatMat};
use crate::symmetry::{average_brute, AverageTarget, SymmetryError};
use num::{BigInt, One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OptError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("design is not in the competing class: {0}")]
    NotInClass(String),
    #[error("treatment count does not divide subject count")]
    NotMultiple,
    #[error("design is not connected")]
    NotConnected,
    #[error("pseudoinverse blocks do not have the zero-row-sum structure the trace formula needs")]
    RowSumViolation,
    #[error("denominator is not positive (averaged determinant would be <= 0)")]
    NonpositiveDenominator,
    #[error("degenerate block parameters: {0}")]
    DegenerateParams(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Scalars (a, b, c, e) describing a 2v×2v matrix of the block shape
/// [[aH, bH], [bH, cH + eJ]], together with delta = ac - b^2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockParams {
    #[serde(with = "crate::ratmat::qstr")]
    pub a: Q,
    #[serde(with = "crate::ratmat::qstr")]
    pub b: Q,
    #[serde(with = "crate::ratmat::qstr")]
    pub c: Q,
    #[serde(with = "crate::ratmat::qstr")]
    pub e: Q,
    #[serde(with = "crate::ratmat::qstr")]
    pub delta: Q,
}

impl BlockParams {
    pub fn new(a: Q, b: Q, c: Q, e: Q) -> Self {
        let delta = &a * &c - &b * &b;
        BlockParams { a, b, c, e, delta }
    }

    /// The assembled 2v×2v matrix.
    pub fn assembled(&self, v: usize) -> RatMat {
        let h = RatMat::h_matrix(v);
        let j = RatMat::ones(v, v);
        RatMat::block2_sym(
            &h.scale(&self.a),
            &h.scale(&self.b),
            &(&h.scale(&self.c) + &j.scale(&self.e)),
        )
    }
}

/// Block parameters of the balanced design's effects matrix (periods
/// ignored): a* = vt(p-1)/(v-1), b* = -vt(p-1)/(p(v-1)),
/// c* = t(p-1)(pv-v-1)/(p(v-1)), e = t(p-1)/(pv).
pub fn patterson_block_params(p: usize, v: usize, t: i64) -> Result<BlockParams, OptError> {
    if p < 2 || v < 2 || p > v || t < 1 || (p == 2 && v == 2) {
        return Err(OptError::BadParams(format!("(p, v, t) = ({p}, {v}, {t})")));
    }
    let (pi, vi) = (p as i64, v as i64);
    Ok(BlockParams::new(
        qr(vi * t * (pi - 1), vi - 1),
        qr(-(vi * t * (pi - 1)), pi * (vi - 1)),
        qr(t * (pi - 1) * (pi * vi - vi - 1), pi * (vi - 1)),
        qr(t * (pi - 1), pi * vi),
    ))
}

/// Block parameters of the permutation-averaged effects matrix of a
/// competing design, from its scalars beta and l. Requires the design to be
/// in the competing class: no self-succession, connected, n = vt.
pub fn averaged_block_params(d: &CrossoverDesign) -> Result<BlockParams, OptError> {
    let cls = classify(d);
    if !cls.no_self_succession {
        return Err(OptError::NotInClass(
            "a treatment immediately succeeds itself".into(),
        ));
    }
    if !crate::infomat::is_connected(d) {
        return Err(OptError::NotInClass("design is not connected".into()));
    }
    let avg = crate::symmetry::average_closed(d)?;
    Ok(BlockParams::new(avg.abar, avg.bbar, avg.cbar, avg.e))
}

/// One subject's slack against the per-subject inequalities.
#[derive(Debug, Clone, Serialize)]
pub struct SubjectSlack {
    pub beta_ij: i64,
    pub l_ij: i64,
    /// beta_ij - l_ij(l_ij - 1) - p >= 0
    pub quad: i64,
    /// beta_ij - 2 l_ij - (p - 2) >= 0
    pub minus_two: i64,
    /// beta_ij - l_ij - (p - 1) >= 0
    pub minus_one: i64,
}

/// Per-subject and aggregate slacks of the counting inequalities behind the
/// dominance results.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityLedger {
    pub per_subject: Vec<SubjectSlack>,
    /// beta - pvt >= 0
    pub beta_slack: i64,
    /// (beta - l) - vt(p-1) >= 0
    pub beta_minus_l_slack: i64,
    /// (beta - 2l) - vt(p-2) >= 0
    pub beta_minus_2l_slack: i64,
}

impl InequalityLedger {
    pub fn all_hold(&self) -> bool {
        self.beta_slack >= 0
            && self.beta_minus_l_slack >= 0
            && self.beta_minus_2l_slack >= 0
            && self
                .per_subject
                .iter()
                .all(|s| s.quad >= 0 && s.minus_two >= 0 && s.minus_one >= 0)
    }
}

pub fn inequality_ledger(d: &CrossoverDesign) -> Result<InequalityLedger, OptError> {
    let cls = classify(d);
    if !cls.no_self_succession {
        return Err(OptError::NotInClass(
            "a treatment immediately succeeds itself".into(),
        ));
    }
    let s = stats(d)?;
    let (p, v) = (d.periods() as i64, d.treatments() as i64);
    let per_subject = s
        .per_subject
        .iter()
        .map(|&(beta_ij, l_ij)| SubjectSlack {
            beta_ij,
            l_ij,
            quad: beta_ij - l_ij * (l_ij - 1) - p,
            minus_two: beta_ij - 2 * l_ij - (p - 2),
            minus_one: beta_ij - l_ij - (p - 1),
        })
        .collect();
    Ok(InequalityLedger {
        per_subject,
        beta_slack: s.beta - p * v * s.t,
        beta_minus_l_slack: (s.beta - s.ell) - v * s.t * (p - 1),
        beta_minus_2l_slack: (s.beta - 2 * s.ell) - v * s.t * (p - 2),
    })
}

/// Which dominance certificate to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UOMode {
    Direct,
    Residual,
    JointBinary,
}

/// Outcome of one dominance check against one competitor.
#[derive(Debug, Clone, Serialize)]
pub struct UOReport {
    pub mode: UOMode,
    pub competitor_id: String,
    pub dominance: bool,
    pub difference_matrix: RatMat,
    /// Smallest elimination pivot of the difference when it is n.n.d.
    #[serde(serialize_with = "crate::ratmat::qstr::opt::serialize")]
    pub min_pivot: Option<Q>,
    /// Instance check of Schur-complement concavity:
    /// schur(avg M_g) - avg(schur(M_g)) is n.n.d. (None when v exceeds the
    /// brute-force cap).
    pub concavity_ok: Option<bool>,
}

fn schur_over_periods(m: &RatMat, v: usize) -> Result<RatMat, MatError> {
    m.schur(&(0..2 * v).collect::<Vec<_>>())
}

/// Dominance certificate of the balanced design with parameters `params`
/// over one competitor with the same shape.
///
/// Direct/residual modes compare the two Schur-complement closed forms
/// (balanced vs permutation-averaged competitor); the joint mode compares
/// the balanced effects matrix against the period-eliminated brute-force
/// average of the competitor's subjects-eliminated matrix, which requires a
/// binary competitor.
pub fn check_uo(
    mode: UOMode,
    params: &PattersonParams,
    competitor: &CrossoverDesign,
) -> Result<UOReport, OptError> {
    let (p, v, t) = (params.p, params.v, params.t);
    if competitor.periods() != p
        || competitor.treatments() != v
        || competitor.subjects() != v * t as usize
    {
        return Err(OptError::BadParams(format!(
            "competitor shape ({}, {}, {}) does not match ({p}, {v}, {})",
            competitor.periods(),
            competitor.treatments(),
            competitor.subjects(),
            v * t as usize,
        )));
    }
    let cls = classify(competitor);
    if !cls.no_self_succession {
        return Err(OptError::NotInClass(
            "a treatment immediately succeeds itself".into(),
        ));
    }
    if mode == UOMode::JointBinary && !cls.binary {
        return Err(OptError::NotInClass("joint mode needs a binary design".into()));
    }
    if !crate::infomat::is_connected(competitor) {
        return Err(OptError::NotInClass("design is not connected".into()));
    }

    let star = patterson_block_params(p, v, t)?;
    let bar = averaged_block_params(competitor)?;
    let h = RatMat::h_matrix(v);

    let difference = match mode {
        UOMode::Direct => {
            let coef_star = &star.a - &(&star.b * &star.b / &star.c);
            let coef_bar = &bar.a - &(&bar.b * &bar.b / &bar.c);
            h.scale(&(coef_star - coef_bar))
        }
        UOMode::Residual => {
            // the eJ parts coincide and cancel
            let coef_star = &star.c - &(&star.b * &star.b / &star.a);
            let coef_bar = &bar.c - &(&bar.b * &bar.b / &bar.a);
            h.scale(&(coef_star - coef_bar))
        }
        UOMode::JointBinary => {
            let avg_m = average_brute(competitor, AverageTarget::M)?;
            let avg_c = schur_over_periods(&avg_m, v)?;
            let star_c = patterson_closed(p, v, t)
                .map_err(|e| OptError::BadParams(e.to_string()))?
                .c_adjusted
                .assembled();
            &star_c - &avg_c
        }
    };

    let pivots = difference.ldl_pivots()?;
    let dominance = pivots.is_some();
    let min_pivot = pivots.and_then(|ps| ps.into_iter().min());

    // Instance of Schur-complement concavity: the period-eliminated average
    // dominates the average of the period-eliminated conjugates.
    let concavity_ok = if v <= crate::symmetry::BRUTE_CAP_V {
        let avg_m = average_brute(competitor, AverageTarget::M)?;
        let lhs = schur_over_periods(&avg_m, v)?;
        let rhs = average_brute(competitor, AverageTarget::CAdjusted)?;
        Some((&lhs - &rhs).is_nnd()?)
    } else {
        None
    };

    Ok(UOReport {
        mode,
        competitor_id: competitor
            .columns()
            .iter()
            .map(|c| c.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(""))
            .collect::<Vec<_>>()
            .join("-"),
        dominance,
        difference_matrix: difference,
        min_pivot,
        concavity_ok,
    })
}

/// Round a rational in [0, 1) to six decimals, half to even.
pub fn six_decimals(x: &Q) -> String {
    let scaled = x * qi(1_000_000);
    let floor = scaled.floor().to_integer();
    let frac = &scaled - Q::from_integer(floor.clone());
    let half = qr(1, 2);
    let rounded = if frac > half {
        floor + BigInt::one()
    } else if frac < half {
        floor
    } else if (&floor % BigInt::from(2)).is_zero() {
        floor
    } else {
        floor + BigInt::one()
    };
    let units = BigInt::from(1_000_000);
    let int_part = &rounded / &units;
    let frac_part = (&rounded % &units + &units) % &units;
    format!("{int_part}.{frac_part:06}")
}

/// Efficiency lower bound of a balanced design for direct effects against
/// the approximate-theory benchmark.
#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyRow {
    pub p: usize,
    pub v: usize,
    /// Exact value A/(A+v) with A = v^2 (p-1)^2 (pv(p-1) - p - v).
    #[serde(with = "crate::ratmat::qstr")]
    pub e_star: Q,
    /// Six-decimal rounding (half to even).
    pub e_star_decimal: String,
}

/// Compute e* both as the displayed ratio of bracketed factors and as
/// A/(A+v); the two must agree exactly.
pub fn efficiency(p: usize, v: usize) -> Result<EfficiencyRow, OptError> {
    if p < 3 || v < p {
        return Err(OptError::BadParams(format!(
            "need 3 <= p <= v, got (p, v) = ({p}, {v})"
        )));
    }
    let (pi, vi) = (p as i64, v as i64);
    let ratio = (qi(1) - qr(vi, pi * (pi * vi - vi - 1)))
        / (qi(1) - qr(pi * vi - vi + 1, pi * vi * (pi - 1) * (pi - 1)));
    let a = vi * vi * (pi - 1) * (pi - 1) * (pi * vi * (pi - 1) - pi - vi);
    let closed = qr(a, a + vi);
    assert_eq!(ratio, closed, "the two e* expressions must agree exactly");
    Ok(EfficiencyRow {
        p,
        v,
        e_star_decimal: six_decimals(&closed),
        e_star: closed,
    })
}

/// How the variance functional is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AMethod {
    /// Literal sum over the constrained contrast quadruples.
    Enumerate,
    /// The diagonal-trace formula (needs zero-row-sum pseudoinverse blocks).
    Trace,
}

fn effects_connected(e: &EffectsInfo) -> bool {
    // rank on the contrast space: period-ignored matrices carry an extra
    // all-ones component that must not count
    let v = e.v();
    let h = RatMat::h_matrix(v);
    let contrast_rank =
        |m: &RatMat| h.matmul(m).matmul(&h).rank();
    contrast_rank(&schur_effects(e, EffectSet::Direct)) == v - 1
        && contrast_rank(&schur_effects(e, EffectSet::Residual)) == v - 1
}

/// The combined functional: total variance of all estimators of
/// tau_i + delta_j - tau_i' - delta_j' over ordered quadruples with
/// i != j, i != i', i' != j', j != j' (in units of sigma^2).
///
/// `allow_equal_direct` / `allow_equal_residual` relax i != i' / j != j',
/// adding pure residual / pure direct comparisons.
pub fn functional_a_with(
    e: &EffectsInfo,
    method: AMethod,
    allow_equal_direct: bool,
    allow_equal_residual: bool,
) -> Result<Q, OptError> {
    if !effects_connected(e) {
        return Err(OptError::NotConnected);
    }
    let v = e.v();
    let cplus = e.assembled().mp_inverse();
    let idx: Vec<usize> = (0..v).collect();
    let idx2: Vec<usize> = (v..2 * v).collect();
    let omega = cplus.select(&idx, &idx);
    let theta = cplus.select(&idx, &idx2);
    let delta = cplus.select(&idx2, &idx2);
    match method {
        AMethod::Enumerate => {
            let mut total = Q::zero();
            for i in 0..v {
                for i2 in 0..v {
                    if !allow_equal_direct && i == i2 {
                        continue;
                    }
                    for j in 0..v {
                        if j == i {
                            continue;
                        }
                        for j2 in 0..v {
                            if j2 == i2 || (!allow_equal_residual && j2 == j) {
                                continue;
                            }
                            // l^t C+ l for l = e_i - e_i2 on the direct side
                            // and e_j - e_j2 on the residual side
                            let var_tau =
                                omega.at(i, i) + omega.at(i2, i2) - omega.at(i, i2) - omega.at(i2, i);
                            let var_delta =
                                delta.at(j, j) + delta.at(j2, j2) - delta.at(j, j2) - delta.at(j2, j);
                            let cov = theta.at(i, j) - theta.at(i, j2) - theta.at(i2, j)
                                + theta.at(i2, j2);
                            total += var_tau + var_delta + &(qi(2) * cov);
                        }
                    }
                }
            }
            Ok(total)
        }
        AMethod::Trace => {
            if allow_equal_direct || allow_equal_residual {
                return Err(OptError::BadParams(
                    "the trace formula covers only the standard contrast set".into(),
                ));
            }
            // Split off a constant-J part from the residual block, then all
            // three blocks must have zero row and column sums.
            let c_j = delta.grand_sum() / qi((v * v) as i64);
            let delta0 = &delta - &RatMat::ones(v, v).scale(&c_j);
            let zero_sums = |m: &RatMat| {
                m.row_sums().iter().all(|s| s.is_zero())
                    && m.transpose().row_sums().iter().all(|s| s.is_zero())
            };
            if !(zero_sums(&omega) && zero_sums(&theta) && zero_sums(&delta0)) {
                return Err(OptError::RowSumViolation);
            }
            let vi = v as i64;
            let u = qi((vi - 1) + (vi - 2) * (vi - 2));
            let total = qi(2 * vi)
                * (&u * &(omega.trace() + delta0.trace())
                    - qi(2 * (vi - 1)) * theta.trace());
            Ok(total)
        }
    }
}

/// [`functional_a_with`] over the standard contrast set.
pub fn functional_a(e: &EffectsInfo, method: AMethod) -> Result<Q, OptError> {
    functional_a_with(e, method, false, false)
}

/// The closed-form value of the functional at the averaged effects matrix
/// with slacks (x, y), as a rational function of the design parameters.
pub fn functional_a_closed(p: usize, v: usize, t: i64, x: i64, y: i64) -> Result<Q, OptError> {
    if p < 2 || v < 2 || t < 1 || (p == 2 && v == 2) {
        return Err(OptError::BadParams(format!("(p, v, t) = ({p}, {v}, {t})")));
    }
    if p == 2 && y != 0 {
        return Err(OptError::BadParams(
            "with two periods the slack y must be zero".into(),
        ));
    }
    let (pi, vi) = (p as i64, v as i64);
    let c11 = qi(2 * pi * vi * (vi - 1)
        * (2 * pi * vi * vi * vi - 6 * pi * vi * vi + 6 * pi * vi - vi * vi * vi + 2 * vi - 3));
    let c12 = qr(
        -4 * pi * vi * (vi - 1) * (vi * vi - 2 * vi + 2),
        t * (pi - 1),
    );
    let c13 = c12.clone();
    let c21 = qi(t * vi * (pi - 1) * (pi * pi * vi - pi * vi - pi - vi));
    let c22 = qi(-(2 * pi * vi + vi - 1));
    let c23 = qi(-2 * (pi * vi - 1));
    let denom = &c21 + &(&c22 * qi(x)) + &(&c23 * qi(y)) - qr(y * y, t * (pi - 1));
    if !denom.is_positive() {
        return Err(OptError::NonpositiveDenominator);
    }
    let numer = &c11 + &(&c12 * qi(x)) + &(&c13 * qi(y));
    // The (v-1) factor makes the rational function agree with the
    // block-parameter evaluation of the functional; see the annihilation
    // and averaging tests.
    Ok(qi(vi - 1) * numer / denom)
}

/// The numerator/denominator coefficients of the closed-form functional,
/// for positivity checks.
pub fn functional_a_coefficients(p: usize, v: usize, t: i64) -> [Q; 6] {
    let (pi, vi) = (p as i64, v as i64);
    [
        qi(2 * pi * vi * (vi - 1)
            * (2 * pi * vi * vi * vi - 6 * pi * vi * vi + 6 * pi * vi - vi * vi * vi + 2 * vi
                - 3)),
        qr(
            -4 * pi * vi * (vi - 1) * (vi * vi - 2 * vi + 2),
            t * (pi - 1),
        ),
        qr(
            -4 * pi * vi * (vi - 1) * (vi * vi - 2 * vi + 2),
            t * (pi - 1),
        ),
        qi(t * vi * (pi - 1) * (pi * pi * vi - pi * vi - pi - vi)),
        qi(-(2 * pi * vi + vi - 1)),
        qi(-2 * (pi * vi - 1)),
    ]
}

/// The functional evaluated directly from block parameters:
/// 2v(v-1) [ u (a + c)/delta + 2(v-1) b/delta ], u = (v-1) + (v-2)^2.
pub fn functional_a_from_block_params(bp: &BlockParams, v: usize) -> Result<Q, OptError> {
    if !bp.delta.is_positive() {
        return Err(OptError::DegenerateParams("delta must be positive".into()));
    }
    let vi = v as i64;
    let u = qi((vi - 1) + (vi - 2) * (vi - 2));
    Ok(qi(2 * vi * (vi - 1))
        * (&u * &(&bp.a + &bp.c) + qi(2 * (vi - 1)) * &bp.b)
        / &bp.delta)
}

/// The closed-form Moore–Penrose inverse of a block-parameter matrix:
/// [[cH/delta, -bH/delta], [-bH/delta, aH/delta + J/(e v^2)]].
pub fn mp_closed_form(bp: &BlockParams, v: usize) -> Result<RatMat, OptError> {
    if !bp.delta.is_positive() || !bp.e.is_positive() {
        return Err(OptError::DegenerateParams(
            "delta and e must be positive".into(),
        ));
    }
    let h = RatMat::h_matrix(v);
    let j = RatMat::ones(v, v);
    let inv_delta = qi(1) / &bp.delta;
    Ok(RatMat::block2_sym(
        &h.scale(&(&bp.c * &inv_delta)),
        &h.scale(&(-&bp.b * &inv_delta)),
        &(&h.scale(&(&bp.a * &inv_delta))
            + &j.scale(&(qi(1) / (&bp.e * qi((v * v) as i64))))),
    ))
}

/// Exact spectral certificate for a block-parameter matrix, with no
/// irrational arithmetic: the two trivial eigenvectors, the quadratic
/// annihilation on the contrast space, and sign conditions putting both
/// quadratic roots at or above zero.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// C (1; 0) = 0.
    pub null_vector_ok: bool,
    /// C (0; 1) = ev (0; 1).
    pub scaled_ones_ok: bool,
    /// (C_H)^2 - (a+c) C_H + delta Pi = 0 with C_H the matrix without its
    /// eJ part and Pi = diag(H, H).
    pub annihilation_ok: bool,
    /// a + c >= 0 and delta >= 0, so both roots of
    /// z^2 - (a+c) z + delta are nonnegative.
    pub roots_nonnegative: bool,
    /// delta = 0 flags a zero eigenvalue on the contrast space.
    pub rank_deficient: bool,
    /// Coefficients (a+c, delta) of the characteristic quadratic.
    #[serde(serialize_with = "crate::ratmat::qstr::pair::serialize")]
    pub quadratic: (Q, Q),
}

impl SpectrumReport {
    pub fn all_pass(&self) -> bool {
        self.null_vector_ok && self.scaled_ones_ok && self.annihilation_ok && self.roots_nonnegative
    }
}

pub fn spectrum_certificate(bp: &BlockParams, v: usize) -> SpectrumReport {
    let m = bp.assembled(v);
    let mut ones_first = vec![Q::zero(); 2 * v];
    let mut ones_second = vec![Q::zero(); 2 * v];
    for i in 0..v {
        ones_first[i] = Q::one();
        ones_second[v + i] = Q::one();
    }
    let null_vector_ok = m.matvec(&ones_first).iter().all(|x| x.is_zero());
    let ev = &bp.e * qi(v as i64);
    let scaled_ones_ok = m
        .matvec(&ones_second)
        .iter()
        .zip(&ones_second)
        .all(|(got, want)| got == &(&ev * want));

    let h = RatMat::h_matrix(v);
    let c_h = RatMat::block2_sym(
        &h.scale(&bp.a),
        &h.scale(&bp.b),
        &h.scale(&bp.c),
    );
    let pi = RatMat::block2_sym(&h, &RatMat::zeros(v, v), &h);
    let trace_coef = &bp.a + &bp.c;
    let annihilated =
        &(&c_h.matmul(&c_h) - &c_h.scale(&trace_coef)) + &pi.scale(&bp.delta);
    let annihilation_ok = annihilated.is_zero();

    SpectrumReport {
        null_vector_ok,
        scaled_ones_ok,
        annihilation_ok,
        roots_nonnegative: !trace_coef.is_negative() && !bp.delta.is_negative(),
        rank_deficient: bp.delta.is_zero(),
        quadratic: (trace_coef, bp.delta.clone()),
    }
}

/// Instance report for period adjustment: the adjusted effects matrix is
/// dominated by the ignored one, the functional cannot decrease, and for
/// period-uniform designs the direct Schur complements coincide.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodReport {
    pub dominance_ok: bool,
    #[serde(with = "crate::ratmat::qstr")]
    pub a_ignored: Q,
    #[serde(with = "crate::ratmat::qstr")]
    pub a_adjusted: Q,
    pub a_monotone_ok: bool,
    pub direct_schur_equal: bool,
    pub a_equal: bool,
}

pub fn period_monotonicity(d: &CrossoverDesign) -> Result<PeriodReport, OptError> {
    if !crate::infomat::is_connected(d) {
        return Err(OptError::NotConnected);
    }
    let ign = effects_info(d, PeriodMode::Ignored);
    let adj = effects_info(d, PeriodMode::Adjusted);
    let dominance_ok = (&ign.assembled() - &adj.assembled()).is_nnd()?;
    let a_ignored = functional_a(&ign, AMethod::Enumerate)?;
    let a_adjusted = functional_a(&adj, AMethod::Enumerate)?;
    let direct_schur_equal =
        schur_effects(&ign, EffectSet::Direct) == schur_effects(&adj, EffectSet::Direct);
    Ok(PeriodReport {
        dominance_ok,
        a_monotone_ok: a_adjusted >= a_ignored,
        a_equal: a_adjusted == a_ignored,
        a_ignored,
        a_adjusted,
        direct_schur_equal,
    })
}
