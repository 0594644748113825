//! Information matrices for crossover designs: the joint matrix for all
//! effect groups, its Schur reductions eliminating subjects and periods, the
//! balanced-design closed forms, an independent model-matrix oracle,
//! connectedness, and the approximate-theory benchmark matrix.
//!
//! ```
//! use patcross::catalog::fixture_4_3_12;
//! use patcross::infomat::{effects_info, schur_effects, EffectSet, PeriodMode};
//! use patcross::ratmat::{qr, RatMat};
//!
//! let e = effects_info(&fixture_4_3_12(), PeriodMode::Adjusted);
//! let direct = schur_effects(&e, EffectSet::Direct);
//! assert_eq!(direct, RatMat::h_matrix(4).scale(&qr(136, 21)));
//! ```

use crate::design::{profile, CrossoverDesign};
use crate::ratmat::{qi, qr, MatError, Q, RatMat};
use num::Zero;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InfoError {
    #[error("bad balanced-design parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Which nuisance effects the period block treatment takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PeriodMode {
    /// Periods absent from the model (no alpha terms).
    Ignored,
    /// Periods in the model and eliminated by Schur complement.
    Adjusted,
}

/// Ordered block layout of a joint information matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockLayout {
    /// Direct-effect block size (v).
    pub direct: usize,
    /// Residual-effect block size (v).
    pub residual: usize,
    /// Period block size (p), 0 when eliminated.
    pub periods: usize,
    /// Subject block size (n), 0 when eliminated.
    pub subjects: usize,
}

/// A joint information matrix with its block layout
/// (direct, residual, periods, subjects in that order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JointInfo {
    pub matrix: RatMat,
    pub layout: BlockLayout,
}

impl JointInfo {
    pub fn order(&self) -> usize {
        self.layout.direct + self.layout.residual + self.layout.periods + self.layout.subjects
    }
}

/// The partitioned 2v×2v direct/residual information matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EffectsInfo {
    pub c11: RatMat,
    pub c12: RatMat,
    pub c22: RatMat,
    pub periods: PeriodMode,
}

impl EffectsInfo {
    /// The full symmetric 2v×2v matrix [[C11, C12], [C12^t, C22]].
    pub fn assembled(&self) -> RatMat {
        RatMat::block2_sym(&self.c11, &self.c12, &self.c22)
    }

    pub fn v(&self) -> usize {
        self.c11.rows()
    }
}

/// The joint information matrix for (direct, residual, period, subject)
/// effects: raw normal-equation blocks built from the frequency matrices.
pub fn info_full(d: &CrossoverDesign) -> JointInfo {
    let (p, n, v) = (d.periods(), d.subjects(), d.treatments());
    let f = profile(d);
    let k = 2 * v + p + n;
    let mut m = RatMat::zeros(k, k);
    let diag = |vals: &[i64]| {
        RatMat::from_fn(vals.len(), vals.len(), |i, j| {
            if i == j {
                qi(vals[i])
            } else {
                Q::zero()
            }
        })
    };
    m.paste(0, 0, &diag(&f.r));
    m.paste(0, v, &f.s_mat);
    m.paste(v, 0, &f.s_mat.transpose());
    m.paste(0, 2 * v, &f.l_mat);
    m.paste(2 * v, 0, &f.l_mat.transpose());
    m.paste(0, 2 * v + p, &f.n_mat);
    m.paste(2 * v + p, 0, &f.n_mat.transpose());
    m.paste(v, v, &diag(&f.r_tilde));
    m.paste(v, 2 * v, &f.l_tilde);
    m.paste(2 * v, v, &f.l_tilde.transpose());
    m.paste(v, 2 * v + p, &f.n_tilde);
    m.paste(2 * v + p, v, &f.n_tilde.transpose());
    m.paste(2 * v, 2 * v, &RatMat::identity(p).scale(&qi(n as i64)));
    m.paste(2 * v, 2 * v + p, &RatMat::ones(p, n));
    m.paste(2 * v + p, 2 * v, &RatMat::ones(n, p));
    m.paste(
        2 * v + p,
        2 * v + p,
        &RatMat::identity(n).scale(&qi(p as i64)),
    );
    JointInfo {
        matrix: m,
        layout: BlockLayout {
            direct: v,
            residual: v,
            periods: p,
            subjects: n,
        },
    }
}

/// The (2v+p)×(2v+p) information matrix for (direct, residual, period)
/// effects eliminating subjects, from the frequency-matrix formulas.
pub fn info_elim_subjects(d: &CrossoverDesign) -> JointInfo {
    let (p, n, v) = (d.periods(), d.subjects(), d.treatments());
    let f = profile(d);
    let pq = qi(p as i64);
    let diag = |vals: &[i64]| {
        RatMat::from_fn(vals.len(), vals.len(), |i, j| {
            if i == j {
                qi(vals[i])
            } else {
                Q::zero()
            }
        })
    };
    let nnt = f.n_mat.matmul(&f.n_mat.transpose());
    let nnt_tilde = f.n_mat.matmul(&f.n_tilde.transpose());
    let ntnt = f.n_tilde.matmul(&f.n_tilde.transpose());
    let j_np = RatMat::ones(n, p);
    let b11 = &diag(&f.r) - &nnt.scale(&(qi(1) / &pq));
    let b12 = &f.s_mat - &nnt_tilde.scale(&(qi(1) / &pq));
    let b13 = &f.l_mat - &f.n_mat.matmul(&j_np).scale(&(qi(1) / &pq));
    let b22 = &diag(&f.r_tilde) - &ntnt.scale(&(qi(1) / &pq));
    let b23 = &f.l_tilde - &f.n_tilde.matmul(&j_np).scale(&(qi(1) / &pq));
    let b33 = &RatMat::identity(p).scale(&qi(n as i64))
        - &RatMat::ones(p, p).scale(&qr(n as i64, p as i64));
    let k = 2 * v + p;
    let mut m = RatMat::zeros(k, k);
    m.paste(0, 0, &b11);
    m.paste(0, v, &b12);
    m.paste(v, 0, &b12.transpose());
    m.paste(0, 2 * v, &b13);
    m.paste(2 * v, 0, &b13.transpose());
    m.paste(v, v, &b22);
    m.paste(v, 2 * v, &b23);
    m.paste(2 * v, v, &b23.transpose());
    m.paste(2 * v, 2 * v, &b33);
    JointInfo {
        matrix: m,
        layout: BlockLayout {
            direct: v,
            residual: v,
            periods: p,
            subjects: 0,
        },
    }
}

/// The 2v×2v direct/residual information matrix eliminating subjects, with
/// periods either ignored (plain blocks) or adjusted (subtracting the
/// explicit period-correction blocks).
pub fn effects_info(d: &CrossoverDesign, periods: PeriodMode) -> EffectsInfo {
    let m = info_elim_subjects(d);
    let v = d.treatments();
    let idx: Vec<usize> = (0..v).collect();
    let idx2: Vec<usize> = (v..2 * v).collect();
    let c11 = m.matrix.select(&idx, &idx);
    let c12 = m.matrix.select(&idx, &idx2);
    let c22 = m.matrix.select(&idx2, &idx2);
    match periods {
        PeriodMode::Ignored => EffectsInfo {
            c11,
            c12,
            c22,
            periods,
        },
        PeriodMode::Adjusted => {
            let (p, n) = (d.periods(), d.subjects());
            let f = profile(d);
            let nq = qi(n as i64);
            let npq = qi((n * p) as i64);
            let j_np = RatMat::ones(n, p);
            let corr11 = &f.l_mat.matmul(&f.l_mat.transpose()).scale(&(qi(1) / &nq))
                - &f.n_mat
                    .matmul(&j_np)
                    .matmul(&f.l_mat.transpose())
                    .scale(&(qi(1) / &npq));
            let corr12 = &f.l_mat.matmul(&f.l_tilde.transpose()).scale(&(qi(1) / &nq))
                - &f.n_mat
                    .matmul(&j_np)
                    .matmul(&f.l_tilde.transpose())
                    .scale(&(qi(1) / &npq));
            let corr22 = &f
                .l_tilde
                .matmul(&f.l_tilde.transpose())
                .scale(&(qi(1) / &nq))
                - &f.n_tilde
                    .matmul(&j_np)
                    .matmul(&f.l_tilde.transpose())
                    .scale(&(qi(1) / &npq));
            EffectsInfo {
                c11: &c11 - &corr11,
                c12: &c12 - &corr12,
                c22: &c22 - &corr22,
                periods,
            }
        }
    }
}

/// Independent oracle: build the pn×(2v+p+n) model matrix row by row from
/// the mean model (no residual column in period-1 rows), form X^t X, and
/// eliminate the requested nuisance blocks by Schur complement. The general
/// mean is confounded with the period and subject blocks, so it never
/// appears as a separate column.
pub fn info_via_model_matrix(
    d: &CrossoverDesign,
    eliminate_periods: bool,
    eliminate_subjects: bool,
) -> JointInfo {
    let (p, n, v) = (d.periods(), d.subjects(), d.treatments());
    let cols = 2 * v + p + n;
    let mut x = RatMat::zeros(p * n, cols);
    for i in 0..p {
        for j in 0..n {
            let row = i * n + j;
            x.set(row, d.at(i, j) - 1, qi(1));
            if i >= 1 {
                x.set(row, v + d.at(i - 1, j) - 1, qi(1));
            }
            x.set(row, 2 * v + i, qi(1));
            x.set(row, 2 * v + p + j, qi(1));
        }
    }
    let xtx = x.transpose().matmul(&x);
    let mut keep: Vec<usize> = (0..2 * v).collect();
    if !eliminate_periods {
        keep.extend(2 * v..2 * v + p);
    }
    if !eliminate_subjects {
        keep.extend(2 * v + p..2 * v + p + n);
    }
    let matrix = xtx.schur(&keep).expect("X^t X is n.n.d. and symmetric");
    JointInfo {
        matrix,
        layout: BlockLayout {
            direct: v,
            residual: v,
            periods: if eliminate_periods { 0 } else { p },
            subjects: if eliminate_subjects { 0 } else { n },
        },
    }
}

/// All balanced-design closed forms in one bundle.
#[derive(Debug, Clone)]
pub struct PattersonClosed {
    /// The (2v+p)×(2v+p) subjects-eliminated matrix.
    pub m: JointInfo,
    pub c_adjusted: EffectsInfo,
    pub c_ignored: EffectsInfo,
}

fn check_params(p: usize, v: usize, t: i64) -> Result<i64, InfoError> {
    if p < 2 || v < 2 || p > v || t < 1 || (p == 2 && v == 2) {
        return Err(InfoError::BadParams(format!("(p, v, t) = ({p}, {v}, {t})")));
    }
    let num = t * (p as i64 - 1);
    if num % (v as i64 - 1) != 0 {
        return Err(InfoError::BadParams(format!(
            "lambda = t(p-1)/(v-1) = {num}/{} is not integral",
            v as i64 - 1
        )));
    }
    Ok(num / (v as i64 - 1))
}

/// Evaluate the balanced-design closed forms for the subjects-eliminated
/// joint matrix and for both period modes of the 2v×2v effects matrix.
pub fn patterson_closed(p: usize, v: usize, t: i64) -> Result<PattersonClosed, InfoError> {
    check_params(p, v, t)?;
    let h = RatMat::h_matrix(v);
    let j = RatMat::ones(v, v);
    let (pi, vi) = (p as i64, v as i64);
    let a_star = qr(vi * t * (pi - 1), vi - 1);
    let b_star = qr(-(vi * t * (pi - 1)), pi * (vi - 1));
    let c_star = qr(t * (pi - 1) * (pi * vi - vi - 1), pi * (vi - 1));
    let e = qr(t * (pi - 1), pi * vi);

    let c11 = h.scale(&a_star);
    let c12 = h.scale(&b_star);
    let c22_adj = h.scale(&c_star);
    let c22_ign = &c22_adj + &j.scale(&e);

    // delta-period block: each row is (t/p) * (-(p-1), 1, ..., 1)
    let da = RatMat::from_fn(v, p, |_, k| {
        if k == 0 {
            qr(-t * (pi - 1), pi)
        } else {
            qr(t, pi)
        }
    });
    let n = v * t as usize;
    let alpha_block = &RatMat::identity(p).scale(&qi(n as i64))
        - &RatMat::ones(p, p).scale(&qr(n as i64, pi));
    let k = 2 * v + p;
    let mut m = RatMat::zeros(k, k);
    m.paste(0, 0, &c11);
    m.paste(0, v, &c12);
    m.paste(v, 0, &c12.transpose());
    m.paste(v, v, &c22_ign);
    m.paste(v, 2 * v, &da);
    m.paste(2 * v, v, &da.transpose());
    m.paste(2 * v, 2 * v, &alpha_block);
    Ok(PattersonClosed {
        m: JointInfo {
            matrix: m,
            layout: BlockLayout {
                direct: v,
                residual: v,
                periods: p,
                subjects: 0,
            },
        },
        c_adjusted: EffectsInfo {
            c11: c11.clone(),
            c12: c12.clone(),
            c22: c22_adj,
            periods: PeriodMode::Adjusted,
        },
        c_ignored: EffectsInfo {
            c11,
            c12,
            c22: c22_ign,
            periods: PeriodMode::Ignored,
        },
    })
}

/// Which effect set a Schur complement retains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EffectSet {
    Direct,
    Residual,
}

/// Information for one effect set eliminating the other by Moore–Penrose
/// Schur complement: C11 - C12 C22+ C21 or C22 - C21 C11+ C12.
pub fn schur_effects(e: &EffectsInfo, which: EffectSet) -> RatMat {
    match which {
        EffectSet::Direct => {
            &e.c11
                - &e.c12
                    .matmul(&e.c22.mp_inverse())
                    .matmul(&e.c12.transpose())
        }
        EffectSet::Residual => {
            &e.c22
                - &e
                    .c12
                    .transpose()
                    .matmul(&e.c11.mp_inverse())
                    .matmul(&e.c12)
        }
    }
}

/// A design is connected when every pairwise direct and residual contrast is
/// estimable eliminating periods and subjects: both adjusted Schur
/// complements have rank v-1.
pub fn is_connected(d: &CrossoverDesign) -> bool {
    let e = effects_info(d, PeriodMode::Adjusted);
    let v = d.treatments();
    schur_effects(&e, EffectSet::Direct).rank() == v - 1
        && schur_effects(&e, EffectSet::Residual).rank() == v - 1
}

/// The approximate-theory benchmark information matrix for direct effects:
/// (vt/(v-1)) { p - 1 - 1/p - 1/(p(p-1)v) } H.
pub fn kushner_info(p: usize, v: usize, t: i64) -> Result<RatMat, InfoError> {
    check_params(p, v, t)?;
    let (pi, vi) = (p as i64, v as i64);
    let brace = qi(pi - 1) - qr(1, pi) - qr(1, pi * (pi - 1) * vi);
    Ok(RatMat::h_matrix(v).scale(&(qr(vi * t, vi - 1) * brace)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{fixture_4_3_12, williams};
    use crate::design::{profile, random_design, CrossoverDesign};

    #[test]
    fn info_full_fixture_blocks() {
        let d = fixture_4_3_12();
        let ji = info_full(&d);
        assert_eq!(ji.order(), 2 * 4 + 3 + 12);
        // alpha block = 12 I_3, gamma block = 3 I_12
        for i in 0..3 {
            assert_eq!(ji.matrix.at(8 + i, 8 + i), &qi(12));
        }
        for j in 0..12 {
            assert_eq!(ji.matrix.at(11 + j, 11 + j), &qi(3));
        }
        // (direct, residual) off-diagonal block is S
        let f = profile(&d);
        let s = ji
            .matrix
            .select(&(0..4).collect::<Vec<_>>(), &(4..8).collect::<Vec<_>>());
        assert_eq!(s, f.s_mat);
        assert!(ji.matrix.is_symmetric());
    }

    #[test]
    fn oracle_matches_formula_paths() {
        for seed in 0..5 {
            let d = random_design(3, 3, 6, seed, true);
            assert_eq!(
                info_full(&d).matrix,
                info_via_model_matrix(&d, false, false).matrix
            );
            assert_eq!(
                info_elim_subjects(&d).matrix,
                info_via_model_matrix(&d, false, true).matrix
            );
            assert_eq!(
                effects_info(&d, PeriodMode::Adjusted).assembled(),
                info_via_model_matrix(&d, true, true).matrix
            );
        }
    }

    #[test]
    fn fixture_matches_closed_form() {
        let d = fixture_4_3_12();
        let closed = patterson_closed(3, 4, 3).unwrap();
        assert_eq!(info_elim_subjects(&d).matrix, closed.m.matrix);
        // the direct-period block of the closed form is zero
        let m = &closed.m.matrix;
        for i in 0..4 {
            for k in 0..3 {
                assert!(m.at(i, 8 + k).is_zero());
            }
        }
        assert_eq!(effects_info(&d, PeriodMode::Ignored), closed.c_ignored);
        assert_eq!(effects_info(&d, PeriodMode::Adjusted), closed.c_adjusted);
    }

    #[test]
    fn fixture_effects_values() {
        let d = fixture_4_3_12();
        let h = RatMat::h_matrix(4);
        let j = RatMat::ones(4, 4);
        let ign = effects_info(&d, PeriodMode::Ignored);
        assert_eq!(ign.c11, h.scale(&qi(8)));
        assert_eq!(ign.c12, h.scale(&qr(-8, 3)));
        assert_eq!(ign.c22, &h.scale(&qr(14, 3)) + &j.scale(&qr(1, 2)));
        let adj = effects_info(&d, PeriodMode::Adjusted);
        assert_eq!(adj.c11, ign.c11);
        assert_eq!(adj.c12, ign.c12);
        assert_eq!(adj.c22, h.scale(&qr(14, 3)));
    }

    #[test]
    fn closed_form_small_params() {
        let closed = patterson_closed(3, 3, 2).unwrap();
        let h = RatMat::h_matrix(3);
        assert_eq!(closed.c_ignored.c11, h.scale(&qi(6)));
        assert_eq!(closed.c_ignored.c12, h.scale(&qi(-2)));
        assert!(matches!(
            patterson_closed(3, 4, 1),
            Err(InfoError::BadParams(_))
        ));
    }

    #[test]
    fn adjusted_dominated_by_ignored() {
        for seed in 0..5 {
            let d = random_design(3, 4, 8, seed, false);
            let adj = effects_info(&d, PeriodMode::Adjusted).assembled();
            let ign = effects_info(&d, PeriodMode::Ignored).assembled();
            assert!((&ign - &adj).is_nnd().unwrap());
        }
    }

    #[test]
    fn schur_effects_fixture() {
        let d = fixture_4_3_12();
        let h = RatMat::h_matrix(4);
        let expect = h.scale(&qr(136, 21));
        for mode in [PeriodMode::Ignored, PeriodMode::Adjusted] {
            let e = effects_info(&d, mode);
            assert_eq!(schur_effects(&e, EffectSet::Direct), expect);
        }
        // residual, ignoring periods: (34/9) H + (1/2) J
        let e = effects_info(&d, PeriodMode::Ignored);
        let expect =
            &h.scale(&qr(34, 9)) + &RatMat::ones(4, 4).scale(&qr(1, 2));
        assert_eq!(schur_effects(&e, EffectSet::Residual), expect);
        // C12 = 0 leaves the direct block unchanged
        let trivial = EffectsInfo {
            c11: h.clone(),
            c12: RatMat::zeros(4, 4),
            c22: RatMat::identity(4),
            periods: PeriodMode::Adjusted,
        };
        assert_eq!(schur_effects(&trivial, EffectSet::Direct), h);
    }

    #[test]
    fn connectedness() {
        assert!(is_connected(&fixture_4_3_12()));
        assert!(is_connected(&williams(4).unwrap()));
        // p = v = 2 case: residual contrast not estimable
        let d = CrossoverDesign::from_columns(2, 2, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(!is_connected(&d));
        let e = effects_info(&d, PeriodMode::Adjusted);
        // one estimable combination mixes tau and delta, so each raw block
        // has rank 1 but both Schur complements collapse entirely
        assert_eq!(e.c11.rank(), 1);
        assert_eq!(schur_effects(&e, EffectSet::Direct).rank(), 0);
        assert_eq!(schur_effects(&e, EffectSet::Residual).rank(), 0);
    }

    #[test]
    fn kushner_values() {
        assert_eq!(
            kushner_info(3, 4, 3).unwrap(),
            RatMat::h_matrix(4).scale(&qr(13, 2))
        );
        assert_eq!(
            kushner_info(3, 3, 2).unwrap(),
            RatMat::h_matrix(3).scale(&qr(29, 6))
        );
        // benchmark dominates the balanced design for every catalog triple
        for (p, v, n) in crate::catalog::table1() {
            let t = (n / v) as i64;
            let kush = kushner_info(p, v, t).unwrap();
            let closed = patterson_closed(p, v, t).unwrap();
            let direct = schur_effects(&closed.c_adjusted, EffectSet::Direct);
            assert!((&kush - &direct).is_nnd().unwrap(), "(p,v) = ({p},{v})");
        }
    }
}
