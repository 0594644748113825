//! Known balanced-crossover constructions and their combinatorial verifier:
//! the printed 3×12 fixture, Williams squares, minimal-parameter arithmetic,
//! and the table of smallest known designs for small period counts.
//!
//! ```
//! use patcross::catalog::{verify_patterson, williams};
//!
//! let report = verify_patterson(&williams(5).unwrap());
//! assert!(report.all_pass());
//! assert_eq!(report.params.unwrap().lambda, 2);
//! ```

use crate::design::{classify, profile, CrossoverDesign};
use crate::ratmat::{qi, Q};
use num::Zero;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("p = v = 2 is excluded: neither direct nor residual effects are estimable")]
    ExcludedCase,
    #[error("need 2 <= p <= v, got p = {p}, v = {v}")]
    BadShape { p: usize, v: usize },
    #[error("v = {0} is too small for a Williams construction")]
    TooSmall(usize),
    #[error("t = {t} is not a positive multiple of the minimal t = {minimal}")]
    BadMultiple { t: i64, minimal: i64 },
}

/// The parameter relations a balanced design must satisfy:
/// p <= v, n = vt, lambda (v-1) = t (p-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PattersonParams {
    pub p: usize,
    pub v: usize,
    pub t: i64,
    pub lambda: i64,
    pub n: usize,
}

/// Divisibility-minimal parameters for (p, v): the smallest t making
/// lambda = t(p-1)/(v-1) integral. A necessary condition only; the minimal
/// n for which a design actually exists (see [`table1`]) may be larger.
pub fn patterson_params(p: usize, v: usize) -> Result<PattersonParams, CatalogError> {
    if p == 2 && v == 2 {
        return Err(CatalogError::ExcludedCase);
    }
    if p < 2 || v < 2 || p > v {
        return Err(CatalogError::BadShape { p, v });
    }
    let g = num::integer::gcd(v as i64 - 1, p as i64 - 1);
    let t = (v as i64 - 1) / g;
    let lambda = t * (p as i64 - 1) / (v as i64 - 1);
    Ok(PattersonParams {
        p,
        v,
        t,
        lambda,
        n: v * t as usize,
    })
}

/// Parameters at an explicit t: lambda = t(p-1)/(v-1) must be integral.
pub fn params_with_t(p: usize, v: usize, t: i64) -> Result<PattersonParams, CatalogError> {
    let base = patterson_params(p, v)?;
    if t < 1 || t % base.t != 0 {
        return Err(CatalogError::BadMultiple { t, minimal: base.t });
    }
    Ok(PattersonParams {
        p,
        v,
        t,
        lambda: t * (p as i64 - 1) / (v as i64 - 1),
        n: v * t as usize,
    })
}

/// The 18 (p, v, n) triples of smallest known designs with n <= 60.
pub fn table1() -> Vec<(usize, usize, usize)> {
    vec![
        (3, 3, 6),
        (3, 7, 21),
        (3, 8, 56),
        (3, 11, 55),
        (4, 4, 4),
        (4, 5, 20),
        (4, 7, 14),
        (4, 8, 56),
        (4, 13, 52),
        (5, 5, 10),
        (5, 7, 21),
        (5, 8, 56),
        (5, 11, 55),
        (5, 13, 39),
        (6, 6, 6),
        (6, 7, 42),
        (6, 8, 56),
        (6, 11, 22),
    ]
}

/// The printed 3-period, 12-subject design in 4 treatments (a..d -> 1..4).
pub fn fixture_4_3_12() -> CrossoverDesign {
    let rows = [
        [1, 2, 3, 2, 4, 1, 4, 1, 3, 3, 4, 2],
        [2, 3, 1, 1, 2, 4, 1, 3, 4, 2, 3, 4],
        [3, 1, 2, 4, 1, 2, 3, 4, 1, 4, 2, 3],
    ];
    let grid: Vec<usize> = rows.iter().flatten().copied().collect();
    CrossoverDesign::new(3, 12, grid, Some(4)).expect("fixture is well formed")
}

/// Williams construction: a v×v design for even v (lambda = 1), and a v×2v
/// design for odd v (lambda = 2, the cyclic set plus its column reversals).
///
/// The first column interleaves from both ends (1, 2, v, 3, v-1, ...); the
/// others are its cyclic shifts mod v.
pub fn williams(v: usize) -> Result<CrossoverDesign, CatalogError> {
    if v < 3 {
        return Err(CatalogError::TooSmall(v));
    }
    let mut base = Vec::with_capacity(v);
    for k in 0..v {
        let entry = if k == 0 {
            1
        } else if k % 2 == 1 {
            1 + (k + 1) / 2
        } else {
            v + 1 - k / 2
        };
        base.push(entry);
    }
    let shift = |col: &[usize], s: usize| -> Vec<usize> {
        col.iter().map(|&x| (x - 1 + s) % v + 1).collect()
    };
    let mut columns: Vec<Vec<usize>> = (0..v).map(|s| shift(&base, s)).collect();
    if v % 2 == 1 {
        let reversed: Vec<Vec<usize>> = columns
            .iter()
            .map(|c| c.iter().rev().copied().collect())
            .collect();
        columns.extend(reversed);
    }
    Ok(CrossoverDesign::from_columns(v, v, &columns).expect("williams columns are dense"))
}

/// Per-condition verdicts for the balance conditions (a)-(e), with the
/// derived (t, lambda) when consistent.
#[derive(Debug, Clone, Serialize)]
pub struct PattersonReport {
    pub cond_a: bool,
    pub cond_b: bool,
    pub cond_c: bool,
    pub cond_d: bool,
    pub cond_e: bool,
    pub params: Option<PattersonParams>,
    pub failures: Vec<String>,
}

impl PattersonReport {
    pub fn all_pass(&self) -> bool {
        self.cond_a && self.cond_b && self.cond_c && self.cond_d && self.cond_e
    }
}

/// Check the five balance conditions on the frequency profile:
/// (a) uniform on periods (L = tJ);
/// (b) subjects-as-blocks BIBD (binary, equireplicate, constant concurrence);
/// (c) the same with the last period deleted;
/// (d) S = lambda (J - I);
/// (e) off-diagonal of Theta constant and equal to the same lambda.
pub fn verify_patterson(d: &CrossoverDesign) -> PattersonReport {
    let (p, v) = (d.periods(), d.treatments());
    let f = profile(d);
    let cls = classify(d);
    let mut failures = Vec::new();

    // (a) every entry of L equal
    let t_cell = f.l_mat.at(0, 0).clone();
    let cond_a = (0..v).all(|i| (0..p).all(|k| f.l_mat.at(i, k) == &t_cell));
    if !cond_a {
        failures.push("condition (a): design is not uniform over periods".into());
    }

    let constant_offdiag = |m: &crate::ratmat::RatMat| -> Option<Q> {
        let c = m.at(0, 1).clone();
        for i in 0..v {
            for j in 0..v {
                if i != j && m.at(i, j) != &c {
                    return None;
                }
            }
        }
        Some(c)
    };

    // (b) binary, r constant, off-diagonal of NN^t constant
    let nnt = f.n_mat.matmul(&f.n_mat.transpose());
    let cond_b = cls.binary
        && f.r.iter().all(|&r| r == f.r[0])
        && constant_offdiag(&nnt).is_some();
    if !cond_b {
        failures.push("condition (b): subjects-as-blocks is not a BIBD".into());
    }

    // (c) last period deleted: Ntilde binary, r_tilde constant,
    // off-diagonal of Ntilde Ntilde^t constant
    let ntnt = f.n_tilde.matmul(&f.n_tilde.transpose());
    let binary_tilde = (0..v).all(|i| {
        (0..d.subjects()).all(|u| {
            let x = f.n_tilde.at(i, u);
            x.is_zero() || x == &qi(1)
        })
    });
    let cond_c = binary_tilde
        && f.r_tilde.iter().all(|&r| r == f.r_tilde[0])
        && constant_offdiag(&ntnt).is_some();
    if !cond_c {
        failures.push("condition (c): blocks without the last period are not a BIBD".into());
    }

    // (d) S = lambda (J - I)
    let diag_zero = (0..v).all(|i| f.s_mat.at(i, i).is_zero());
    let lambda_s = constant_offdiag(&f.s_mat);
    let cond_d = diag_zero && lambda_s.is_some();
    if !cond_d {
        failures.push("condition (d): ordered-pair counts S are not lambda(J - I)".into());
    }

    // (e) off-diagonal of Theta constant, equal to the lambda from (d)
    let lambda_theta = constant_offdiag(&f.theta);
    let cond_e = match (&lambda_s, &lambda_theta) {
        (Some(ls), Some(lt)) => ls == lt,
        _ => lambda_theta.is_some(),
    };
    if !cond_e {
        failures.push("condition (e): last-period carryover counts are unbalanced".into());
    }

    let params = if cond_a && cond_b && cond_c && cond_d && cond_e {
        let t = t_cell.to_integer();
        let lambda = lambda_s.expect("cond_d passed").to_integer();
        let (t, lambda) = (i64::try_from(t).unwrap(), i64::try_from(lambda).unwrap());
        let relation = lambda * (v as i64 - 1) == t * (p as i64 - 1);
        if relation && d.subjects() == v * t as usize {
            Some(PattersonParams {
                p,
                v,
                t,
                lambda,
                n: d.subjects(),
            })
        } else {
            failures.push("parameter relation lambda(v-1) = t(p-1) fails".into());
            None
        }
    } else {
        None
    };

    PattersonReport {
        cond_a,
        cond_b,
        cond_c,
        cond_d,
        cond_e,
        params,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::profile;
    use crate::ratmat::RatMat;

    #[test]
    fn params_examples() {
        let p = patterson_params(3, 4).unwrap();
        assert_eq!((p.t, p.lambda, p.n), (3, 2, 12));
        let p = patterson_params(3, 3).unwrap();
        assert_eq!((p.t, p.lambda, p.n), (1, 1, 3));
        let p = patterson_params(4, 4).unwrap();
        assert_eq!((p.t, p.lambda, p.n), (1, 1, 4));
        assert_eq!(patterson_params(2, 2), Err(CatalogError::ExcludedCase));
        assert_eq!(
            patterson_params(5, 4),
            Err(CatalogError::BadShape { p: 5, v: 4 })
        );
    }

    #[test]
    fn table1_contents() {
        let t = table1();
        assert_eq!(t.len(), 18);
        assert!(t.contains(&(3, 7, 21)));
        assert!(t.contains(&(6, 11, 22)));
        // n = vt integral and lambda integral for every triple
        for (p, v, n) in t {
            assert_eq!(n % v, 0);
            let t_rep = (n / v) as i64;
            assert_eq!(t_rep * (p as i64 - 1) % (v as i64 - 1), 0);
        }
    }

    #[test]
    fn fixture_columns() {
        let d = fixture_4_3_12();
        assert_eq!(d.column(0), vec![1, 2, 3]);
        assert_eq!(d.column(11), vec![2, 4, 3]);
        let rep = verify_patterson(&d);
        assert!(rep.all_pass(), "failures: {:?}", rep.failures);
        let p = rep.params.unwrap();
        assert_eq!((p.t, p.lambda), (3, 2));
    }

    #[test]
    fn fixture_perturbation_breaks_d() {
        let d = fixture_4_3_12();
        let mut cols = d.columns();
        cols[0].swap(0, 1);
        let bad = CrossoverDesign::from_columns(3, 4, &cols).unwrap();
        let rep = verify_patterson(&bad);
        assert!(!rep.cond_d);
    }

    #[test]
    fn repeated_treatment_breaks_b() {
        let d = CrossoverDesign::from_columns(3, 2, &[vec![1, 2, 1], vec![2, 1, 2]]).unwrap();
        let rep = verify_patterson(&d);
        assert!(!rep.cond_b);
    }

    #[test]
    fn williams_even_and_odd() {
        let w4 = williams(4).unwrap();
        assert_eq!(w4.column(0), vec![1, 2, 4, 3]);
        let rep = verify_patterson(&w4);
        assert!(rep.all_pass(), "failures: {:?}", rep.failures);
        assert_eq!(rep.params.unwrap().lambda, 1);

        let w3 = williams(3).unwrap();
        assert_eq!((w3.periods(), w3.subjects()), (3, 6));
        let rep = verify_patterson(&w3);
        assert!(rep.all_pass(), "failures: {:?}", rep.failures);
        assert_eq!(rep.params.unwrap().lambda, 2);

        let w5 = williams(5).unwrap();
        assert_eq!((w5.periods(), w5.subjects()), (5, 10));
        let rep = verify_patterson(&w5);
        assert!(rep.all_pass(), "failures: {:?}", rep.failures);
        assert_eq!(rep.params.unwrap().t, 2);

        assert_eq!(williams(2), Err(CatalogError::TooSmall(2)));
    }

    #[test]
    fn williams_passes_up_to_13() {
        for v in 3..=13 {
            let w = williams(v).unwrap();
            let rep = verify_patterson(&w);
            assert!(rep.all_pass(), "v = {v}: {:?}", rep.failures);
        }
    }

    #[test]
    fn closed_forms_for_verified_designs() {
        // Theta = (t-lambda)I + lambda J, NN^t = p Theta,
        // N Ntilde^t = (p-1) Theta, Ntilde Ntilde^t = (p-2) Theta + t I.
        for d in [fixture_4_3_12(), williams(4).unwrap(), williams(5).unwrap()] {
            let rep = verify_patterson(&d);
            let params = rep.params.expect("catalog designs verify");
            let (p, v, t, lambda) = (params.p, params.v, params.t, params.lambda);
            let f = profile(&d);
            let theta_expected = &RatMat::identity(v).scale(&qi(t - lambda))
                + &RatMat::ones(v, v).scale(&qi(lambda));
            assert_eq!(f.theta, theta_expected);
            let nnt = f.n_mat.matmul(&f.n_mat.transpose());
            assert_eq!(nnt, f.theta.scale(&qi(p as i64)));
            let nnt_tilde = f.n_mat.matmul(&f.n_tilde.transpose());
            assert_eq!(nnt_tilde, f.theta.scale(&qi(p as i64 - 1)));
            let ntnt = f.n_tilde.matmul(&f.n_tilde.transpose());
            let expected =
                &f.theta.scale(&qi(p as i64 - 2)) + &RatMat::identity(v).scale(&qi(t));
            assert_eq!(ntnt, expected);
        }
    }
}
