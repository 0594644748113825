//! Treatment-relabeling action of the symmetric group on designs and
//! information matrices, the complete-symmetrization lemma, and the averaged
//! effects matrix in both brute-force and closed form.
//!
//! ```
//! use patcross::catalog::fixture_4_3_12;
//! use patcross::symmetry::check_32;
//!
//! // averaging the joint matrix over all 4! relabelings reproduces the
//! // balanced closed form exactly
//! assert!(check_32(&fixture_4_3_12()).unwrap());
//! ```

use crate::design::{classify, stats, CrossoverDesign, DesignError};
use crate::infomat::{
    effects_info, info_elim_subjects, is_connected, EffectsInfo, JointInfo, PeriodMode,
};
use crate::ratmat::{qi, qr, MatError, Q, RatMat};
use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("permutation acts on {expected} labels, design has {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("brute-force averaging capped at v <= {cap}, got v = {v}")]
    TooLarge { v: usize, cap: usize },
    #[error("matrix must have order at least 2")]
    TooSmall,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Mat(#[from] MatError),
}

/// A bijection on treatment labels 1..=v, stored as 0-based images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Build from 0-based images; must be a bijection.
    pub fn new(image: Vec<usize>) -> Option<Self> {
        let v = image.len();
        let mut seen = vec![false; v];
        for &x in &image {
            if x >= v || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Permutation { image })
    }

    pub fn identity(v: usize) -> Self {
        Permutation {
            image: (0..v).collect(),
        }
    }

    /// Swap two 1-based labels.
    pub fn transposition(v: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..v).collect();
        image.swap(a - 1, b - 1);
        Permutation { image }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// Image of a 1-based label.
    pub fn apply(&self, label: usize) -> usize {
        self.image[label - 1] + 1
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x] = i;
        }
        Permutation { image }
    }

    /// All v! permutations of degree v.
    pub fn all(v: usize) -> impl Iterator<Item = Permutation> {
        (0..v)
            .permutations(v)
            .map(|image| Permutation { image })
    }
}

/// Relabel every treatment of the design through g.
pub fn relabel(d: &CrossoverDesign, g: &Permutation) -> Result<CrossoverDesign, SymmetryError> {
    if g.degree() != d.treatments() {
        return Err(SymmetryError::SizeMismatch {
            expected: g.degree(),
            got: d.treatments(),
        });
    }
    let cols: Vec<Vec<usize>> = d
        .columns()
        .iter()
        .map(|c| c.iter().map(|&t| g.apply(t)).collect())
        .collect();
    Ok(CrossoverDesign::from_columns(d.periods(), d.treatments(), &cols)?)
}

/// Conjugate a matrix whose leading blocks are two v-sized treatment blocks
/// (direct then residual) followed by fixed blocks: rows and columns are
/// permuted by diag(P_g, P_g, I).
pub fn conjugate_matrix(m: &RatMat, v: usize, g: &Permutation) -> RatMat {
    let k = m.rows();
    // row i of the conjugated matrix describes treatment i+1, which the
    // relabeled design inherits from treatment g^{-1}(i+1)
    let ginv = g.inverse();
    let full: Vec<usize> = (0..k)
        .map(|i| {
            if i < v {
                ginv.apply(i + 1) - 1
            } else if i < 2 * v {
                v + ginv.apply(i - v + 1) - 1
            } else {
                i
            }
        })
        .collect();
    // (Q_g^t M Q_g)_{ij} = M_{full(i), full(j)}
    RatMat::from_fn(k, k, |i, j| m.at(full[i], full[j]).clone())
}

/// Conjugate a joint information matrix by a treatment relabeling.
pub fn conjugate_info(m: &JointInfo, g: &Permutation) -> JointInfo {
    JointInfo {
        matrix: conjugate_matrix(&m.matrix, m.layout.direct, g),
        layout: m.layout,
    }
}

/// Conjugate a 2v×2v effects matrix by a treatment relabeling.
pub fn conjugate_effects(e: &EffectsInfo, g: &Permutation) -> EffectsInfo {
    let assembled = conjugate_matrix(&e.assembled(), e.v(), g);
    let v = e.v();
    let a: Vec<usize> = (0..v).collect();
    let b: Vec<usize> = (v..2 * v).collect();
    EffectsInfo {
        c11: assembled.select(&a, &a),
        c12: assembled.select(&a, &b),
        c22: assembled.select(&b, &b),
        periods: e.periods,
    }
}

/// Average of P_g^t A P_g over all permutations, in closed form: the
/// completely symmetric matrix with diagonal a = tr(A)/k and off-diagonal
/// b = (s - tr(A))/(k(k-1)), s the grand sum.
pub fn lemma31_average(a: &RatMat) -> Result<(Q, Q, RatMat), SymmetryError> {
    if !a.is_square() || a.rows() < 2 {
        return Err(SymmetryError::TooSmall);
    }
    let k = a.rows() as i64;
    let tr = a.trace();
    let s = a.grand_sum();
    let diag = &tr / qi(k);
    let off = (&s - &tr) / qi(k * (k - 1));
    let m = RatMat::complete_symmetric(a.rows(), diag.clone(), off.clone())?;
    Ok((diag, off, m))
}

/// Which matrix a brute-force permutation average runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageTarget {
    /// The (2v+p)×(2v+p) subjects-eliminated matrix.
    M,
    /// The 2v×2v effects matrix ignoring periods.
    CIgnored,
    /// The 2v×2v effects matrix adjusted for periods.
    CAdjusted,
}

pub const BRUTE_CAP_V: usize = 7;

/// Exact average of the conjugated target matrix over all v! relabelings.
pub fn average_brute(d: &CrossoverDesign, target: AverageTarget) -> Result<RatMat, SymmetryError> {
    let v = d.treatments();
    if v > BRUTE_CAP_V {
        return Err(SymmetryError::TooLarge { v, cap: BRUTE_CAP_V });
    }
    let base = match target {
        AverageTarget::M => info_elim_subjects(d).matrix,
        AverageTarget::CIgnored => effects_info(d, PeriodMode::Ignored).assembled(),
        AverageTarget::CAdjusted => effects_info(d, PeriodMode::Adjusted).assembled(),
    };
    let mut sum = RatMat::zeros(base.rows(), base.cols());
    let mut count = 0i64;
    for g in Permutation::all(v) {
        sum = &sum + &conjugate_matrix(&base, v, &g);
        count += 1;
    }
    Ok(sum.scale(&qr(1, count)))
}

/// Block parameters of the averaged effects matrix
/// [[abar H, bbar H], [bbar H, cbar H + e J]].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AveragedEffects {
    pub abar: Q,
    pub bbar: Q,
    pub cbar: Q,
    pub e: Q,
    pub v: usize,
}

impl AveragedEffects {
    pub fn assembled(&self) -> RatMat {
        let h = RatMat::h_matrix(self.v);
        let j = RatMat::ones(self.v, self.v);
        RatMat::block2_sym(
            &h.scale(&self.abar),
            &h.scale(&self.bbar),
            &(&h.scale(&self.cbar) + &j.scale(&self.e)),
        )
    }
}

/// Closed form of the permutation-averaged effects matrix (periods ignored),
/// from the design scalars beta and l:
/// abar = (p^2 v t - beta)/(p(v-1)), bbar = -(beta - l)/(p(v-1)),
/// cbar = (pvt(p-1) - (beta - 2l) - t(v + p - 1))/(p(v-1)), e = t(p-1)/(pv).
pub fn average_closed(d: &CrossoverDesign) -> Result<AveragedEffects, SymmetryError> {
    let s = stats(d)?;
    let (p, v) = (d.periods() as i64, d.treatments() as i64);
    let t = s.t;
    let den = qi(p * (v - 1));
    Ok(AveragedEffects {
        abar: qi(p * p * v * t - s.beta) / &den,
        bbar: qi(-(s.beta - s.ell)) / &den,
        cbar: qi(p * v * t * (p - 1) - (s.beta - 2 * s.ell) - t * (v + p - 1)) / &den,
        e: qr(t * (p - 1), p * v),
        v: d.treatments(),
    })
}

/// Check the averaging identity: the brute-force permutation average of the
/// subjects-eliminated matrix of a connected binary design equals the
/// balanced-design closed form for the same (p, v, t).
pub fn check_32(d: &CrossoverDesign) -> Result<bool, SymmetryError> {
    let cls = classify(d);
    if !cls.binary {
        return Err(SymmetryError::PreconditionViolated(
            "design is not binary".into(),
        ));
    }
    if d.subjects() % d.treatments() != 0 {
        return Err(SymmetryError::PreconditionViolated(
            "subject count is not a multiple of the treatment count".into(),
        ));
    }
    if !is_connected(d) {
        return Err(SymmetryError::PreconditionViolated(
            "design is not connected".into(),
        ));
    }
    let t = (d.subjects() / d.treatments()) as i64;
    let closed = crate::infomat::patterson_closed(d.periods(), d.treatments(), t)
        .map_err(|e| SymmetryError::PreconditionViolated(e.to_string()))?;
    let avg = average_brute(d, AverageTarget::M)?;
    Ok(avg == closed.m.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::fixture_4_3_12;
    use crate::design::{random_design, CrossoverDesign};

    #[test]
    fn relabel_examples() {
        let d = fixture_4_3_12();
        let id = Permutation::identity(4);
        assert_eq!(relabel(&d, &id).unwrap(), d);
        let swap = Permutation::transposition(4, 1, 2);
        let r = relabel(&d, &swap).unwrap();
        assert_eq!(r.column(0), vec![2, 1, 3]);
        let back = relabel(&r, &swap.inverse()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn equivariance_oracle() {
        // info(relabel(d, g)) = conjugate(info(d), g), on random designs and
        // random transpositions plus a 4-cycle.
        let perms = [
            Permutation::transposition(4, 1, 3),
            Permutation::new(vec![1, 2, 3, 0]).unwrap(),
        ];
        for seed in 0..3 {
            let d = random_design(3, 4, 8, seed, true);
            for g in &perms {
                let lhs = info_elim_subjects(&relabel(&d, g).unwrap());
                let rhs = conjugate_info(&info_elim_subjects(&d), g);
                assert_eq!(lhs.matrix, rhs.matrix);
                assert_eq!(lhs.matrix.rank(), info_elim_subjects(&d).matrix.rank());
                let lhs = effects_info(&relabel(&d, g).unwrap(), PeriodMode::Adjusted);
                let rhs = conjugate_effects(&effects_info(&d, PeriodMode::Adjusted), g);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn lemma31_matches_brute_force() {
        let a = RatMat::from_i64(&[&[1, 2], &[3, 4]]);
        let (diag, off, avg) = lemma31_average(&a).unwrap();
        assert_eq!(diag, qr(5, 2));
        assert_eq!(off, qr(5, 2));
        // brute force over S_2
        let mut sum = RatMat::zeros(2, 2);
        for g in Permutation::all(2) {
            sum = &sum + &RatMat::from_fn(2, 2, |i, j| {
                a.at(g.apply(i + 1) - 1, g.apply(j + 1) - 1).clone()
            });
        }
        assert_eq!(avg, sum.scale(&qr(1, 2)));
        // brute force over S_k for k = 3, 4 on a generic matrix
        for k in [3usize, 4] {
            let a = RatMat::from_fn(k, k, |i, j| qi((3 * i + 7 * j * j + 1) as i64));
            let (_, _, avg) = lemma31_average(&a).unwrap();
            let mut sum = RatMat::zeros(k, k);
            let mut cnt = 0;
            for g in Permutation::all(k) {
                sum = &sum + &RatMat::from_fn(k, k, |i, j| {
                    a.at(g.apply(i + 1) - 1, g.apply(j + 1) - 1).clone()
                });
                cnt += 1;
            }
            assert_eq!(avg, sum.scale(&qr(1, cnt)));
        }
    }

    #[test]
    fn lemma31_fixed_points() {
        let cs = RatMat::complete_symmetric(4, qi(3), qi(-1)).unwrap();
        let (_, _, avg) = lemma31_average(&cs).unwrap();
        assert_eq!(avg, cs);
        let i3 = RatMat::identity(3);
        let (a, b, avg) = lemma31_average(&i3).unwrap();
        assert_eq!((a, b), (qi(1), qi(0)));
        assert_eq!(avg, i3);
        assert!(matches!(
            lemma31_average(&RatMat::identity(1)),
            Err(SymmetryError::TooSmall)
        ));
    }

    #[test]
    fn averaging_identity_on_fixture() {
        assert!(check_32(&fixture_4_3_12()).unwrap());
    }

    #[test]
    fn averaged_closed_vs_brute_small() {
        // closed form equals brute force for a v=3 design, including a
        // nonbinary one
        let d = CrossoverDesign::from_columns(
            3,
            3,
            &[vec![1, 2, 1], vec![2, 3, 2], vec![3, 1, 3]],
        )
        .unwrap();
        let closed = average_closed(&d).unwrap();
        assert_eq!(closed.abar, qi(2));
        assert_eq!(closed.bbar, qr(-3, 2));
        assert_eq!(closed.cbar, qr(5, 3));
        let brute = average_brute(&d, AverageTarget::CIgnored).unwrap();
        assert_eq!(closed.assembled(), brute);
        for seed in 0..4 {
            let d = random_design(3, 3, 6, seed, true);
            let closed = average_closed(&d).unwrap();
            let brute = average_brute(&d, AverageTarget::CIgnored).unwrap();
            assert_eq!(closed.assembled(), brute);
        }
    }

    #[test]
    fn averaging_idempotent() {
        let d = random_design(3, 3, 6, 11, true);
        let closed = average_closed(&d).unwrap().assembled();
        // the averaged matrix is blockwise completely symmetric, hence a
        // fixed point of further conjugation averaging
        let mut sum = RatMat::zeros(6, 6);
        let mut cnt = 0;
        for g in Permutation::all(3) {
            sum = &sum + &conjugate_matrix(&closed, 3, &g);
            cnt += 1;
        }
        assert_eq!(sum.scale(&qr(1, cnt)), closed);
    }

    #[test]
    fn check_32_guards() {
        let nonbinary = CrossoverDesign::from_columns(
            3,
            3,
            &[vec![1, 2, 1], vec![2, 3, 2], vec![3, 1, 3]],
        )
        .unwrap();
        assert!(matches!(
            check_32(&nonbinary),
            Err(SymmetryError::PreconditionViolated(_))
        ));
        // a binary but disconnected design: {1,2} and {3,4} never meet
        let disc = CrossoverDesign::from_columns(
            2,
            4,
            &[vec![1, 2], vec![2, 1], vec![3, 4], vec![4, 3]],
        )
        .unwrap();
        match check_32(&disc) {
            Err(SymmetryError::PreconditionViolated(msg)) => {
                assert!(msg.contains("connected"), "{msg}");
            }
            other => panic!("expected precondition violation, got {other:?}"),
        }
    }

    #[test]
    fn cap_enforced() {
        let d = random_design(2, 8, 8, 0, true);
        assert!(matches!(
            average_brute(&d, AverageTarget::M),
            Err(SymmetryError::TooLarge { .. })
        ));
    }
}
