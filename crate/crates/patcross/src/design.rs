//! Crossover-design representation: parsing, frequency matrices, the scalar
//! statistics (beta, l, x, y), class membership, and design generation
//! (exhaustive column-multiset enumeration and seeded random sampling).
//!
//! ```
//! use patcross::catalog::williams;
//! use patcross::design::{classify, stats};
//!
//! let d = williams(4).unwrap();
//! assert!(classify(&d).binary);
//! let s = stats(&d).unwrap();
//! // binary designs sit on the boundary: beta = pvt and l = vt
//! assert_eq!((s.beta, s.ell, s.x, s.y), (16, 4, 0, 0));
//! ```

use crate::ratmat::{qi, Q, RatMat};
use num::{BigUint, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DesignError {
    #[error("malformed design file: {0}")]
    MalformedFile(String),
    #[error("treatment labels are not dense: missing label {0}")]
    LabelGap(usize),
    #[error("empty design")]
    EmptyDesign,
    #[error("treatment count {v} does not divide subject count {n}")]
    NotMultiple { v: usize, n: usize },
    #[error("enumeration too large: {count} multisets exceeds cap {cap}")]
    TooLarge { count: BigUint, cap: u64 },
}

/// A p×n layout of treatment labels 1..=v; rows are periods, columns subjects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CrossoverDesign {
    p: usize,
    n: usize,
    v: usize,
    /// Row-major p×n grid of labels in 1..=v.
    grid: Vec<usize>,
}

impl CrossoverDesign {
    /// Build from a row-major grid. Labels must be dense in 1..=v with v the
    /// largest label (or `v_hint` when given, which must cover every label).
    pub fn new(
        p: usize,
        n: usize,
        grid: Vec<usize>,
        v_hint: Option<usize>,
    ) -> Result<Self, DesignError> {
        if p < 2 || n < 1 {
            return Err(DesignError::EmptyDesign);
        }
        if grid.len() != p * n {
            return Err(DesignError::MalformedFile(format!(
                "expected {} entries, got {}",
                p * n,
                grid.len()
            )));
        }
        let max = *grid.iter().max().unwrap();
        if grid.iter().any(|&x| x == 0) {
            return Err(DesignError::MalformedFile("label 0 is not allowed".into()));
        }
        let v = match v_hint {
            Some(v) => {
                if max > v {
                    return Err(DesignError::MalformedFile(format!(
                        "label {max} exceeds declared v = {v}"
                    )));
                }
                v
            }
            None => max,
        };
        if v < 2 {
            return Err(DesignError::MalformedFile("need at least 2 treatments".into()));
        }
        for label in 1..=v {
            if !grid.contains(&label) {
                return Err(DesignError::LabelGap(label));
            }
        }
        Ok(CrossoverDesign { p, n, v, grid })
    }

    pub fn from_columns(p: usize, v: usize, columns: &[Vec<usize>]) -> Result<Self, DesignError> {
        let n = columns.len();
        let mut grid = vec![0; p * n];
        for (j, col) in columns.iter().enumerate() {
            if col.len() != p {
                return Err(DesignError::MalformedFile("ragged column".into()));
            }
            for (i, &t) in col.iter().enumerate() {
                grid[i * n + j] = t;
            }
        }
        CrossoverDesign::new(p, n, grid, Some(v))
    }

    pub fn periods(&self) -> usize {
        self.p
    }

    pub fn subjects(&self) -> usize {
        self.n
    }

    pub fn treatments(&self) -> usize {
        self.v
    }

    /// Treatment in period i (0-based) for subject j (0-based); 1-based label.
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.grid[i * self.n + j]
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.p).map(|i| self.at(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    /// Design-file text (numeric tokens, with a "p v n" header).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.p, self.v, self.n);
        for i in 0..self.p {
            let row: Vec<String> = (0..self.n).map(|j| self.at(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parse the design file format: '#' comments, an optional "p v n" header,
/// then p rows of n tokens (all positive integers, or all single letters).
pub fn parse_design(text: &str) -> Result<CrossoverDesign, DesignError> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.is_empty() {
        return Err(DesignError::EmptyDesign);
    }
    let tokenize = |line: &str| -> Vec<String> {
        line.split_whitespace().map(|s| s.to_string()).collect()
    };
    // Header heuristic: a first line of exactly three integers that is
    // consistent with the remaining line count is a "p v n" header.
    let first = tokenize(lines[0]);
    let header: Option<(usize, usize, usize)> = if first.len() == 3 {
        let nums: Option<Vec<usize>> = first.iter().map(|t| t.parse().ok()).collect();
        match nums {
            Some(h) if lines.len() == h[0] + 1 => Some((h[0], h[1], h[2])),
            _ => None,
        }
    } else {
        None
    };
    let (body, expect): (&[&str], Option<(usize, usize, usize)>) = match header {
        Some(h) => (&lines[1..], Some(h)),
        None => (&lines[..], None),
    };
    if body.is_empty() {
        return Err(DesignError::EmptyDesign);
    }
    let rows: Vec<Vec<String>> = body.iter().map(|l| tokenize(l)).collect();
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(DesignError::MalformedFile("ragged rows".into()));
    }
    let p = rows.len();
    if let Some((hp, _, hn)) = expect {
        if hp != p || hn != n {
            return Err(DesignError::MalformedFile(format!(
                "header says {hp} periods x {hn} subjects, body is {p} x {n}"
            )));
        }
    }
    let all_numeric = rows.iter().flatten().all(|t| t.parse::<usize>().is_ok());
    let all_letters = rows
        .iter()
        .flatten()
        .all(|t| t.len() == 1 && t.chars().next().unwrap().is_ascii_alphabetic());
    let mut grid = Vec::with_capacity(p * n);
    if all_numeric {
        for t in rows.iter().flatten() {
            grid.push(t.parse::<usize>().unwrap());
        }
    } else if all_letters {
        for t in rows.iter().flatten() {
            let c = t.chars().next().unwrap().to_ascii_lowercase();
            grid.push((c as usize) - ('a' as usize) + 1);
        }
    } else {
        return Err(DesignError::MalformedFile(
            "tokens must be all integers or all single letters".into(),
        ));
    }
    CrossoverDesign::new(p, n, grid, expect.map(|(_, v, _)| v))
}

/// The frequency matrices and replication vectors of a design.
#[derive(Debug, Clone)]
pub struct FrequencyProfile {
    /// v×n appearance counts n_iu.
    pub n_mat: RatMat,
    /// v×n appearance counts over the first p-1 periods.
    pub n_tilde: RatMat,
    /// v×v successor counts: s_ij = number of appearances of i preceded by j.
    pub s_mat: RatMat,
    /// v×p period counts l_ik.
    pub l_mat: RatMat,
    /// v×p shifted period counts: column 1 zero, then l_i(k-1).
    pub l_tilde: RatMat,
    /// Treatment replications over the whole design.
    pub r: Vec<i64>,
    /// Replications over the first p-1 periods.
    pub r_tilde: Vec<i64>,
    /// v×v matrix whose column i sums the N-columns of subjects ending with i.
    pub theta: RatMat,
    /// Subjects whose last-period treatment is i.
    pub last_counts: Vec<i64>,
}

/// Compute every frequency matrix by direct counting.
pub fn profile(d: &CrossoverDesign) -> FrequencyProfile {
    let (p, n, v) = (d.periods(), d.subjects(), d.treatments());
    let mut n_cnt = vec![0i64; v * n];
    let mut nt_cnt = vec![0i64; v * n];
    let mut s_cnt = vec![0i64; v * v];
    let mut l_cnt = vec![0i64; v * p];
    for j in 0..n {
        for i in 0..p {
            let t = d.at(i, j) - 1;
            n_cnt[t * n + j] += 1;
            if i + 1 < p {
                nt_cnt[t * n + j] += 1;
            }
            l_cnt[t * p + i] += 1;
            if i >= 1 {
                let prev = d.at(i - 1, j) - 1;
                s_cnt[t * v + prev] += 1;
            }
        }
    }
    let r: Vec<i64> = (0..v).map(|t| (0..n).map(|j| n_cnt[t * n + j]).sum()).collect();
    let r_tilde: Vec<i64> = (0..v)
        .map(|t| (0..n).map(|j| nt_cnt[t * n + j]).sum())
        .collect();
    let mut last_counts = vec![0i64; v];
    let mut theta = vec![0i64; v * v];
    for j in 0..n {
        let last = d.at(p - 1, j) - 1;
        last_counts[last] += 1;
        for t in 0..v {
            theta[t * v + last] += n_cnt[t * n + j];
        }
    }
    let as_mat = |data: &[i64], rows: usize, cols: usize| {
        RatMat::from_fn(rows, cols, |i, j| qi(data[i * cols + j]))
    };
    let l_mat = as_mat(&l_cnt, v, p);
    let l_tilde = RatMat::from_fn(v, p, |i, k| {
        if k == 0 {
            Q::zero()
        } else {
            l_mat.at(i, k - 1).clone()
        }
    });
    FrequencyProfile {
        n_mat: as_mat(&n_cnt, v, n),
        n_tilde: as_mat(&nt_cnt, v, n),
        s_mat: as_mat(&s_cnt, v, v),
        l_mat,
        l_tilde,
        r,
        r_tilde,
        theta: as_mat(&theta, v, v),
        last_counts,
    }
}

/// The design scalars of the optimality bounds, plus per-subject terms.
#[derive(Debug, Clone, Serialize)]
pub struct DesignStats {
    /// beta = sum of n_iu^2.
    pub beta: i64,
    /// l = trace of Theta.
    pub ell: i64,
    /// x = beta - 2l - vt(p-2).
    pub x: i64,
    /// y = l - vt.
    pub y: i64,
    /// t = n/v.
    pub t: i64,
    /// Per subject, in subject order: (beta_ij, l_ij) where l_ij is the
    /// appearance count of that subject's last-period treatment.
    pub per_subject: Vec<(i64, i64)>,
}

/// Compute (beta, l, x, y, t). Requires v | n.
pub fn stats(d: &CrossoverDesign) -> Result<DesignStats, DesignError> {
    let (p, n, v) = (d.periods(), d.subjects(), d.treatments());
    if n % v != 0 {
        return Err(DesignError::NotMultiple { v, n });
    }
    let t = (n / v) as i64;
    let mut beta = 0i64;
    let mut ell = 0i64;
    let mut per_subject = Vec::with_capacity(n);
    for j in 0..n {
        let mut counts = vec![0i64; v];
        for i in 0..p {
            counts[d.at(i, j) - 1] += 1;
        }
        let beta_ij: i64 = counts.iter().map(|c| c * c).sum();
        let l_ij = counts[d.at(p - 1, j) - 1];
        beta += beta_ij;
        ell += l_ij;
        per_subject.push((beta_ij, l_ij));
    }
    let x = beta - 2 * ell - (v as i64) * t * (p as i64 - 2);
    let y = ell - (v as i64) * t;
    Ok(DesignStats {
        beta,
        ell,
        x,
        y,
        t,
        per_subject,
    })
}

/// Class-membership scan (connectedness is a separate, rank-based check).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// No treatment immediately succeeds itself on any subject.
    pub no_self_succession: bool,
    /// No treatment appears more than once on any subject.
    pub binary: bool,
}

pub fn classify(d: &CrossoverDesign) -> Classification {
    let (p, n, v) = (d.periods(), d.subjects(), d.treatments());
    let mut no_self_succession = true;
    let mut binary = true;
    for j in 0..n {
        let mut counts = vec![0usize; v];
        for i in 0..p {
            counts[d.at(i, j) - 1] += 1;
            if i >= 1 && d.at(i, j) == d.at(i - 1, j) {
                no_self_succession = false;
            }
        }
        if counts.iter().any(|&c| c > 1) {
            binary = false;
        }
    }
    Classification {
        no_self_succession,
        binary,
    }
}

/// All admissible columns for the given shape, in lexicographic order.
pub fn admissible_columns(p: usize, v: usize, no_self_succession: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut col = vec![1usize; p];
    loop {
        let ok = !no_self_succession || (1..p).all(|i| col[i] != col[i - 1]);
        if ok {
            out.push(col.clone());
        }
        // next column in base-v counting
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if col[i] < v {
                col[i] += 1;
                for c in col.iter_mut().skip(i + 1) {
                    *c = 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n.saturating_sub(k));
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Number of column multisets for the given shape.
pub fn multiset_count(p: usize, v: usize, n: usize, no_self_succession: bool) -> BigUint {
    let c = admissible_columns(p, v, no_self_succession).len() as u64;
    binomial(c + n as u64 - 1, n as u64)
}

/// Iterator over one representative design per multiset of admissible
/// columns. Information matrices only depend on the column multiset, so this
/// covers every distinct information matrix for the shape.
///
/// Designs whose columns do not use all v labels are skipped (they cannot be
/// connected and are not valid `CrossoverDesign`s for this v).
#[derive(Debug)]
pub struct MultisetDesigns {
    p: usize,
    v: usize,
    n: usize,
    columns: Vec<Vec<usize>>,
    /// Non-decreasing index tuple into `columns`; None when exhausted.
    state: Option<Vec<usize>>,
}

impl Iterator for MultisetDesigns {
    type Item = CrossoverDesign;

    fn next(&mut self) -> Option<CrossoverDesign> {
        loop {
            let state = self.state.as_ref()?.clone();
            // advance
            let mut next = state.clone();
            let mut i = self.n;
            let advanced = loop {
                if i == 0 {
                    break false;
                }
                i -= 1;
                if next[i] + 1 < self.columns.len() {
                    let val = next[i] + 1;
                    for x in next.iter_mut().skip(i) {
                        *x = val;
                    }
                    break true;
                }
            };
            self.state = advanced.then_some(next);
            let cols: Vec<Vec<usize>> = state.iter().map(|&i| self.columns[i].clone()).collect();
            if let Ok(d) = CrossoverDesign::from_columns(self.p, self.v, &cols) {
                return Some(d);
            }
            // label gap: skip this multiset and keep advancing
        }
    }
}

/// Enumerate column-multiset representatives, guarded by `cap` (default
/// [`DEFAULT_ENUM_CAP`]) on the multiset count.
pub fn enumerate_column_multisets(
    p: usize,
    v: usize,
    n: usize,
    no_self_succession: bool,
    cap: Option<u64>,
) -> Result<MultisetDesigns, DesignError> {
    let cap = cap.unwrap_or(DEFAULT_ENUM_CAP);
    let count = multiset_count(p, v, n, no_self_succession);
    if count > BigUint::from(cap) {
        return Err(DesignError::TooLarge { count, cap });
    }
    let columns = admissible_columns(p, v, no_self_succession);
    Ok(MultisetDesigns {
        p,
        v,
        n,
        columns,
        state: Some(vec![0; n]),
    })
}

/// Deterministic seeded random design; each column uniform over admissible
/// columns. Columns are redrawn as a whole until every label appears.
pub fn random_design(
    p: usize,
    v: usize,
    n: usize,
    seed: u64,
    no_self_succession: bool,
) -> CrossoverDesign {
    let columns = admissible_columns(p, v, no_self_succession);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let cols: Vec<Vec<usize>> = (0..n)
            .map(|_| columns[rng.gen_range(0..columns.len())].clone())
            .collect();
        if let Ok(d) = CrossoverDesign::from_columns(p, v, &cols) {
            return d;
        }
    }
}
