//! Exact integer structure analysis over the extended approximation vectors
//! `z_nu = (x_nu, y_nu)` in dimension `d = m + n`.
//!
//! Consecutive best approximations travel through two-dimensional planes:
//! this module decomposes a sequence into maximal coplanar runs, emits the
//! case-specific quadruples whose 4x4 determinants obey the `24 * ...`
//! product bounds, measures the near-constancy of `zeta_l * M_(l+1)` inside
//! each run, and tracks the rank of tail segments. The ambient dimension is
//! at most four for every supported case, so plain fraction-free elimination
//! over big integers is exact and fast.

use std::error::Error;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bestapprox::ApproxSequence;
use crate::forms::CaseTag;
use crate::realnum::DyadicInterval;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureError {
    /// Two consecutive vectors are proportional; runs are undefined.
    DegenerateInput(String),
    Input(String),
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureError::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            StructureError::Input(msg) => write!(f, "bad input: {msg}"),
        }
    }
}

impl Error for StructureError {}

/// Extended integer vector of one record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZVector {
    pub nu: usize,
    pub coords: Vec<i64>,
}

/// Concatenate each record's `x` and `y` into `Z^(m+n)` vectors.
pub fn z_vectors(seq: &ApproxSequence) -> Vec<ZVector> {
    seq.records
        .iter()
        .map(|r| {
            let mut coords = Vec::with_capacity(seq.m + seq.n);
            coords.extend_from_slice(&r.x);
            coords.extend_from_slice(&r.y);
            ZVector { nu: r.nu, coords }
        })
        .collect()
}

/// Rank over the rationals by fraction-free Gaussian elimination; exact.
pub fn exact_rank(vectors: &[&[i64]]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let cols = vectors[0].len();
    let mut rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (pivot_row, rest) = {
            let (a, b) = rows.split_at_mut(rank + 1);
            (&a[rank], b)
        };
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let (p, q) = (pivot_row[col].clone(), row[col].clone());
            for c in 0..cols {
                row[c] = &row[c] * &p - &pivot_row[c] * &q;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Determinant of a square integer matrix by cofactor-free Bareiss
/// elimination; exact.
pub fn exact_det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "determinant requires a square matrix");
    let mut a: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect();
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num.div_floor(&prev);
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    if sign < 0 {
        -a[n - 1][n - 1].clone()
    } else {
        a[n - 1][n - 1].clone()
    }
}

/// Maximal interval of consecutive z-vectors spanning one plane.
#[derive(Clone, Debug, Serialize)]
pub struct CoplanarRun {
    pub a: usize,
    pub b: usize,
    pub basis: (Vec<i64>, Vec<i64>),
    /// Squared covolume of the saturated rank-2 sublattice of the plane:
    /// the squared norm of the primitive vector of 2x2 minors.
    pub det2_squared: String,
    /// Does the neighbour on this side exist and leave the plane?
    pub exit_left: Option<bool>,
    pub exit_right: Option<bool>,
}

/// Decompose into maximal rank-2 runs. Adjacent runs overlap in exactly one
/// index: when three consecutive vectors have rank 3, the run through the
/// first two ends where the run through the last two begins.
pub fn find_runs(zs: &[ZVector]) -> Result<Vec<CoplanarRun>, StructureError> {
    if zs.len() < 2 {
        return Ok(Vec::new());
    }
    let mut runs = Vec::new();
    let mut a = 0usize; // 0-based start of the current run
    while a + 1 < zs.len() {
        let basis = (&zs[a].coords[..], &zs[a + 1].coords[..]);
        if exact_rank(&[basis.0, basis.1]) != 2 {
            return Err(StructureError::DegenerateInput(format!(
                "consecutive vectors nu={} and nu={} are proportional",
                zs[a].nu,
                zs[a + 1].nu
            )));
        }
        let mut b = a + 1;
        while b + 1 < zs.len()
            && exact_rank(&[basis.0, basis.1, &zs[b + 1].coords[..]]) == 2
        {
            b += 1;
        }
        let exit_left = if a > 0 {
            Some(exact_rank(&[basis.0, basis.1, &zs[a - 1].coords[..]]) == 3)
        } else {
            None
        };
        let exit_right = if b + 1 < zs.len() {
            Some(exact_rank(&[basis.0, basis.1, &zs[b + 1].coords[..]]) == 3)
        } else {
            None
        };
        runs.push(CoplanarRun {
            a: zs[a].nu,
            b: zs[b].nu,
            basis: (basis.0.to_vec(), basis.1.to_vec()),
            det2_squared: plane_covolume_squared(basis.0, basis.1).to_string(),
            exit_left,
            exit_right,
        });
        if b + 1 >= zs.len() {
            break;
        }
        a = b; // overlap of one index
    }
    Ok(runs)
}

/// Squared covolume of `span(u, v) intersect Z^d`: the Gram determinant of
/// the generated lattice divided by the squared index in its saturation,
/// which is the squared gcd of the 2x2 minors (Cauchy-Binet).
fn plane_covolume_squared(u: &[i64], v: &[i64]) -> BigInt {
    let mut minors = Vec::new();
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let m = BigInt::from(u[i]) * BigInt::from(v[j]) - BigInt::from(u[j]) * BigInt::from(v[i]);
            minors.push(m);
        }
    }
    let mut g = BigInt::zero();
    for m in &minors {
        g = g.gcd(m);
    }
    if g.is_zero() {
        return BigInt::zero();
    }
    minors.iter().map(|m| { let p = m / &g; &p * &p }).sum()
}

/// A case-specific quadruple of z-vectors attached to a run with both exits.
#[derive(Clone, Debug, Serialize)]
pub struct Quadruple {
    pub nu: usize,
    pub k: usize,
    /// Record indices of the four rows, in determinant order.
    pub rows: [usize; 4],
    pub rank: usize,
    pub independent: bool,
}

/// For each run `[nu, k]` with both exits, the case's quadruple of records:
/// `(nu-1, nu, k, k+1)` for m1n3 and m2n2, `(nu-1, nu, nu+1, k+1)` for m3n1.
/// Quadruples failing independence are emitted flagged, not dropped.
pub fn pattern_quadruples(
    zs: &[ZVector],
    runs: &[CoplanarRun],
    case: CaseTag,
) -> Vec<Quadruple> {
    if zs.first().is_none_or(|z| z.coords.len() != 4) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for run in runs {
        let (a, b) = (run.a, run.b);
        if a <= 1 || b >= zs.len() {
            continue; // need both neighbours
        }
        if run.exit_left != Some(true) || run.exit_right != Some(true) {
            continue;
        }
        let rows: [usize; 4] = match case {
            CaseTag::M1N3 | CaseTag::M2N2 => [a - 1, a, b, b + 1],
            CaseTag::M3N1 => [a - 1, a, a + 1, b + 1],
            CaseTag::Other => return Vec::new(),
        };
        let vecs: Vec<&[i64]> = rows.iter().map(|&nu| &zs[nu - 1].coords[..]).collect();
        let rank = exact_rank(&vecs);
        out.push(Quadruple { nu: a, k: b, rows, rank, independent: rank == 4 });
    }
    out
}

/// Determinant bound report for one quadruple.
#[derive(Clone, Debug, Serialize)]
pub struct DetCheck {
    pub nu: usize,
    pub k: usize,
    pub rows: [usize; 4],
    pub det_abs: String,
    pub bound_upper: String,
    /// `1 <= |det| <= bound`; `None` when the quadruple is rank-deficient
    /// (excluded from the statistics).
    pub ok: Option<bool>,
}

/// Exact `|det|` of the quadruple's rows against the case's product bound,
/// evaluated with the certified zeta upper endpoints:
/// m1n3: `24 zeta_(nu-1) zeta_nu zeta_k M_(k+1)`;
/// m3n1: `24 zeta_(nu-1) M_nu M_(nu+1) M_(k+1)`;
/// m2n2: `24 zeta_(nu-1) zeta_nu M_k M_(k+1)`.
pub fn det_bound_check(
    q: &Quadruple,
    zs: &[ZVector],
    seq: &ApproxSequence,
    case: CaseTag,
) -> DetCheck {
    let rows: Vec<Vec<i64>> = q.rows.iter().map(|&nu| zs[nu - 1].coords.clone()).collect();
    let det = exact_det(&rows).abs();
    let zeta_hi = |nu: usize| -> DyadicInterval {
        let z = &seq.record(nu).zeta;
        DyadicInterval::point(z.hi_mantissa().clone(), z.bits())
    };
    let height = |nu: usize| BigInt::from(seq.record(nu).height);
    let (nu, k) = (q.nu, q.k);
    let bound = match case {
        CaseTag::M1N3 => zeta_hi(nu - 1)
            .mul(&zeta_hi(nu))
            .mul(&zeta_hi(k))
            .mul_int(&height(k + 1)),
        CaseTag::M3N1 => zeta_hi(nu - 1)
            .mul_int(&height(nu))
            .mul_int(&height(nu + 1))
            .mul_int(&height(k + 1)),
        CaseTag::M2N2 => zeta_hi(nu - 1)
            .mul(&zeta_hi(nu))
            .mul_int(&height(k))
            .mul_int(&height(k + 1)),
        CaseTag::Other => DyadicInterval::zero(),
    }
    .mul_int(&BigInt::from(24));
    let ok = if q.independent {
        let det_iv = DyadicInterval::point(det.clone(), 0);
        Some(!det.is_zero() && !bound.strictly_less_than(&det_iv))
    } else {
        None
    };
    DetCheck {
        nu,
        k,
        rows: q.rows,
        det_abs: det.to_string(),
        bound_upper: format!("{:.6e}", bound.to_f64_hi()),
        ok,
    }
}

/// Products `zeta_l * M_(l+1)` over a run and their spread.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaRatio {
    pub a: usize,
    pub b: usize,
    pub products: Vec<f64>,
    /// max/min over the run, computed from conservative interval endpoints.
    pub ratio: f64,
}

/// Inside one plane the products `zeta_l * M_(l+1)` are comparable to the
/// plane's covolume; measure the spread over `l` in `[a, b-1]`.
pub fn lemma_ratio(run: &CoplanarRun, seq: &ApproxSequence) -> LemmaRatio {
    let mut products = Vec::new();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for l in run.a..run.b {
        let z = &seq.record(l).zeta;
        let m_next = BigInt::from(seq.record(l + 1).height);
        let p = z.mul_int(&m_next);
        products.push(p.to_f64_mid());
        lo = lo.min(p.to_f64_lo());
        hi = hi.max(p.to_f64_hi());
    }
    let ratio = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    LemmaRatio { a: run.a, b: run.b, products, ratio }
}

/// Rank of the span of `z_nu` for `nu >= start`, per cutoff.
pub fn tail_rank(zs: &[ZVector], cutoffs: &[usize]) -> Vec<(usize, usize)> {
    cutoffs
        .iter()
        .map(|&start| {
            let vecs: Vec<&[i64]> = zs
                .iter()
                .filter(|z| z.nu >= start)
                .map(|z| &z.coords[..])
                .collect();
            (start, exact_rank(&vecs))
        })
        .collect()
}

/// Full structure report over one sequence.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub case: CaseTag,
    pub records: usize,
    pub runs: Vec<CoplanarRun>,
    pub quadruples: Vec<Quadruple>,
    pub det_checks: Vec<DetCheck>,
    pub lemma_ratios: Vec<LemmaRatio>,
    pub tail_ranks: Vec<(usize, usize)>,
    /// Lemma-ratio findings above the configured threshold (report-level,
    /// not an assertion: the comparability constants depend on the matrix).
    pub ratio_findings: Vec<String>,
}

pub const DEFAULT_RATIO_THRESHOLD: f64 = 64.0;

pub fn analyze(seq: &ApproxSequence, ratio_threshold: f64) -> Result<StructureReport, StructureError> {
    let case = CaseTag::from_shape(seq.m, seq.n);
    let zs = z_vectors(seq);
    let runs = find_runs(&zs)?;
    let quadruples = pattern_quadruples(&zs, &runs, case);
    let det_checks =
        quadruples.iter().map(|q| det_bound_check(q, &zs, seq, case)).collect::<Vec<_>>();
    let lemma_ratios = runs.iter().map(|r| lemma_ratio(r, seq)).collect::<Vec<_>>();
    let mut ratio_findings = Vec::new();
    for lr in &lemma_ratios {
        if lr.ratio > ratio_threshold {
            ratio_findings.push(format!(
                "run [{}, {}]: product spread {:.2} exceeds threshold {ratio_threshold}",
                lr.a, lr.b, lr.ratio
            ));
        }
    }
    let cutoffs: Vec<usize> = (1..=zs.len()).collect();
    let tail_ranks = tail_rank(&zs, &cutoffs);
    Ok(StructureReport {
        case,
        records: seq.records.len(),
        runs,
        quadruples,
        det_checks,
        lemma_ratios,
        tail_ranks,
        ratio_findings,
    })
}

pub fn report_to_json(report: &StructureReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization");
    s.push('\n');
    s
}

/// Flat CSV of the determinant checks.
pub fn det_checks_to_csv(checks: &[DetCheck]) -> String {
    let mut out = String::from("nu,k,rows,det_abs,bound_upper,ok\n");
    for c in checks {
        out.push_str(&format!(
            "{},{},{}|{}|{}|{},{},{},{}\n",
            c.nu,
            c.k,
            c.rows[0],
            c.rows[1],
            c.rows[2],
            c.rows[3],
            c.det_abs,
            c.bound_upper,
            c.ok.map(|b| b.to_string()).unwrap_or_default()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bestapprox::{compute_sequence, BestApproxRecord};
    use crate::forms::{PrecisionPolicy, ThetaMatrix};
    use crate::realnum::CertifiedReal;

    fn zv(nu: usize, coords: &[i64]) -> ZVector {
        ZVector { nu, coords: coords.to_vec() }
    }

    #[test]
    fn rank_examples() {
        let e: Vec<Vec<i64>> = vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ];
        let refs: Vec<&[i64]> = e.iter().map(|v| &v[..]).collect();
        assert_eq!(exact_rank(&refs), 4);
        assert_eq!(exact_rank(&[&[2, 4, -6], &[1, 2, -3]]), 1);
        // consecutive convergent vectors of a quadratic irrational
        assert_eq!(exact_rank(&[&[1, -1], &[2, -3]]), 2);
        assert_eq!(exact_rank(&[]), 0);
    }

    #[test]
    fn det_examples() {
        let id: Vec<Vec<i64>> =
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
        assert_eq!(exact_det(&id), BigInt::from(1));
        let sw: Vec<Vec<i64>> =
            vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
        assert_eq!(exact_det(&sw), BigInt::from(-1));
        assert_eq!(exact_det(&[vec![1, -1], vec![2, -3]]), BigInt::from(-1));
        let sing: Vec<Vec<i64>> = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(exact_det(&sing), BigInt::zero());
        // Bareiss on a dense 4x4 with known determinant
        let m: Vec<Vec<i64>> = vec![
            vec![3, 1, 4, 1],
            vec![5, 9, 2, 6],
            vec![5, 3, 5, 8],
            vec![9, 7, 9, 3],
        ];
        assert_eq!(exact_det(&m), BigInt::from(98));
    }

    #[test]
    fn runs_on_explicit_vectors() {
        // z1, z2, z3 span a plane; z4 exits it
        let zs = vec![
            zv(1, &[1, 0, 0, 0]),
            zv(2, &[0, 1, 0, 0]),
            zv(3, &[1, 1, 0, 0]),
            zv(4, &[0, 0, 1, 0]),
        ];
        let runs = find_runs(&zs).unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!((runs[0].a, runs[0].b), (1, 3));
        assert_eq!(runs[0].exit_right, Some(true));
        assert_eq!(runs[0].exit_left, None);
        assert_eq!((runs[1].a, runs[1].b), (3, 4)); // overlap of one index
        assert_eq!(runs[1].exit_left, Some(true));
        assert_eq!(runs[1].exit_right, None);
        // two vectors alone always form a run
        let two = vec![zv(1, &[1, 0]), zv(2, &[0, 1])];
        let runs = find_runs(&two).unwrap();
        assert_eq!(runs.len(), 1);
        assert_eq!((runs[0].a, runs[0].b), (1, 2));
        // proportional pair is degenerate
        let bad = vec![zv(1, &[1, 2]), zv(2, &[2, 4])];
        assert!(matches!(find_runs(&bad), Err(StructureError::DegenerateInput(_))));
        // empty and singleton inputs
        assert!(find_runs(&[]).unwrap().is_empty());
        assert!(find_runs(&[zv(1, &[1, 0])]).unwrap().is_empty());
    }

    #[test]
    fn ambient_dimension_two_gives_single_run() {
        let theta = ThetaMatrix::new(
            1,
            1,
            vec![CertifiedReal::algebraic_i64(&[-2, 0, 1], (1, 1), (2, 1)).unwrap()],
        )
        .unwrap();
        let seq = compute_sequence(&theta, 200, &PrecisionPolicy::default(), 1).unwrap();
        let zs = z_vectors(&seq);
        assert_eq!(zs[2].coords, vec![5, -7]);
        let runs = find_runs(&zs).unwrap();
        assert_eq!(runs.len(), 1);
        assert_eq!((runs[0].a, runs[0].b), (1, seq.records.len()));
        // d = 2: no quadruples regardless of case
        assert!(pattern_quadruples(&zs, &runs, CaseTag::Other).is_empty());
        // the d = 2 instance of the product comparability: factor-2 band
        let lr = lemma_ratio(&runs[0], &seq);
        assert!(lr.ratio < 2.0, "spread {} not within a factor 2", lr.ratio);
        for p in &lr.products {
            assert!((0.82..0.86).contains(p), "product {p} outside the measured band");
        }
    }

    #[test]
    fn quadruple_shapes_per_case() {
        // synthetic run list over 5 vectors with both exits on run [2, 4]
        let zs = vec![
            zv(1, &[1, 0, 0, 1]),
            zv(2, &[0, 1, 0, 0]),
            zv(3, &[0, 0, 1, 0]),
            zv(4, &[0, 1, 1, 0]),
            zv(5, &[1, 1, 1, 1]),
        ];
        let runs = find_runs(&zs).unwrap();
        let with_exits: Vec<_> = runs
            .iter()
            .filter(|r| r.exit_left == Some(true) && r.exit_right == Some(true))
            .collect();
        assert!(!with_exits.is_empty());
        let q13 = pattern_quadruples(&zs, &runs, CaseTag::M1N3);
        let q31 = pattern_quadruples(&zs, &runs, CaseTag::M3N1);
        for q in &q13 {
            assert_eq!(q.rows, [q.nu - 1, q.nu, q.k, q.k + 1]);
        }
        for q in &q31 {
            assert_eq!(q.rows, [q.nu - 1, q.nu, q.nu + 1, q.k + 1]);
        }
        // a run without a right exit yields no quadruple
        let tail_run = runs.last().unwrap();
        assert!(tail_run.exit_right.is_none());
        assert!(!q13.iter().any(|q| q.nu == tail_run.a && q.k == tail_run.b));
    }

    #[test]
    fn tail_rank_trajectory() {
        let zs = vec![
            zv(1, &[1, 0, 0, 0]),
            zv(2, &[0, 1, 0, 0]),
            zv(3, &[0, 0, 1, 0]),
            zv(4, &[0, 0, 0, 1]),
            zv(5, &[1, 1, 1, 1]),
        ];
        let ranks = tail_rank(&zs, &[1, 2, 3, 4, 5]);
        assert_eq!(ranks, vec![(1, 4), (2, 4), (3, 3), (4, 2), (5, 1)]);
        // single-vector tail
        assert_eq!(tail_rank(&zs[..1], &[1]), vec![(1, 1)]);
    }

    #[test]
    fn covolume_of_primitive_and_scaled_planes() {
        // standard plane: covolume 1
        assert_eq!(plane_covolume_squared(&[1, 0, 0, 0], &[0, 1, 0, 0]), BigInt::from(1));
        // doubling a basis vector does not change the saturated lattice
        assert_eq!(plane_covolume_squared(&[2, 0, 0, 0], &[0, 3, 0, 0]), BigInt::from(1));
        // a genuinely skew plane: minors (1,0,1,-1,0,1), already primitive
        let c = plane_covolume_squared(&[1, 0, 1, 0], &[0, 1, 0, 1]);
        assert_eq!(c, BigInt::from(4));
    }
}
