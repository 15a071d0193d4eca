//! Nerves of point-cloud covers, mapper pullbacks, and the presheaf of
//! vanishing polynomials on a nerve.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::linalg::{kernel, Matrix};
use crate::sheaf::SheafOracle;
use crate::space::{build_from_maximal_simplices, FiniteSpace};

/// Points in `R^n`, all of the same dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::MalformedInput(format!(
                "point {i} has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::MalformedInput("non-finite coordinate".into()));
        }
        Ok(PointCloud { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// One coordinate of every point.
    pub fn coordinate(&self, k: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[k]).collect()
    }
}

/// Named subsets of point indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    names: Vec<String>,
    sets: Vec<Vec<usize>>,
}

impl Cover {
    /// Sorts and deduplicates each set; order of sets is kept.
    pub fn new(named_sets: Vec<(String, Vec<usize>)>) -> Self {
        let (names, sets) = named_sets
            .into_iter()
            .map(|(n, mut s)| {
                s.sort_unstable();
                s.dedup();
                (n, s)
            })
            .unzip();
        Cover { names, sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    /// Indices in `0..n_points` that no set contains.
    pub fn uncovered(&self, n_points: usize) -> Vec<usize> {
        let mut hit = vec![false; n_points];
        for &i in self.sets.iter().flatten() {
            if i < n_points {
                hit[i] = true;
            }
        }
        (0..n_points).filter(|&i| !hit[i]).collect()
    }

    /// Errors if any index is out of range for `n_points`.
    pub fn check_indices(&self, n_points: usize) -> Result<()> {
        for (name, s) in self.names.iter().zip(&self.sets) {
            if let Some(&bad) = s.iter().find(|&&i| i >= n_points) {
                return Err(Error::MalformedInput(format!(
                    "cover set '{name}' references point {bad}, but there are {n_points} points"
                )));
            }
        }
        Ok(())
    }
}

/// The nerve of a cover with the point set carried by each simplex.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub space: FiniteSpace,
    /// `V_τ`, the common points of the sets in `τ`, per element.
    pub point_sets: Vec<Vec<usize>>,
    /// Cover-set names, indexed by vertex id.
    pub names: Vec<String>,
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Simplices are sets of at most `max_dim + 1` cover members with a
/// non-empty common intersection. Empty cover members give no vertex.
pub fn build_nerve(cover: &Cover, max_dim: usize) -> Result<Nerve> {
    if cover.is_empty() {
        return Err(Error::MalformedInput("empty cover".into()));
    }
    let mut simplices: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
    // depth-first over increasing index lists, carrying the running intersection
    let mut stack: Vec<(Vec<u32>, Vec<usize>)> = (0..cover.len())
        .rev()
        .filter(|&i| !cover.set(i).is_empty())
        .map(|i| (vec![i as u32], cover.set(i).to_vec()))
        .collect();
    while let Some((idx, common)) = stack.pop() {
        if idx.len() <= max_dim {
            let last = *idx.last().unwrap() as usize;
            for k in (last + 1..cover.len()).rev() {
                let next = intersect(&common, cover.set(k));
                if !next.is_empty() {
                    let mut longer = idx.clone();
                    longer.push(k as u32);
                    stack.push((longer, next));
                }
            }
        }
        simplices.push((idx, common));
    }
    if simplices.is_empty() {
        return Err(Error::MalformedInput("every cover set is empty".into()));
    }
    let space = build_from_maximal_simplices(simplices.iter().map(|(s, _)| s.clone()))?;
    let mut point_sets = vec![Vec::new(); space.len()];
    for (s, pts) in simplices {
        let x = space.element(&s);
        point_sets[x] = pts;
    }
    Ok(Nerve {
        space,
        point_sets,
        names: (0..cover.len()).map(|i| cover.name(i).to_string()).collect(),
    })
}

/// Exponent vectors of a finite set of monomials in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSet {
    n: usize,
    exponents: Vec<Vec<u32>>,
}

impl MonomialSet {
    /// Rejects empty sets, repeated monomials and ragged exponent vectors.
    pub fn new(exponents: Vec<Vec<u32>>) -> Result<Self> {
        let n = exponents
            .first()
            .ok_or_else(|| Error::MalformedInput("empty monomial set".into()))?
            .len();
        if exponents.iter().any(|e| e.len() != n) {
            return Err(Error::MalformedInput("monomials have different arities".into()));
        }
        let mut seen = exponents.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != exponents.len() {
            return Err(Error::MalformedInput("repeated monomial".into()));
        }
        Ok(MonomialSet { n, exponents })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    /// Value of every monomial at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.exponents
            .iter()
            .map(|e| e.iter().zip(x).map(|(&k, &v)| v.powi(k as i32)).product())
            .collect()
    }

    /// Renders a coefficient vector as a polynomial in `x, y, z` (or `x0, x1, ...`).
    pub fn format_polynomial(&self, coeffs: &[f64]) -> String {
        let var = |i: usize| match (self.n, i) {
            (n, 0) if n <= 3 => "x".to_string(),
            (n, 1) if n <= 3 => "y".to_string(),
            (n, 2) if n <= 3 => "z".to_string(),
            _ => format!("x{i}"),
        };
        let terms: Vec<String> = self
            .exponents
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| c.abs() > 1e-12)
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { var(i) } else { format!("{}^{k}", var(i)) })
                    .collect();
                if mono.is_empty() {
                    format!("{c:+.6}")
                } else {
                    format!("{c:+.6}*{}", mono.join("*"))
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" ")
        }
    }
}

/// All monomials in `n` variables of total degree at most `d`, by degree and
/// then with earlier variables carrying higher powers (`1, x, y, x^2, xy, y^2`).
pub fn monomials_up_to_degree(n: usize, d: u32) -> Result<MonomialSet> {
    if n == 0 {
        return Err(Error::MalformedInput("monomials need at least one variable".into()));
    }
    let mut out = Vec::new();
    for total in 0..=d {
        let mut e = vec![0u32; n];
        fill(&mut e, 0, total, &mut out);
    }
    MonomialSet::new(out)
}

fn fill(e: &mut Vec<u32>, i: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if i == e.len() - 1 {
        e[i] = remaining;
        out.push(e.clone());
        return;
    }
    for k in (0..=remaining).rev() {
        e[i] = k;
        fill(e, i + 1, remaining - k, out);
    }
}

/// How vanishing dimensions are computed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelMode {
    /// Singular values at most `tol × σ_max` count toward the kernel.
    Numerical { tol: f64 },
    /// Rank over the rationals of the exactly converted coordinates.
    Exact,
}

impl Default for KernelMode {
    fn default() -> Self {
        KernelMode::Numerical { tol: 1e-8 }
    }
}

/// `I_M(V)`: polynomials in the span of `M` vanishing on a point set.
#[derive(Clone, Debug, PartialEq)]
pub struct VanishingSpace {
    pub dim: usize,
    /// Unit-norm coefficient vectors over the monomial set.
    pub basis: Vec<Vec<f64>>,
}

/// Kernel of the evaluation matrix of `m` on the given points.
pub fn vanishing_dimension(
    cloud: &PointCloud,
    subset: &[usize],
    m: &MonomialSet,
    mode: KernelMode,
) -> Result<VanishingSpace> {
    if m.is_empty() {
        return Err(Error::MalformedInput("empty monomial set".into()));
    }
    if m.num_vars() != cloud.dim() && !subset.is_empty() {
        return Err(Error::MalformedInput(format!(
            "monomials use {} variables but points have {} coordinates",
            m.num_vars(),
            cloud.dim()
        )));
    }
    let cols = m.len();
    let rows: Vec<Vec<f64>> = subset.iter().map(|&i| m.evaluate(cloud.point(i))).collect();
    match mode {
        KernelMode::Numerical { tol } => {
            if tol <= 0.0 {
                return Err(Error::MalformedInput("tolerance must be positive".into()));
            }
            Ok(numerical_kernel(&rows, cols, tol))
        }
        KernelMode::Exact => exact_kernel(&rows, cols),
    }
}

fn numerical_kernel(rows: &[Vec<f64>], cols: usize, tol: f64) -> VanishingSpace {
    // column scaling keeps high-degree monomials from dominating the spectrum
    let scale: Vec<f64> = (0..cols)
        .map(|j| {
            let s = rows.iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    let height = rows.len().max(cols);
    let a = DMatrix::from_fn(height, cols, |i, j| {
        rows.get(i).map_or(0.0, |r| r[j] / scale[j])
    });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let basis: Vec<Vec<f64>> = (0..cols)
        .filter(|&k| sigma_max == 0.0 || svd.singular_values[k] <= tol * sigma_max)
        .map(|k| {
            let v: Vec<f64> = (0..cols).map(|j| v_t[(k, j)] / scale[j]).collect();
            normalize(v)
        })
        .collect();
    VanishingSpace {
        dim: basis.len(),
        basis,
    }
}

fn normalize(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    // sign convention: largest-magnitude entry positive
    let pivot = v
        .iter()
        .cloned()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    let s = if pivot < 0.0 { -n } else { n };
    v.into_iter().map(|x| x / s).collect()
}

fn exact_kernel(rows: &[Vec<f64>], cols: usize) -> Result<VanishingSpace> {
    let q = Rationals;
    let mut a = Matrix::zeros(&q, rows.len(), cols);
    for (i, r) in rows.iter().enumerate() {
        for (j, v) in r.iter().enumerate() {
            let x = BigRational::from_float(*v)
                .ok_or_else(|| Error::MalformedInput("non-finite value".into()))?;
            a.set(i, j, x);
        }
    }
    let basis: Vec<Vec<f64>> = kernel(&q, &a)
        .into_iter()
        .map(|v| {
            normalize(
                v.iter()
                    .map(|x| num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN))
                    .collect(),
            )
        })
        .collect();
    Ok(VanishingSpace {
        dim: basis.len(),
        basis,
    })
}

/// How `δ` is decided for the vanishing presheaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DeltaRule {
    /// Equal dimensions; restrictions are injective, so this decides isomorphism.
    #[default]
    Dimension,
    /// Also check numerically that the two kernels span the same subspace.
    Inclusion,
}

/// `W ↦ I_M(X_W)` on a nerve; on `B_τ` the covered points are `V_τ`.
pub struct VanishingPresheaf {
    stalks: Vec<VanishingSpace>,
    rule: DeltaRule,
}

impl VanishingPresheaf {
    /// Computes one kernel per nerve element, in parallel.
    pub fn new(
        nerve: &Nerve,
        cloud: &PointCloud,
        m: &MonomialSet,
        mode: KernelMode,
        rule: DeltaRule,
    ) -> Result<Self> {
        let stalks = nerve
            .point_sets
            .par_iter()
            .map(|pts| vanishing_dimension(cloud, pts, m, mode))
            .collect::<Result<Vec<_>>>()?;
        Ok(VanishingPresheaf { stalks, rule })
    }

    pub fn stalk(&self, x: usize) -> &VanishingSpace {
        &self.stalks[x]
    }

    pub fn dim(&self, x: usize) -> usize {
        self.stalks[x].dim
    }

    fn same_span(&self, x: usize, y: usize) -> bool {
        let (a, b) = (&self.stalks[x].basis, &self.stalks[y].basis);
        if a.is_empty() {
            return b.is_empty();
        }
        let cols = a[0].len();
        let stacked = DMatrix::from_fn(a.len() + b.len(), cols, |i, j| {
            if i < a.len() {
                a[i][j]
            } else {
                b[i - a.len()][j]
            }
        });
        let sv = stacked.singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        sv.iter().filter(|&&s| s > 1e-6 * top).count() == a.len()
    }
}

impl SheafOracle for VanishingPresheaf {
    fn value_summary(&self, x: usize) -> String {
        format!("dim={}", self.stalks[x].dim)
    }

    fn delta(&self, x: usize, y: usize) -> bool {
        let equal = self.stalks[x].dim == self.stalks[y].dim;
        match self.rule {
            DeltaRule::Dimension => equal,
            DeltaRule::Inclusion => equal && self.same_span(x, y),
        }
    }
}

/// Pullback of an interval cover along `f_values`: each interval's preimage is
/// split into components of the graph joining points closer than `radius`.
pub fn mapper_pullback_cover(
    cloud: &PointCloud,
    f_values: &[f64],
    intervals: &[(f64, f64)],
    radius: f64,
) -> Result<Cover> {
    if !(radius > 0.0) {
        return Err(Error::MalformedInput("radius must be positive".into()));
    }
    if f_values.len() != cloud.len() {
        return Err(Error::MalformedInput(format!(
            "{} function values for {} points",
            f_values.len(),
            cloud.len()
        )));
    }
    if let Some((lo, hi)) = intervals.iter().find(|(lo, hi)| !(lo <= hi)) {
        return Err(Error::MalformedInput(format!("bad interval {lo}:{hi}")));
    }
    let r2 = radius * radius;
    let close = |a: usize, b: usize| {
        cloud
            .point(a)
            .iter()
            .zip(cloud.point(b))
            .map(|(u, v)| (u - v) * (u - v))
            .sum::<f64>()
            < r2
    };
    let mut sets = Vec::new();
    for (k, &(lo, hi)) in intervals.iter().enumerate() {
        let members: Vec<usize> = (0..cloud.len())
            .filter(|&i| lo <= f_values[i] && f_values[i] <= hi)
            .collect();
        let mut seen = vec![false; members.len()];
        let mut comp_id = 0;
        for start in 0..members.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![members[start]];
            let mut queue = VecDeque::from([start]);
            while let Some(a) = queue.pop_front() {
                for b in 0..members.len() {
                    if !seen[b] && close(members[a], members[b]) {
                        seen[b] = true;
                        comp.push(members[b]);
                        queue.push_back(b);
                    }
                }
            }
            sets.push((format!("I{k}.{comp_id}"), comp));
            comp_id += 1;
        }
    }
    Ok(Cover::new(sets))
}
