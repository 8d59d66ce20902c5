//! Convolution operators restricted to a set, and their spectra.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::check::{int, IneqCheck};
use crate::energy::corr_counts;
use crate::error::{Error, Result};
use crate::func::GroupFn;
use crate::group::GroupSet;
use crate::tol;
use crate::transform::correlate;

/// The matrix `M[x, y] = ψ(x - y)` for `x, y` in a base set.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOperator {
    base: GroupSet,
    kernel: GroupFn,
    matrix: Vec<f64>,
    exact: Option<Vec<i64>>,
    symmetric: bool,
}

impl SpectralOperator {
    pub fn new(base: &GroupSet, kernel: &GroupFn) -> Result<Self> {
        base.group().same_as(kernel.group())?;
        let g = base.group();
        let pts = base.members();
        let n = pts.len();
        let mut matrix = Vec::with_capacity(n * n);
        let mut exact = kernel.ints().map(|_| Vec::with_capacity(n * n));
        for &x in pts {
            for &y in pts {
                let d = g.sub(x, y);
                matrix.push(kernel.at(d).re);
                if let Some(e) = exact.as_mut() {
                    e.push(kernel.int_at(d).expect("integer kernel"));
                }
            }
        }
        let symmetric = kernel.is_real() && kernel.is_even();
        Ok(SpectralOperator { base: base.clone(), kernel: kernel.clone(), matrix, exact, symmetric })
    }

    pub fn base(&self) -> &GroupSet {
        &self.base
    }

    pub fn kernel(&self) -> &GroupFn {
        &self.kernel
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// Row-major entries.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// Row-major entries, when the kernel is integral.
    pub fn exact_matrix(&self) -> Option<&[i64]> {
        self.exact.as_deref()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.dim() + j]
    }

    /// `M v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.matrix[i * n + j] * v[j]).sum()).collect()
    }

    /// `tr(M^k)` in exact arithmetic, i.e. the closed-walk sum
    /// `Σ ψ(x_1 - x_2) ψ(x_2 - x_3) … ψ(x_k - x_1)` over the base set.
    pub fn exact_trace_power(&self, k: usize) -> Option<BigInt> {
        let m = self.exact.as_ref()?;
        let n = self.dim();
        if k == 0 {
            return Some(BigInt::from(n));
        }
        let base: Vec<BigInt> = m.iter().map(|&v| BigInt::from(v)).collect();
        let mut acc = base.clone();
        for _ in 1..k {
            let mut next = vec![BigInt::from(0); n * n];
            for i in 0..n {
                for l in 0..n {
                    let a = &acc[i * n + l];
                    if a == &BigInt::from(0) {
                        continue;
                    }
                    for j in 0..n {
                        next[i * n + j] += a * &base[l * n + j];
                    }
                }
            }
            acc = next;
        }
        Some((0..n).map(|i| acc[i * n + i].clone()).sum())
    }
}

/// `ψ = h ∘ h` for real `h`; symmetric with nonnegative Fourier transform.
pub fn psi_from(h: &GroupFn) -> Result<GroupFn> {
    if !h.is_real() {
        return Err(Error::InvalidArgument("kernel generator must be real".into()));
    }
    correlate(h, h)
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[j]` belongs to `eigenvalues[j]`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Off-diagonal Frobenius norm when the iteration stopped.
    pub residual: f64,
    pub sweeps: usize,
    pub converged: bool,
}

impl Spectrum {
    pub fn top(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn power_sum(&self, k: i32) -> f64 {
        self.eigenvalues.iter().map(|m| m.powi(k)).sum()
    }
}

/// Cyclic Jacobi rotations on a dense symmetric matrix.
///
/// Returns eigenvalues in the order the diagonal ends up in, eigenvectors
/// as columns of a row-major matrix, the final off-diagonal norm and sweep count.
pub fn jacobi(matrix: &[f64], n: usize) -> (Vec<f64>, Vec<f64>, f64, usize) {
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let fro = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > tol::JACOBI_OFF_REL * fro && sweeps < tol::JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        sweeps += 1;
        off = off_norm(&a);
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v, off, sweeps)
}

/// Diagonalizes a symmetric operator.
pub fn eigendecompose(op: &SpectralOperator) -> Result<Spectrum> {
    let n = op.dim();
    let m = op.matrix();
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            asym = asym.max((m[i * n + j] - m[j * n + i]).abs());
        }
    }
    if !op.is_symmetric() || asym > 0.0 {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(symmetric_spectrum(m, n))
}

/// Diagonalizes a dense symmetric matrix given row-major.
pub fn symmetric_spectrum(m: &[f64], n: usize) -> Spectrum {
    let (vals, vecs, residual, sweeps) = jacobi(m, n);
    let fro = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
    Spectrum {
        eigenvalues: order.iter().map(|&i| vals[i]).collect(),
        eigenvectors: order.iter().map(|&j| (0..n).map(|r| vecs[r * n + j]).collect()).collect(),
        residual,
        sweeps,
        converged: residual <= tol::JACOBI_OFF_REL * fro,
    }
}

/// Orthonormality of the eigenvectors and `‖M - VΛVᵀ‖_max`, relative to `‖M‖_max`.
pub fn check_decomposition(op: &SpectralOperator, spec: &Spectrum) -> Vec<IneqCheck> {
    let n = op.dim();
    let v = &spec.eigenvectors;
    let mut ortho = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = (0..n).map(|r| v[i][r] * v[j][r]).sum();
            ortho = ortho.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    let scale = op.matrix().iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let mut recon = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let r: f64 = (0..n).map(|t| v[t][i] * spec.eigenvalues[t] * v[t][j]).sum();
            recon = recon.max((r - op.entry(i, j)).abs());
        }
    }
    vec![
        IneqCheck::le("orthonormality", "eigenvector-orthonormality", ortho, tol::EIGVEC, 0.0),
        IneqCheck::le("reconstruction", "spectral-reconstruction", recon / scale, tol::EIGVEC, 0.0),
    ]
}

type Moments = (f64, f64, Option<(i128, i128)>);

/// `Σ_x ψ(x) (A∘A)(x)` and `Σ_x ψ(x)^2 (A∘A)(x)` in exact arithmetic when possible.
fn kernel_moments(op: &SpectralOperator) -> Result<Moments> {
    let aa = corr_counts(op.base(), op.base())?;
    let psi = op.kernel();
    let vals = psi.to_real();
    let first = vals.iter().zip(&aa).map(|(p, &c)| p * c as f64).sum();
    let second = vals.iter().zip(&aa).map(|(p, &c)| p * p * c as f64).sum();
    let exact = psi.ints().map(|v| {
        let f = v.iter().zip(&aa).map(|(&p, &c)| p as i128 * c as i128).sum();
        let s = v.iter().zip(&aa).map(|(&p, &c)| p as i128 * p as i128 * c as i128).sum();
        (f, s)
    });
    Ok((first, second, exact))
}

/// `Σ μ_j = |A| ψ(0)` and `Σ μ_j^2 = Σ_x ψ(x)^2 (A∘A)(x)`; integer kernels also
/// get the exact matrix-side forms `tr M` and `Σ M[x, y]^2`.
pub fn check_traces(op: &SpectralOperator, spec: &Spectrum) -> Result<Vec<IneqCheck>> {
    let n = op.dim();
    let psi0 = op.kernel().at(0).re;
    let (_, second, exact) = kernel_moments(op)?;
    let mut out = vec![
        IneqCheck::eq("trace", "trace", spec.power_sum(1), n as f64 * psi0, tol::SPECTRAL_REL),
        IneqCheck::eq("trace_sq", "trace-of-square", spec.power_sum(2), second, tol::SPECTRAL_REL),
    ];
    if let (Some(m), Some((_, s))) = (op.exact_matrix(), exact) {
        let tr: i128 = (0..n).map(|i| m[i * n + i] as i128).sum();
        let fro: i128 = m.iter().map(|&x| x as i128 * x as i128).sum();
        out.push(IneqCheck::eq_int("trace_exact", "trace", tr, n as i128 * op.kernel().int_at(0).unwrap() as i128));
        out.push(IneqCheck::eq_int("trace_sq_exact", "trace-of-square", fro, s));
    }
    Ok(out)
}

/// `μ_0 >= |A|^{-1} Σ ψ (A∘A)` and `μ_j >= -ε ‖M‖` for `ψ = h ∘ h`.
pub fn check_rayleigh_and_psd(op: &SpectralOperator, spec: &Spectrum) -> Result<Vec<IneqCheck>> {
    let (first, _, _) = kernel_moments(op)?;
    let n = op.dim().max(1) as f64;
    let scale = op.matrix().iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let bottom = spec.eigenvalues.last().copied().unwrap_or(0.0);
    Ok(vec![
        IneqCheck::ge("rayleigh", "rayleigh-quotient", spec.top(), first / n, tol::SPECTRAL_REL),
        IneqCheck::ge("nonnegative_spectrum", "positive-semidefinite", bottom, -tol::SPECTRAL_REL * scale.max(1.0), 0.0),
    ])
}

/// Triangle sum `Σ_{x,y,z ∈ A} ψ(x-y) ψ(x-z) ψ(y-z)` for `ψ = h ∘ h`, against
/// `(Σ ψ (A∘A))^3 / |A|^3`, `ψ(0)^3 |A|`, and (squared) `(Σ ψ^2 (A∘A))^{3/2} / |A|^{1/2}`.
pub fn check_triangle_inequality(a: &GroupSet, h: &GroupFn) -> Result<Vec<IneqCheck>> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("triangle inequality needs a nonempty set".into()));
    }
    let psi = psi_from(h)?;
    let op = SpectralOperator::new(a, &psi)?;
    let n = a.len();
    let (first, second, exact) = kernel_moments(&op)?;
    if let (Some(m), Some((f, s))) = (op.exact_matrix(), exact) {
        let mut lhs = 0i128;
        for x in 0..n {
            for y in 0..n {
                let mxy = m[x * n + y] as i128;
                for z in 0..n {
                    lhs += mxy * m[x * n + z] as i128 * m[y * n + z] as i128;
                }
            }
        }
        let na = BigInt::from(n);
        let psi0 = BigInt::from(psi.int_at(0).unwrap());
        let lhs_r = int(lhs);
        return Ok(vec![
            IneqCheck::ge_exact("triangle_mean", "triangle-bound-mean", lhs_r.clone(), BigRational::new(BigInt::from(f).pow(3), na.pow(3))),
            IneqCheck::ge_exact("triangle_diagonal", "triangle-bound-diagonal", lhs_r, BigRational::from_integer(psi0.pow(3) * &na)),
            IneqCheck::ge_exact(
                "triangle_l2_squared",
                "triangle-bound-l2",
                BigRational::from_integer(BigInt::from(lhs).pow(2) * &na),
                BigRational::from_integer(BigInt::from(s).pow(3)),
            ),
        ]);
    }
    let m = op.matrix();
    let mut lhs = 0.0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                lhs += m[x * n + y] * m[x * n + z] * m[y * n + z];
            }
        }
    }
    let nf = n as f64;
    let psi0 = psi.at(0).re;
    Ok(vec![
        IneqCheck::ge("triangle_mean", "triangle-bound-mean", lhs, first.powi(3) / nf.powi(3), tol::SPECTRAL_REL),
        IneqCheck::ge("triangle_diagonal", "triangle-bound-diagonal", lhs, psi0.abs().powi(3) * nf, tol::SPECTRAL_REL),
        IneqCheck::ge("triangle_l2", "triangle-bound-l2", lhs, second.powf(1.5) / nf.sqrt(), tol::SPECTRAL_REL),
    ])
}

/// Closed-walk sums of length `k ∈ 3..=5` for `ψ = h ∘ h` with integer `h`:
/// equal to `Σ μ_j^k`, and at least `(|A|^{-1} Σ ψ (A∘A))^k`.
pub fn check_cycle_sums(a: &GroupSet, h: &GroupFn, k: usize) -> Result<Vec<IneqCheck>> {
    if !(3..=5).contains(&k) {
        return Err(Error::InvalidArgument(format!("cycle length {k} outside 3..=5")));
    }
    if a.is_empty() {
        return Err(Error::InvalidArgument("cycle sums need a nonempty set".into()));
    }
    let psi = psi_from(h)?;
    let op = SpectralOperator::new(a, &psi)?;
    let walks = op.exact_trace_power(k).ok_or_else(|| Error::InvalidArgument("cycle sums need an integer kernel".into()))?;
    let spec = eigendecompose(&op)?;
    let (_, _, exact) = kernel_moments(&op)?;
    let (f, _) = exact.expect("integer kernel");
    let walks_r = BigRational::from_integer(walks.clone());
    let walks_f = crate::check::ratio_f64(&walks_r);
    Ok(vec![
        IneqCheck::eq(&format!("cycle_spectral_k{k}"), "cycle-sum-spectral", walks_f, spec.power_sum(k as i32), tol::CYCLE_REL),
        IneqCheck::ge_exact(
            &format!("cycle_mean_k{k}"),
            "cycle-sum-bound",
            walks_r,
            BigRational::new(BigInt::from(f).pow(k as u32), BigInt::from(a.len()).pow(k as u32)),
        ),
    ])
}

/// First eigenfunction bounds for `ψ = h ∘ h`, `h >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigBoundReport {
    pub mu0: f64,
    /// `Σ_x f_0(x)`.
    pub g: f64,
    pub f0_sup: f64,
    pub psi_sup: f64,
    pub psi_l2: f64,
    pub h_l2: f64,
    /// Bounds involving `1/μ_0` are skipped when `μ_0` vanishes.
    pub degenerate: bool,
    pub checks: Vec<IneqCheck>,
}

/// Normalized projection of `v` onto the eigenspace of the top eigenvalue.
fn top_projection(spec: &Spectrum, v: &[f64]) -> Vec<f64> {
    let mu0 = spec.top();
    let gap = tol::SPECTRAL_REL * mu0.abs().max(1.0);
    let n = v.len();
    let mut out = vec![0.0; n];
    for (mu, e) in spec.eigenvalues.iter().zip(&spec.eigenvectors) {
        if mu0 - mu > gap {
            break;
        }
        let c: f64 = e.iter().zip(v).map(|(x, y)| x * y).sum();
        for (o, x) in out.iter_mut().zip(e) {
            *o += c * x;
        }
    }
    let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        out.iter_mut().for_each(|x| *x /= norm);
    }
    out
}

/// `|A| >= (Σ f_0)^2 >= max(μ_0 / ‖ψ‖_∞, μ_0^2 / ‖ψ‖_2^2)`,
/// `‖f_0‖_∞ <= ‖ψ‖_2 / μ_0` and `‖f_0‖_∞ <= ‖h‖_2 / μ_0^{1/2}`.
pub fn first_eigenfunction_bounds(a: &GroupSet, h: &GroupFn) -> Result<EigBoundReport> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("eigenfunction bounds need a nonempty set".into()));
    }
    if h.to_real().iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidArgument("kernel generator must be nonnegative".into()));
    }
    let psi = psi_from(h)?;
    let op = SpectralOperator::new(a, &psi)?;
    let spec = eigendecompose(&op)?;
    let f0 = top_projection(&spec, &vec![1.0; a.len()]);
    let mu0 = spec.top();
    let g: f64 = f0.iter().sum();
    let f0_sup = f0.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (psi_sup, psi_l2, h_l2) = (psi.sup_norm(), psi.l2_sq().sqrt(), h.l2_sq().sqrt());
    let degenerate = mu0 <= tol::SPECTRAL_REL * psi_sup.max(1.0);
    let g2 = g * g;
    let r = tol::SPECTRAL_REL;
    let mut checks = vec![IneqCheck::le("g_size", "first-eigenfunction-mass", g2, a.len() as f64, r)];
    if !degenerate {
        checks.push(IneqCheck::ge("g_sup", "first-eigenfunction-mass", g2, mu0 / psi_sup, r));
        checks.push(IneqCheck::ge("g_l2", "first-eigenfunction-mass", g2, mu0 * mu0 / (psi_l2 * psi_l2), r));
        checks.push(IneqCheck::le("f0_sup_psi", "first-eigenfunction-sup", f0_sup, psi_l2 / mu0, r));
        checks.push(IneqCheck::le("f0_sup_h", "first-eigenfunction-sup-root", f0_sup, h_l2 / mu0.sqrt(), r));
    }
    Ok(EigBoundReport { mu0, g, f0_sup, psi_sup, psi_l2, h_l2, degenerate, checks })
}

/// Nonzero spectrum of the restriction equals that of `ψ(x - y) A(x) A(y)` on all of `Z/N`.
pub fn check_embedding(a: &GroupSet, psi: &GroupFn) -> Result<IneqCheck> {
    let g = a.group();
    let n = g.order();
    let restricted = eigendecompose(&SpectralOperator::new(a, psi)?)?;
    let mut full = vec![0.0; n * n];
    for x in a.iter() {
        for y in a.iter() {
            full[x as usize * n + y as usize] = psi.at(g.sub(x, y)).re;
        }
    }
    let big = symmetric_spectrum(&full, n);
    let scale = restricted.eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let nonzero = |v: &[f64]| {
        let mut out: Vec<f64> = v.iter().copied().filter(|x| x.abs() > tol::SPECTRAL_REL * scale).collect();
        out.sort_by(f64::total_cmp);
        out
    };
    let (r, b) = (nonzero(&restricted.eigenvalues), nonzero(&big.eigenvalues));
    let diff = if r.len() != b.len() { f64::INFINITY } else { r.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) };
    Ok(IneqCheck::le("embedding", "restriction-spectrum", diff, tol::SPECTRAL_REL * scale, 0.0))
}

/// Multiset distance between two spectra after sorting.
pub fn spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::CyclicGroup;
    use proptest::prelude::*;

    fn z(n: u32) -> CyclicGroup {
        CyclicGroup::new(n).unwrap()
    }

    fn gamma7() -> GroupSet {
        GroupSet::new(z(7), [1, 2, 4]).unwrap()
    }

    #[test]
    fn golden_operator() {
        let g = gamma7();
        let psi = correlate(&g.indicator(), &g.indicator()).unwrap();
        let op = SpectralOperator::new(&g, &psi).unwrap();
        assert_eq!(op.exact_matrix().unwrap(), &[3, 1, 1, 1, 3, 1, 1, 1, 3]);
        let spec = eigendecompose(&op).unwrap();
        assert!(spectrum_distance(&spec.eigenvalues, &[5.0, 2.0, 2.0]) < 1e-12);
        assert!((spec.top() - 5.0).abs() < 1e-12);
        assert!(check_traces(&op, &spec).unwrap().iter().all(|c| c.pass));
        assert!(check_decomposition(&op, &spec).iter().all(|c| c.pass));
        let tri = check_triangle_inequality(&g, &g.indicator()).unwrap();
        assert_eq!((tri[0].lhs, tri[0].rhs), (141.0, 125.0));
        assert!(tri.iter().all(|c| c.pass));
        let cyc = check_cycle_sums(&g, &g.indicator(), 4).unwrap();
        assert_eq!(cyc[0].lhs, 657.0);
        assert!(cyc.iter().all(|c| c.pass));
        let report = first_eigenfunction_bounds(&g, &g.indicator()).unwrap();
        assert!((report.mu0 - 5.0).abs() < 1e-12 && report.psi_sup == 3.0);
        assert!((report.g * report.g - 3.0).abs() < 1e-12);
        assert!(report.checks.iter().all(|c| c.pass));
    }

    #[test]
    fn delta_and_constant_kernels() {
        let a = GroupSet::new(z(9), [0, 2, 5, 6]).unwrap();
        let op = SpectralOperator::new(&a, &GroupFn::delta(z(9), 0)).unwrap();
        assert_eq!(op.exact_matrix().unwrap().iter().filter(|&&v| v == 1).count(), 4);
        let spec = eigendecompose(&op).unwrap();
        assert!(spec.eigenvalues.iter().all(|&m| (m - 1.0).abs() < 1e-15));
        let ones = SpectralOperator::new(&a, &GroupFn::constant(z(9), 1)).unwrap();
        assert!(ones.exact_matrix().unwrap().iter().all(|&v| v == 1));
        let zero = eigendecompose(&SpectralOperator::new(&a, &GroupFn::zero(z(9))).unwrap()).unwrap();
        assert!(zero.eigenvalues.iter().all(|&m| m == 0.0));
        let tri = check_triangle_inequality(&a, &GroupFn::delta(z(9), 0)).unwrap();
        assert_eq!(tri[0].lhs, 4.0);
        assert!(tri.iter().all(|c| c.pass));
        let cyc = check_cycle_sums(&a, &GroupFn::delta(z(9), 0), 5).unwrap();
        assert_eq!(cyc[0].lhs, 4.0);
    }

    #[test]
    fn non_symmetric_rejected() {
        let a = GroupSet::new(z(5), [0, 1, 2]).unwrap();
        let op = SpectralOperator::new(&a, &GroupFn::delta(z(5), 1)).unwrap();
        assert!(matches!(eigendecompose(&op), Err(Error::NotSymmetric(_))));
        assert!(check_cycle_sums(&a, &GroupFn::delta(z(5), 1), 6).is_err());
    }

    #[test]
    fn closed_form_a_identity_plus_b_ones() {
        // aI + bJ on n points has eigenvalues a + nb and a (n - 1 times)
        let n = 6;
        let mut m = vec![1.5; n * n];
        for i in 0..n {
            m[i * n + i] += 2.0;
        }
        let spec = symmetric_spectrum(&m, n);
        let mut expect = vec![2.0; n];
        expect[0] = 2.0 + 1.5 * n as f64;
        assert!(spectrum_distance(&spec.eigenvalues, &expect) < 1e-12);
        assert!(spec.converged);
    }

    #[test]
    fn subgroup_equality_cases() {
        let g = z(12);
        let h = crate::energy::additive_subgroup(g, 3).unwrap();
        let tri = check_triangle_inequality(&h, &h.indicator()).unwrap();
        assert_eq!(tri[0].slack, 0.0);
        let cyc = check_cycle_sums(&h, &h.indicator(), 3).unwrap();
        assert_eq!(cyc[1].slack, 0.0);
        let report = first_eigenfunction_bounds(&h, &h.indicator()).unwrap();
        assert!((report.g * report.g - 4.0).abs() < 1e-12);
        assert!(report.checks.iter().all(|c| c.pass));
    }

    fn direct_cycle(op: &SpectralOperator, k: usize) -> i128 {
        let n = op.dim();
        let m = op.exact_matrix().unwrap();
        let mut total = 0i128;
        let mut idx = vec![0usize; k];
        loop {
            let mut term = 1i128;
            for i in 0..k {
                term *= m[idx[i] * n + idx[(i + 1) % k]] as i128;
            }
            total += term;
            let mut pos = 0;
            while pos < k {
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                return total;
            }
        }
    }

    fn arb_set(n: u32) -> impl Strategy<Value = GroupSet> {
        proptest::collection::vec(any::<bool>(), n as usize)
            .prop_map(move |bits| GroupSet::new(z(n), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32)).unwrap())
    }

    proptest! {
        #[test]
        fn random_kernels(a in arb_set(16), hv in proptest::collection::vec(0i64..=3, 16)) {
            prop_assume!(!a.is_empty());
            let h = GroupFn::from_ints(z(16), hv).unwrap();
            let psi = psi_from(&h).unwrap();
            let op = SpectralOperator::new(&a, &psi).unwrap();
            let spec = eigendecompose(&op).unwrap();
            prop_assert!(check_traces(&op, &spec).unwrap().iter().all(|c| c.pass));
            prop_assert!(check_decomposition(&op, &spec).iter().all(|c| c.pass));
            prop_assert!(check_rayleigh_and_psd(&op, &spec).unwrap().iter().all(|c| c.pass));
            prop_assert!(check_triangle_inequality(&a, &h).unwrap().iter().all(|c| c.pass));
            for k in 3..=5 {
                prop_assert!(check_cycle_sums(&a, &h, k).unwrap().iter().all(|c| c.pass));
            }
            prop_assert!(first_eigenfunction_bounds(&a, &h).unwrap().checks.iter().all(|c| c.pass));
            prop_assert!(check_embedding(&a, &psi).unwrap().pass);
        }

        #[test]
        fn walk_sum_is_enumeration(a in arb_set(7), hv in proptest::collection::vec(-2i64..=2, 7), k in 3usize..=4) {
            prop_assume!(!a.is_empty());
            let psi = psi_from(&GroupFn::from_ints(z(7), hv).unwrap()).unwrap();
            let op = SpectralOperator::new(&a, &psi).unwrap();
            prop_assert_eq!(op.exact_trace_power(k).unwrap(), BigInt::from(direct_cycle(&op, k)));
        }
    }
}
