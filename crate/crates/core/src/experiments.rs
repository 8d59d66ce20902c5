//! Desk-scale experiment scans over multiplicative subgroups, convex sets and
//! sets with small multiplicative doubling.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy;
use crate::error::{Error, Result};
use crate::field::{self, MultSubgroup, PrimeField};
use crate::group::{sumset_size, CyclicGroup, GroupSet, Sign};
use crate::par::{map_range, map_slice, Exec};

/// Largest iterated sumset tried by the coverage search.
pub const COVERAGE_CAP: u32 = 12;
/// Largest prime for the subgroup scans.
pub const SCAN_MAX_PRIME: u32 = 10_000;

fn log2(x: f64) -> Option<f64> {
    let l = x.log2();
    (l > 0.0).then_some(l)
}

/// `(Γ∘Γ)(x)` for every `x`, one count per coset.
pub fn subgroup_autocorrelation(gamma: &MultSubgroup) -> Vec<u64> {
    subgroup_pair_counts(gamma, Sign::Minus)
}

/// `|{(γ_1, γ_2) : γ_2 ∓ γ_1 = x}|` for every `x`; `Minus` gives `Γ∘Γ`, `Plus` gives `Γ*Γ`.
fn subgroup_pair_counts(gamma: &MultSubgroup, sign: Sign) -> Vec<u64> {
    let f = gamma.field();
    let p = gamma.p();
    let grp = f.additive();
    let count_at = |x: u32| -> u64 {
        gamma
            .elements()
            .iter()
            .filter(|&&g| {
                let y = match sign {
                    Sign::Minus => grp.add(g, x),
                    Sign::Plus => grp.sub(x, g),
                };
                gamma.contains(y)
            })
            .count() as u64
    };
    let reps: Vec<u64> = (0..gamma.index()).map(|c| count_at(f.pow_root(c as u64))).collect();
    (0..p).map(|x| if x == 0 { count_at(0) } else { reps[gamma.coset(x).unwrap() as usize] }).collect()
}

/// `max_{ξ ≠ 0} |Σ_{γ ∈ Γ} e(-ξγ/p)|`, one evaluation per coset.
pub fn max_fourier_coefficient(gamma: &MultSubgroup) -> f64 {
    let p = gamma.p() as f64;
    let f = gamma.field();
    (0..gamma.index())
        .map(|c| {
            let xi = f.pow_root(c as u64);
            gamma.elements().iter().map(|&g| Complex64::from_polar(1.0, -TAU * f.mul(xi, g) as f64 / p)).sum::<Complex64>().norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupScanRow {
    pub p: u32,
    pub t: u32,
    pub e2: u128,
    pub e3: u128,
    pub sum: usize,
    pub diff: usize,
    pub ratio_52: f64,
    pub ratio_229: Option<f64>,
    pub ratio_sumw: Option<f64>,
    pub lower: f64,
    /// `E(Γ) |Γ+Γ| >= |Γ|^4`, in integers.
    pub lower_ok: bool,
    pub max_fourier: f64,
}

pub fn subgroup_row(gamma: &MultSubgroup) -> SubgroupScanRow {
    let t = gamma.order() as u128;
    let corr = subgroup_autocorrelation(gamma);
    let conv = subgroup_pair_counts(gamma, Sign::Plus);
    let e2: u128 = corr.iter().map(|&c| (c as u128).pow(2)).sum();
    let e3: u128 = corr.iter().map(|&c| (c as u128).pow(3)).sum();
    let sum = conv.iter().filter(|&&c| c > 0).count();
    let diff = corr.iter().filter(|&&c| c > 0).count();
    let tf = t as f64;
    let lt = log2(tf);
    SubgroupScanRow {
        p: gamma.p(),
        t: gamma.order(),
        e2,
        e3,
        sum,
        diff,
        ratio_52: e2 as f64 / tf.powf(2.5),
        ratio_229: lt.map(|l| e2 as f64 / (tf.powf(22.0 / 9.0) * l)),
        ratio_sumw: lt.map(|l| e2 as f64 / (tf.powf(4.0 / 3.0) * (sum as f64).powf(2.0 / 3.0) * l)),
        lower: (t.pow(4)) as f64 / sum as f64,
        lower_ok: e2 * sum as u128 >= t.pow(4),
        max_fourier: max_fourier_coefficient(gamma),
    }
}

/// Recomputes the integer columns of a row by direct enumeration.
pub fn brute_force_row(row: &SubgroupScanRow) -> Result<bool> {
    let gamma = MultSubgroup::new(Arc::new(PrimeField::new(row.p)?), row.t)?;
    let s = gamma.as_set();
    let e2 = energy::energy(s, s)?;
    let e3 = energy::energy_k(s, s, 3)?;
    let sum = sumset_size(s, s, Sign::Plus)?;
    let diff = sumset_size(s, s, Sign::Minus)?;
    Ok(e2 == row.e2 && e3 == row.e3 && sum == row.sum && diff == row.diff)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupScan {
    pub rows: Vec<SubgroupScanRow>,
    /// Rows recomputed by brute force and whether each matched.
    pub validated: Vec<(u32, u32, bool)>,
    pub all_lower_ok: bool,
    pub worst_ratio_52: f64,
}

impl SubgroupScan {
    pub fn pass(&self) -> bool {
        self.all_lower_ok && self.validated.iter().all(|v| v.2) && self.worst_ratio_52.is_finite()
    }
}

fn check_pmax(p_max: u32) -> Result<()> {
    if p_max > SCAN_MAX_PRIME {
        return Err(Error::InvalidArgument(format!("prime bound {p_max} above {SCAN_MAX_PRIME}")));
    }
    Ok(())
}

/// Every `(p, t)` with `p <= p_max`, `t | p - 1`, `t_min <= t <= t_max`,
/// sorted by `p` then `t`.
pub fn subgroup_jobs(p_max: u32, t_min: u32, t_max: u32) -> Result<Vec<(Arc<PrimeField>, u32)>> {
    check_pmax(p_max)?;
    let mut jobs = Vec::new();
    for p in field::primes_up_to(p_max) {
        let f = Arc::new(PrimeField::new(p)?);
        for t in field::divisors(p as u64 - 1) {
            let t = t as u32;
            if (t_min..=t_max).contains(&t) {
                jobs.push((Arc::clone(&f), t));
            }
        }
    }
    Ok(jobs)
}

/// Energy and sumset statistics for every subgroup; 1% of rows (at least one)
/// are recomputed by brute force.
pub fn subgroup_scan(p_max: u32, t_min: u32, t_max: u32, exec: Exec) -> Result<SubgroupScan> {
    let jobs = subgroup_jobs(p_max, t_min, t_max)?;
    let rows: Vec<SubgroupScanRow> =
        map_slice(exec, &jobs, |(f, t)| subgroup_row(&MultSubgroup::new(Arc::clone(f), *t).expect("t divides p - 1")));
    let sample: Vec<&SubgroupScanRow> = rows.iter().step_by(100).collect();
    let validated = map_slice(exec, &sample, |r| brute_force_row(r).map(|ok| (r.p, r.t, ok))).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SubgroupScan {
        all_lower_ok: rows.iter().all(|r| r.lower_ok),
        worst_ratio_52: rows.iter().map(|r| r.ratio_52).fold(0.0, f64::max),
        rows,
        validated,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetRow {
    pub i: u32,
    pub size: usize,
    /// `t^3 log t / (2^{3i} d^3)`, reported without a constant.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelProfile {
    pub p: u32,
    pub t: u32,
    pub energy: u128,
    pub d: f64,
    /// `|{x ≠ 0 : ψ(x) > d}|`.
    pub above: usize,
    pub rows: Vec<LevelSetRow>,
    /// The bins partition the points above the threshold.
    pub partition_ok: bool,
}

/// Dyadic level sets `S_i = {x ≠ 0 : 2^{i-1} d < ψ(x) <= 2^i d}` of
/// `ψ = Γ∘Γ` with `d = E(Γ) / (16 t^2)`.
pub fn level_set_profile(p: u32, t: u32) -> Result<LevelProfile> {
    check_pmax(p)?;
    let gamma = MultSubgroup::new(Arc::new(PrimeField::new(p)?), t)?;
    let psi = subgroup_autocorrelation(&gamma);
    let e: u128 = psi.iter().map(|&c| (c as u128).pow(2)).sum();
    let tf = t as f64;
    let d = e as f64 / (16.0 * tf * tf);
    // ψ(x) > 2^{i-1} d  ⇔  16 t^2 ψ(x) > 2^{i-1} E, in integers
    let scaled = |x: u64| 16 * (t as u128).pow(2) * x as u128;
    let bin = |v: u64| -> Option<u32> {
        if scaled(v) <= e {
            return None;
        }
        (1u32..).find(|&i| scaled(v) <= (e << i))
    };
    let mut counts: Vec<usize> = Vec::new();
    let mut above = 0;
    for &v in &psi[1..] {
        if let Some(i) = bin(v) {
            above += 1;
            if counts.len() < i as usize {
                counts.resize(i as usize, 0);
            }
            counts[i as usize - 1] += 1;
        }
    }
    let log_t = tf.log2();
    let rows: Vec<LevelSetRow> = counts
        .iter()
        .enumerate()
        .map(|(k, &size)| {
            let i = k as u32 + 1;
            LevelSetRow { i, size, bound: tf.powi(3) * log_t / (2f64.powi(3 * i as i32) * d.powi(3)) }
        })
        .collect();
    let partition_ok = rows.iter().map(|r| r.size).sum::<usize>() == above;
    Ok(LevelProfile { p, t, energy: e, d, above, rows, partition_ok })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub p: u32,
    pub t: u32,
    /// Smallest `m` with `mΓ = F_p`, if found by the cap.
    pub m: Option<u32>,
    pub within_6: bool,
    pub cap_reached: bool,
}

/// Smallest `m <= COVERAGE_CAP` with `mΓ = F_p`, tracking `mΓ` coset by coset.
pub fn coverage(gamma: &MultSubgroup) -> CoverageRow {
    let f = gamma.field();
    let grp = f.additive();
    let n = gamma.index() as usize;
    // current set: which cosets it contains, and whether it contains 0
    let mut cosets = vec![false; n];
    cosets[0] = true;
    let mut zero = false;
    let member = |x: u32, cosets: &[bool], zero: bool| if x == 0 { zero } else { cosets[gamma.coset(x).unwrap() as usize] };
    let mut m = 1;
    let mut found = None;
    while m < COVERAGE_CAP {
        let next: Vec<bool> = (0..n)
            .map(|c| {
                let xi = f.pow_root(c as u64);
                gamma.elements().iter().any(|&g| member(grp.sub(xi, g), &cosets, zero))
            })
            .collect();
        zero = gamma.elements().iter().any(|&g| member(grp.neg(g), &cosets, zero));
        cosets = next;
        m += 1;
        if zero && cosets.iter().all(|&c| c) {
            found = Some(m);
            break;
        }
    }
    CoverageRow { p: gamma.p(), t: gamma.order(), m: found, within_6: found.is_some_and(|m| m <= 6), cap_reached: found.is_none() }
}

pub fn coverage_scan(p_max: u32, exec: Exec) -> Result<Vec<CoverageRow>> {
    let jobs = subgroup_jobs(p_max, 1, u32::MAX)?;
    Ok(map_slice(exec, &jobs, |(f, t)| coverage(&MultSubgroup::new(Arc::clone(f), *t).expect("t divides p - 1"))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionRow {
    pub p: u32,
    pub t: u32,
    pub kind: String,
    pub a: usize,
    pub sum: usize,
    /// `|A+Γ| log^{2/3} |Γ| / (|A| |Γ|^{5/9})`.
    pub ratio: Option<f64>,
}

fn expansion_row(gamma: &MultSubgroup, kind: &str, a: &GroupSet) -> Result<ExpansionRow> {
    let sum = sumset_size(a, gamma.as_set(), Sign::Plus)?;
    let t = gamma.order() as f64;
    Ok(ExpansionRow {
        p: gamma.p(),
        t: gamma.order(),
        kind: kind.to_string(),
        a: a.len(),
        sum,
        ratio: log2(t).map(|l| sum as f64 * l.powf(2.0 / 3.0) / (a.len() as f64 * t.powf(5.0 / 9.0))),
    })
}

/// Rows for `A = Γ`, a singleton, and the minimum over `trials` random `A ⊆ Γ`.
pub fn expansion_scan(p: u32, t: u32, trials: usize, seed: u64) -> Result<Vec<ExpansionRow>> {
    check_pmax(p)?;
    let gamma = MultSubgroup::new(Arc::new(PrimeField::new(p)?), t)?;
    let grp = gamma.field().additive();
    let mut rows = vec![expansion_row(&gamma, "gamma", gamma.as_set())?, expansion_row(&gamma, "singleton", &GroupSet::new(grp, [1])?)?];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ExpansionRow> = None;
    for _ in 0..trials {
        let d = rng.random_range(0.05..0.95);
        let a = GroupSet::new(grp, gamma.elements().iter().copied().filter(|_| rng.random_bool(d)))?;
        if a.is_empty() {
            continue;
        }
        let row = expansion_row(&gamma, "random_min", &a)?;
        let better = match (&best, row.ratio) {
            (None, _) => true,
            (Some(b), Some(r)) => b.ratio.is_none_or(|br| r < br),
            _ => false,
        };
        if better {
            best = Some(row);
        }
    }
    rows.extend(best);
    Ok(rows)
}

/// Source of convex sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexGenerator {
    /// `{1, 4, 9, …, n^2}`.
    Squares,
    /// Gaps `d_j = 3j + r_j` with `r_j ∈ {0, 1, 2}` drawn from the seed.
    Perturbed(u64),
}

impl ConvexGenerator {
    pub fn generate(self, n: usize) -> Vec<i64> {
        match self {
            ConvexGenerator::Squares => (1..=n as i64).map(|i| i * i).collect(),
            ConvexGenerator::Perturbed(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::with_capacity(n);
                let mut x = 0i64;
                for j in 0..n as i64 {
                    if j > 0 {
                        x += 3 * j + rng.random_range(0..3);
                    }
                    out.push(x);
                }
                out
            }
        }
    }
}

/// Strictly increasing gaps; the error carries the first offending index.
pub fn check_convex(a: &[i64]) -> Result<()> {
    for i in 1..a.len() {
        if a[i] <= a[i - 1] {
            return Err(Error::NotConvex(i));
        }
        if i >= 2 && a[i] - a[i - 1] <= a[i - 1] - a[i - 2] {
            return Err(Error::NotConvex(i));
        }
    }
    Ok(())
}

/// Difference counts `r(x) = |{(a, b) : a - b = x}|` over `Z`.
fn difference_counts(a: &[i64]) -> HashMap<i64, u64> {
    let mut r = HashMap::with_capacity(a.len() * a.len());
    for &x in a {
        for &y in a {
            *r.entry(x - y).or_insert(0) += 1;
        }
    }
    r
}

/// `(E_2, E_3, max_{x≠0} r(x))` over `Z`.
pub fn integer_energies(a: &[i64]) -> (u128, u128, u64) {
    let r = difference_counts(a);
    let e2 = r.values().map(|&c| (c as u128).pow(2)).sum();
    let e3 = r.values().map(|&c| (c as u128).pow(3)).sum();
    let max = r.iter().filter(|(&x, _)| x != 0).map(|(_, &c)| c).max().unwrap_or(0);
    (e2, e3, max)
}

/// `(E_2, E_3)` of `A` reduced into `Z/N` with `N > 4 max|A|`, counting
/// differences modulo `N`.
pub fn embedded_energies(a: &[i64]) -> Result<(u128, u128)> {
    let max = a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let n = u32::try_from(4 * max + 1).map_err(|_| Error::Overflow("embedding modulus"))?;
    let g = CyclicGroup::new(n)?;
    let set = GroupSet::new(g, a.iter().map(|&x| g.reduce(x)))?;
    let mut r: HashMap<u32, u64> = HashMap::new();
    for x in set.iter() {
        for y in set.iter() {
            *r.entry(g.sub(x, y)).or_insert(0) += 1;
        }
    }
    Ok((r.values().map(|&c| (c as u128).pow(2)).sum(), r.values().map(|&c| (c as u128).pow(3)).sum()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexScanRow {
    pub n: usize,
    pub e2: u128,
    pub e3: u128,
    pub ratio_8936: Option<f64>,
    pub ratio_e3: Option<f64>,
    pub andrews_max: f64,
}

pub fn convex_row(a: &[i64]) -> Result<ConvexScanRow> {
    check_convex(a)?;
    let (e2, e3, max) = integer_energies(a);
    let n = a.len() as f64;
    let l = log2(n);
    Ok(ConvexScanRow {
        n: a.len(),
        e2,
        e3,
        ratio_8936: l.map(|l| e2 as f64 / (n.powf(89.0 / 36.0) * l.sqrt())),
        ratio_e3: l.map(|l| e3 as f64 / (n.powi(3) * l)),
        andrews_max: max as f64 / n.powf(2.0 / 3.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexScan {
    pub rows: Vec<ConvexScanRow>,
    /// `(n, matched)` for rows recomputed in the modular embedding.
    pub validated: Vec<(usize, bool)>,
}

impl ConvexScan {
    pub fn pass(&self) -> bool {
        self.validated.iter().all(|v| v.1)
    }
}

/// One row per `n` in `2..=n_max`; every hundredth row is cross-checked in
/// the modular embedding.
pub fn convex_scan(n_max: usize, generator: ConvexGenerator, exec: Exec) -> Result<ConvexScan> {
    let ns: Vec<usize> = (2..=n_max).collect();
    let rows = map_slice(exec, &ns, |&n| convex_row(&generator.generate(n))).into_iter().collect::<Result<Vec<_>>>()?;
    let sample: Vec<usize> = ns.iter().copied().step_by(100).collect();
    let validated = map_slice(exec, &sample, |&n| {
        let (e2, e3) = embedded_energies(&generator.generate(n))?;
        let row = &rows[n - 2];
        Ok((n, row.e2 == e2 && row.e3 == e3))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(ConvexScan { rows, validated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoublingStatsRow {
    pub n: usize,
    pub shift: i64,
    pub product: usize,
    pub shifted_product: usize,
    pub m: f64,
    pub mult_energy: u128,
    pub shifted_mult_energy: u128,
    pub energy: u128,
    /// `|{x ≠ 0 : (A∘A)(x) >= |A|^{2/3}}|`.
    pub popular_third: usize,
    /// `|{x ≠ 0 : (A∘A)(x) >= |A|^{3/4}}|`.
    pub popular_quarter: usize,
}

fn product_counts(a: &[i64], b: &[i64]) -> HashMap<i128, u64> {
    let mut r = HashMap::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            *r.entry(x as i128 * y as i128).or_insert(0) += 1;
        }
    }
    r
}

/// Product-set and energy statistics for a finite `A ⊆ Z \ {0}` and shift `a`.
pub fn doubling_stats(set: &[i64], shift: i64) -> Result<DoublingStatsRow> {
    let mut a = set.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty set".into()));
    }
    if a.contains(&0) {
        return Err(Error::InvalidArgument("set contains 0".into()));
    }
    let shifted: Vec<i64> = a.iter().map(|&x| x.checked_add(shift).ok_or(Error::Overflow("shifted set"))).collect::<Result<_>>()?;
    let prod = product_counts(&a, &a);
    let mixed = product_counts(&a, &shifted);
    let sq = |m: &HashMap<i128, u64>| m.values().map(|&c| (c as u128).pow(2)).sum::<u128>();
    let diffs: HashMap<i128, u64> = {
        let mut r = HashMap::new();
        for &x in &a {
            for &y in &a {
                *r.entry(x as i128 - y as i128).or_insert(0u64) += 1;
            }
        }
        r
    };
    let n = a.len() as u128;
    // r >= n^{1-ε} ⇔ r^3 >= n^2 (ε = 1/3), r^4 >= n^3 (ε = 1/4)
    let popular = |num: u32, den: u32| diffs.iter().filter(|(&x, &r)| x != 0 && (r as u128).pow(den) >= n.pow(num)).count();
    Ok(DoublingStatsRow {
        n: a.len(),
        shift,
        product: prod.len(),
        shifted_product: mixed.len(),
        m: prod.len() as f64 / a.len() as f64,
        mult_energy: sq(&prod),
        shifted_mult_energy: sq(&mixed),
        energy: diffs.values().map(|&c| (c as u128).pow(2)).sum(),
        popular_third: popular(2, 3),
        popular_quarter: popular(3, 4),
    })
}

/// Parses one integer set per line; blank lines and `#` comments are skipped.
pub fn parse_sets(text: &str) -> Result<Vec<Vec<i64>>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<i64>().map_err(|e| Error::InvalidArgument(format!("bad integer {s:?}: {e}"))))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProgressionRow {
    pub p: u32,
    pub t: u32,
    /// Longest arithmetic progression inside `Γ`.
    pub longest: usize,
    /// Largest `s` with `{1, 2, …, s} ⊆ Γ`.
    pub homogeneous: usize,
    pub sqrt_t: f64,
    pub ratio: f64,
    /// `exp(sqrt(δ^{-1} ln(1/δ) ln p))` for `|Γ| = p^{1-δ}`, no constant.
    pub shape: Option<f64>,
    pub energy: u128,
    pub energy_3: u128,
}

/// Longest progression `{1, 1+d, …}` inside `Γ`; every progression in `Γ`
/// scales into one starting at 1. Returns `(length, difference)`.
pub fn longest_progression(gamma: &MultSubgroup) -> (usize, u32) {
    let p = gamma.p();
    let grp = gamma.field().additive();
    let mut best = (1, 0);
    for d in 1..p {
        let mut len = 1;
        let mut x = grp.add(1, d);
        while len < p as usize && gamma.contains(x) {
            len += 1;
            x = grp.add(x, d);
        }
        if len > best.0 {
            best = (len, d);
        }
    }
    best
}

/// `(P∘P)` from pairs, for sparse `P`.
fn sparse_autocorrelation(set: &GroupSet) -> Vec<u64> {
    let g = set.group();
    let mut r = vec![0u64; g.order()];
    for x in set.iter() {
        for y in set.iter() {
            r[g.sub(y, x) as usize] += 1;
        }
    }
    r
}

pub fn progression_row(gamma: &MultSubgroup) -> ProgressionRow {
    let p = gamma.p();
    let grp = gamma.field().additive();
    let (longest, d) = longest_progression(gamma);
    let homogeneous = (1..p).take_while(|&x| gamma.contains(x)).count();
    let prog = GroupSet::new(grp, (0..longest as u32).map(|i| grp.add(1, grp.reduce(i as i64 * d as i64)))).expect("in range");
    let pp = sparse_autocorrelation(&prog);
    let gg = subgroup_autocorrelation(gamma);
    let ek = |k: u32| pp.iter().zip(&gg).map(|(&a, &b)| a as u128 * (b as u128).pow(k - 1)).sum::<u128>();
    let t = gamma.order() as f64;
    let delta = 1.0 - t.ln() / (p as f64).ln();
    ProgressionRow {
        p,
        t: gamma.order(),
        longest,
        homogeneous,
        sqrt_t: t.sqrt(),
        ratio: longest as f64 / t.sqrt(),
        shape: (delta > 0.0 && delta < 1.0).then(|| ((1.0 / delta) * (1.0 / delta).ln() * (p as f64).ln()).sqrt().exp()),
        energy: ek(2),
        energy_3: ek(3),
    }
}

pub fn progression_scan(p_max: u32, exec: Exec) -> Result<Vec<ProgressionRow>> {
    let jobs = subgroup_jobs(p_max, 1, u32::MAX)?;
    Ok(map_slice(exec, &jobs, |(f, t)| progression_row(&MultSubgroup::new(Arc::clone(f), *t).expect("t divides p - 1"))))
}

/// Three-set convolution rows: `Q = Q_1 = Q_2 = Γ`, then one random triple of
/// invariant sets per subgroup.
pub fn stepanov_table(p_max: u32, seed: u64, exec: Exec) -> Result<Vec<field::StepanovRow>> {
    let jobs = subgroup_jobs(p_max, 1, u32::MAX)?;
    let rows = map_range(exec, jobs.len(), |i| -> Result<Vec<field::StepanovRow>> {
        let (f, t) = &jobs[i];
        let gamma = MultSubgroup::new(Arc::clone(f), *t)?;
        let g = gamma.as_set();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((f.p() as u64) << 32 | *t as u64));
        let mut draw = || loop {
            let s = field::random_invariant_set(&gamma, &mut rng, 0.5);
            if !s.is_empty() {
                return s;
            }
        };
        let (q, q1, q2) = (draw(), draw(), draw());
        Ok(vec![field::stepanov_row(&gamma, g, g, g)?, field::stepanov_row(&gamma, &q, &q1, &q2)?])
    });
    Ok(rows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

/// Writes rows as CSV with a header, in field order.
pub fn write_csv<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
