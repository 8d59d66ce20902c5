//! Additive energies and the weighted Katz–Koester family of inequalities.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::check::{int, IneqCheck};
use crate::error::{Error, Result};
use crate::func::{FnValues, GroupFn, TupleFn};
use crate::group::{
    a_b_s, a_star_s, sumset, tuple_energy, tuple_sumset_with_diagonal, CyclicGroup, GroupSet, Sign, TupleSet, DEFAULT_TUPLE_CAP,
};
use crate::tol;
use crate::transform::{correlate, gen_convolution, kfold_convolve};

/// An energy: an exact count, or a real number for fractional exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EnergyValue {
    Exact(u128),
    Real(f64),
}

impl EnergyValue {
    pub fn as_f64(self) -> f64 {
        match self {
            EnergyValue::Exact(v) => v as f64,
            EnergyValue::Real(v) => v,
        }
    }

    pub fn exact(self) -> Option<u128> {
        match self {
            EnergyValue::Exact(v) => Some(v),
            EnergyValue::Real(_) => None,
        }
    }
}

/// `(A ∘ B)(x) = |{(a, b) : b - a = x}|`, as counts.
pub fn corr_counts(a: &GroupSet, b: &GroupSet) -> Result<Vec<u64>> {
    let c = correlate(&a.indicator(), &b.indicator())?;
    Ok(c.ints().expect("indicators are integral").iter().map(|&v| v as u64).collect())
}

fn sq(x: u64) -> u128 {
    x as u128 * x as u128
}

/// `E(A, B) = |{a_1 + b_1 = a_2 + b_2}|`.
///
/// Computed as `Σ (A∘B)^2` and cross-checked against `Σ (A∘A)(B∘B)`.
pub fn energy(a: &GroupSet, b: &GroupSet) -> Result<u128> {
    let ab = corr_counts(a, b)?;
    let direct: u128 = ab.iter().map(|&v| sq(v)).sum();
    let (aa, bb) = (corr_counts(a, a)?, corr_counts(b, b)?);
    let mixed: u128 = aa.iter().zip(&bb).map(|(&x, &y)| x as u128 * y as u128).sum();
    assert_eq!(direct, mixed, "two forms of E(A,B) disagree");
    Ok(direct)
}

/// `E_k(A, B) = Σ_x (A∘A)(x) (B∘B)(x)^{k-1}` for integer `k >= 1`.
pub fn energy_k(a: &GroupSet, b: &GroupSet, k: u32) -> Result<u128> {
    if k == 0 {
        return Err(Error::InvalidArgument("E_k needs k >= 1".into()));
    }
    let (aa, bb) = (corr_counts(a, a)?, corr_counts(b, b)?);
    aa.iter()
        .zip(&bb)
        .try_fold(0u128, |acc, (&x, &y)| {
            let term = (y as u128).checked_pow(k - 1)?.checked_mul(x as u128)?;
            acc.checked_add(term)
        })
        .ok_or(Error::Overflow("E_k"))
}

/// `E_k(A, B)` for real `k >= 1`.
pub fn energy_k_real(a: &GroupSet, b: &GroupSet, k: f64) -> Result<f64> {
    if k.is_nan() || k < 1.0 {
        return Err(Error::InvalidArgument(format!("E_k needs k >= 1, got {k}")));
    }
    let (aa, bb) = (corr_counts(a, a)?, corr_counts(b, b)?);
    Ok(aa.iter().zip(&bb).filter(|(&x, _)| x > 0).map(|(&x, &y)| x as f64 * (y as f64).powf(k - 1.0)).sum())
}

/// `E_k(A, B)` either way.
pub fn energy_value(a: &GroupSet, b: &GroupSet, k: f64) -> Result<EnergyValue> {
    if k.fract() == 0.0 && k >= 1.0 && k <= u32::MAX as f64 {
        energy_k(a, b, k as u32).map(EnergyValue::Exact)
    } else {
        energy_k_real(a, b, k).map(EnergyValue::Real)
    }
}

/// `E_k(A, B) = Σ_{s ∈ Gr^{k-1}} |A ∩ (B - s_1) ∩ … ∩ (B - s_{k-1})|^2`.
pub fn energy_k_by_shifts(a: &GroupSet, b: &GroupSet, k: u32) -> Result<u128> {
    if k == 0 {
        return Err(Error::InvalidArgument("E_k needs k >= 1".into()));
    }
    let g = a.group();
    let arity = (k - 1) as usize;
    let size = g.tuple_space(arity, DEFAULT_TUPLE_CAP)?;
    let mut total = 0u128;
    for i in 0..size as u64 {
        total += sq(a_b_s(b, a, &g.decode(i, arity))?.len() as u64);
    }
    Ok(total)
}

/// `T_k(A) = Σ_x (A *_k A)(x)^2`, the number of solutions of
/// `a_1 + … + a_k = a'_1 + … + a'_k`.
pub fn t_k(a: &GroupSet, k: usize) -> Result<u128> {
    let c = kfold_convolve(&a.indicator(), k)?;
    Ok(c.ints().expect("integral").iter().map(|&v| sq(v as u64)).sum())
}

/// `σ_k(A) = (A *_k A)(0)`.
pub fn sigma_k(a: &GroupSet, k: usize) -> Result<u128> {
    let c = kfold_convolve(&a.indicator(), k)?;
    Ok(c.int_at(0).expect("integral") as u128)
}

/// `|A ± A^B_x|`-style sizes: `|A^l ± Δ_l(C)|`.
pub fn diagonal_sumset_size(a: &GroupSet, c: &GroupSet, l: usize, sign: Sign) -> Result<usize> {
    if l == 1 {
        return Ok(sumset(a, c, sign)?.len());
    }
    Ok(tuple_sumset_with_diagonal(&vec![a.clone(); l], c, sign)?.len())
}

/// Weight profile `w(x) = |A^B_x| = C_{k+1}(B, A, …, A)(x)` over `Gr^k`.
pub fn weight_profile(a: &GroupSet, b: &GroupSet, k: usize) -> Result<TupleFn> {
    let mut fs = vec![b.indicator()];
    fs.extend(std::iter::repeat_n(a.indicator(), k));
    gen_convolution(&fs)
}

/// `|A(x)|` for every `x` in `Z/N` where `A_x = A ∩ (A - x)`.
fn shift_sizes(a: &GroupSet) -> Result<Vec<u64>> {
    corr_counts(a, a)
}

fn shifted(a: &GroupSet, x: u32) -> Result<GroupSet> {
    a_b_s(a, a, &[x])
}

/// `|(A ± A) ∩ (A ± A - x)| >= |A ± A_x|` for every `x` with `A_x ≠ ∅`.
pub fn check_katz_koester(a: &GroupSet, sign: Sign) -> Result<Vec<IneqCheck>> {
    let g = a.group();
    let base = sumset(a, a, sign)?;
    let mut out = Vec::new();
    for x in g.elements() {
        let ax = shifted(a, x)?;
        if ax.is_empty() {
            continue;
        }
        let moved = base.translate(g.neg(x));
        let lhs = base.intersect(&moved)?.len();
        let rhs = sumset(a, &ax, sign)?.len();
        out.push(IneqCheck::ge_int(&format!("katz_koester{}", sign.symbol()), "katz-koester", lhs as i128, rhs as i128));
    }
    Ok(out)
}

/// `Σ_x |A_x|^2 / |A ± A_x| <= |A|^{-2} Σ_x |A_x|^3`, exact, empty `A_x` omitted.
pub fn check_heart(a: &GroupSet, sign: Sign) -> Result<IneqCheck> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("heart inequality needs a nonempty set".into()));
    }
    let sizes = shift_sizes(a)?;
    let mut lhs = BigRational::zero();
    let mut cubes = 0u128;
    for x in a.group().elements() {
        let s = sizes[x as usize];
        if s == 0 {
            continue;
        }
        let plus = sumset(a, &shifted(a, x)?, sign)?.len();
        lhs += BigRational::new(BigInt::from(sq(s)), BigInt::from(plus));
        cubes += s as u128 * sq(s);
    }
    let rhs = BigRational::new(BigInt::from(cubes), BigInt::from(sq(a.len() as u64)));
    Ok(IneqCheck::le_exact(&format!("heart{}", sign.symbol()), "heart", lhs, rhs))
}

/// `Σ_{x,y,z ∈ A} |A_{x-y}| |A_{x-z}| |A_{y-z}| >= |A|^{-3} (Σ_x |A_x|^2)^3`, exact.
pub fn check_heart_2(a: &GroupSet) -> Result<IneqCheck> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("heart inequality needs a nonempty set".into()));
    }
    let g = a.group();
    let sizes = shift_sizes(a)?;
    let w = |d: u32| sizes[d as usize] as u128;
    let mut lhs = 0u128;
    for x in a.iter() {
        for y in a.iter() {
            let wxy = w(g.sub(x, y));
            for z in a.iter() {
                lhs += wxy * w(g.sub(x, z)) * w(g.sub(y, z));
            }
        }
    }
    let e: u128 = sizes.iter().map(|&s| sq(s)).sum();
    let n = a.len() as u128;
    let rhs = BigRational::new(BigInt::from(e).pow(3), BigInt::from(n * n * n));
    Ok(IneqCheck::ge_exact("heart_2", "heart-triangles", int(lhs as i128), rhs))
}

/// A weight on `Gr^k` for the weighted inequality.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    /// Exact integer or complex table.
    Table(TupleFn),
    /// Exact rationals indexed by the encoded tuple.
    Rational { arity: usize, values: Vec<BigRational> },
}

impl Weight {
    pub fn arity(&self) -> usize {
        match self {
            Weight::Table(t) => t.arity(),
            Weight::Rational { arity, .. } => *arity,
        }
    }
}

/// Everything the weighted inequality needs about `(A, B, k, l, ±)`.
#[derive(Debug, Clone)]
pub struct WeightData {
    pub group: CyclicGroup,
    pub k: usize,
    pub l: usize,
    pub a_len: usize,
    /// `|A^B_x|` for encoded `x ∈ Gr^k`.
    pub profile: Vec<u64>,
    /// `|A^l ± Δ_l(A^B_x)|` for encoded `x ∈ Gr^k`.
    pub spread: Vec<u64>,
    /// `E_{k+l+1}(B, A)`.
    pub energy: u128,
}

impl WeightData {
    pub fn new(a: &GroupSet, b: &GroupSet, k: usize, l: usize, sign: Sign) -> Result<Self> {
        a.group().same_as(b.group())?;
        if !(1..=2).contains(&k) || !(1..=2).contains(&l) {
            return Err(Error::InvalidArgument(format!("weighted inequality supports k, l in 1..=2, got k={k}, l={l}")));
        }
        let g = a.group();
        let size = g.tuple_space(k, DEFAULT_TUPLE_CAP)?;
        g.tuple_space(l, DEFAULT_TUPLE_CAP)?;
        let mut profile = Vec::with_capacity(size);
        let mut spread = Vec::with_capacity(size);
        for i in 0..size as u64 {
            let c = a_b_s(a, b, &g.decode(i, k))?;
            profile.push(c.len() as u64);
            spread.push(if c.is_empty() { 0 } else { diagonal_sumset_size(a, &c, l, sign)? as u64 });
        }
        let energy = energy_k(b, a, (k + l + 1) as u32)?;
        Ok(WeightData { group: g, k, l, a_len: a.len(), profile, spread, energy })
    }
}

/// `|A|^{2l} |Σ_x q(x) w(x)|^2 <= E_{k+l+1}(B, A) Σ_x |A^l ± Δ_l(A^B_x)| |q(x)|^2`
/// with `w(x) = |A^B_x|`.
pub fn check_weight_inequality(data: &WeightData, q: &Weight, name: &str) -> Result<IneqCheck> {
    if q.arity() != data.k {
        return Err(Error::InvalidArgument(format!("weight of arity {} for k = {}", q.arity(), data.k)));
    }
    let a_pow = BigInt::from(data.a_len).pow(2 * data.l as u32);
    let identity = "weighted-katz-koester";
    match q {
        Weight::Rational { values, .. } => {
            let mut s = BigRational::zero();
            let mut r = BigRational::zero();
            for (i, v) in values.iter().enumerate() {
                s += v * BigInt::from(data.profile[i]);
                r += v * v * BigInt::from(data.spread[i]);
            }
            let lhs = &s * &s * a_pow;
            let rhs = r * BigInt::from(data.energy);
            Ok(IneqCheck::le_exact(name, identity, lhs, rhs))
        }
        Weight::Table(t) => match t.values() {
            FnValues::Int(v) => {
                let values: Vec<BigRational> = v.iter().map(|&x| int(x as i128)).collect();
                check_weight_inequality(data, &Weight::Rational { arity: data.k, values }, name)
            }
            FnValues::Complex(v) => {
                let s: Complex64 = v.iter().zip(&data.profile).map(|(z, &w)| z * w as f64).sum();
                let r: f64 = v.iter().zip(&data.spread).map(|(z, &m)| z.norm_sqr() * m as f64).sum();
                let lhs = (data.a_len as f64).powi(2 * data.l as i32) * s.norm_sqr();
                let rhs = data.energy as f64 * r;
                Ok(IneqCheck::le(name, identity, lhs, rhs, tol::WEIGHT_REL))
            }
        },
    }
}

/// The weighted inequality at `k = l = 1`, `B = A`, `q = A ∘ A`.
pub fn check_energy_weight_1(a: &GroupSet, sign: Sign) -> Result<IneqCheck> {
    let data = WeightData::new(a, a, 1, 1, sign)?;
    let q = GroupFn::from_ints(a.group(), data.profile.iter().map(|&v| v as i64).collect())?;
    check_weight_inequality(&data, &Weight::Table(q.into()), &format!("energy_weight_1{}", sign.symbol()))
}

/// The weighted inequality at `k = l = 1`, `B = A`, `q(x) = (A∘A)(x) / |A ± A_x|`.
pub fn check_energy_weight_2(a: &GroupSet, sign: Sign) -> Result<IneqCheck> {
    let data = WeightData::new(a, a, 1, 1, sign)?;
    let values = data
        .profile
        .iter()
        .zip(&data.spread)
        .map(|(&w, &m)| if w == 0 { BigRational::zero() } else { BigRational::new(BigInt::from(w), BigInt::from(m)) })
        .collect();
    check_weight_inequality(&data, &Weight::Rational { arity: 1, values }, &format!("energy_weight_2{}", sign.symbol()))
}

/// Threshold corollaries at `k = l = 1` and the `(α, p)` power-mean bounds.
pub fn check_level_corollaries(a: &GroupSet, sign: Sign) -> Result<Vec<IneqCheck>> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("level corollaries need a nonempty set".into()));
    }
    let data = WeightData::new(a, a, 1, 1, sign)?;
    let n = a.len() as u128;
    let e: u128 = data.profile.iter().map(|&w| sq(w)).sum();
    let e3 = data.energy;
    let s = sign.symbol();
    let mut out = Vec::new();

    // Σ_{x : 2 E_3 |A±A_x| >= |A|^2 E} |A_x|^2 >= E / 2
    let popular: u128 = data.profile.iter().zip(&data.spread).filter(|(_, &m)| 2 * e3 * m as u128 >= n * n * e).map(|(&w, _)| sq(w)).sum();
    out.push(IneqCheck::ge_exact(
        &format!("level_energy{s}"),
        "level-set-energy",
        int(popular as i128),
        BigRational::new(BigInt::from(e), BigInt::from(2)),
    ));

    // Σ_{x : 2 E_3 |A±A_x| >= |A_x| |A|^4} |A_x| >= |A|^2 / 2
    let popular: u128 =
        data.profile.iter().zip(&data.spread).filter(|(&w, &m)| 2 * e3 * m as u128 >= w as u128 * n.pow(4)).map(|(&w, _)| w as u128).sum();
    out.push(IneqCheck::ge_exact(
        &format!("level_size{s}"),
        "level-set-size",
        int(popular as i128),
        BigRational::new(BigInt::from(n * n), BigInt::from(2)),
    ));

    for (alpha, p) in [(2.0f64, 2.0f64), (3.0, 2.0), (2.0, 3.0)] {
        let mut lhs = 0.0;
        let mut inner = 0.0;
        for (&w, &m) in data.profile.iter().zip(&data.spread) {
            if w == 0 {
                continue;
            }
            let (w, m) = (w as f64, m as f64);
            lhs += w.powf(alpha);
            inner += m.powf(1.0 / (p - 1.0)) * w.powf((alpha * p - 2.0) / (p - 1.0));
        }
        let rhs = (e3 as f64 / (n * n) as f64).powf(1.0 / p) * inner.powf((p - 1.0) / p);
        out.push(IneqCheck::le(&format!("power_mean_a{alpha}_p{p}{s}"), "power-mean-bound", lhs, rhs, tol::POWER_REL));
    }
    Ok(out)
}

/// For every `x ∈ Gr^k`:
/// `Σ_{s ∈ A^l ∓ Δ_l(B)} (A^k - Δ_k(S_s))(x) = |A^l ∓ Δ_l(A^B_x)|`,
/// with `S_s = A^B_s` for `-` and `S_s = B ∩ (s_1 - A) ∩ …` for `+`.
pub fn check_membership_identity(a: &GroupSet, b: &GroupSet, k: usize, l: usize, sign: Sign) -> Result<IneqCheck> {
    a.group().same_as(b.group())?;
    let g = a.group();
    let size_k = g.tuple_space(k, DEFAULT_TUPLE_CAP)?;
    let outer = tuple_sumset_with_diagonal(&vec![a.clone(); l], b, sign)?;
    let mut counts = vec![0i128; size_k];
    for s in outer.tuples() {
        let c = match sign {
            Sign::Minus => a_b_s(a, b, &s)?,
            Sign::Plus => a_star_s(a, b, &s)?,
        };
        let inner = tuple_sumset_with_diagonal(&vec![a.clone(); k], &c, Sign::Minus)?;
        for &x in inner.indices() {
            counts[x as usize] += 1;
        }
    }
    let mut checks = Vec::with_capacity(size_k);
    for (i, &lhs) in counts.iter().enumerate() {
        let c = a_b_s(a, b, &g.decode(i as u64, k))?;
        let rhs = if c.is_empty() { 0 } else { diagonal_sumset_size(a, &c, l, sign)? };
        checks.push(IneqCheck::eq_int("m", "shift-membership-count", lhs, rhs as i128));
    }
    Ok(IneqCheck::worst_of(&format!("membership_k{k}_l{l}{}", sign.symbol()), checks).expect("nonempty tuple space"))
}

/// `Σ_{s ∈ Gr^l} E(A^k, Δ_k(A^B_s)) = E_{k+l+1}(B, A)`.
pub fn check_shift_energy_lemma(a: &GroupSet, b: &GroupSet, k: usize, l: usize) -> Result<IneqCheck> {
    let g = a.group();
    let size_l = g.tuple_space(l, DEFAULT_TUPLE_CAP)?;
    let power = TupleSet::power(a, k)?;
    let mut lhs = 0u128;
    for i in 0..size_l as u64 {
        let c = a_b_s(a, b, &g.decode(i, l))?;
        if !c.is_empty() {
            lhs += tuple_energy(&power, &TupleSet::diagonal(&c, k)?)?;
        }
    }
    let rhs = energy_k(b, a, (k + l + 1) as u32)?;
    Ok(IneqCheck::eq_int(&format!("shift_energy_k{k}_l{l}"), "shift-energy-sum", lhs as i128, rhs as i128))
}

/// Additive subgroup `dZ/N` of `Z/N`, for `d | N`.
pub fn additive_subgroup(group: CyclicGroup, step: u32) -> Result<GroupSet> {
    if step == 0 || !group.modulus().is_multiple_of(step) {
        return Err(Error::NotDivisor { t: step as u64, order: group.modulus() as u64 });
    }
    GroupSet::new(group, (0..group.modulus()).step_by(step as usize))
}
