//! Prime fields, multiplicative subgroups, their characters and the
//! character-side formulas for Γ-invariant kernels.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::check::IneqCheck;
use crate::energy::{energy_k, EnergyValue};
use crate::error::{Error, Result};
use crate::func::{FnValues, GroupFn};
use crate::group::{CyclicGroup, GroupSet};
use crate::spectral::{eigendecompose, spectrum_distance, SpectralOperator};
use crate::tol;
use crate::transform::{correlate, dft, gen_convolution};

/// Largest prime accepted by [`PrimeField::new`].
pub const MAX_PRIME: u32 = 1_000_000;

/// Cap on `t^{2k-1}` for brute-force multiplicative energies.
pub const MULT_ENERGY_CAP: u128 = 10_000_000;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn primes_up_to(n: u32) -> Vec<u32> {
    (2..=n).filter(|&p| is_prime(p as u64)).collect()
}

/// `F_p` with a primitive root and a full discrete-log table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
    root: u32,
    /// `powers[i] = root^i` for `0 <= i < p - 1`.
    powers: Vec<u32>,
    /// `dlog[x]` with `root^dlog[x] = x`; `dlog[0]` is unused.
    dlog: Vec<u32>,
}

impl PrimeField {
    /// The field with its smallest primitive root.
    pub fn new(p: u32) -> Result<Self> {
        Self::check_prime(p)?;
        if p == 2 {
            return Self::with_root(2, 1);
        }
        let factors = prime_factors(p as u64 - 1);
        let root = (2..p)
            .find(|&g| factors.iter().all(|&q| pow_mod(g as u64, (p as u64 - 1) / q, p as u64) != 1))
            .expect("every prime has a primitive root");
        Self::with_root(p, root)
    }

    /// The field with a given primitive root.
    pub fn with_root(p: u32, root: u32) -> Result<Self> {
        Self::check_prime(p)?;
        let order = p - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut dlog = vec![0u32; p as usize];
        let mut x = 1u64;
        for i in 0..order {
            if i > 0 && x == 1 {
                return Err(Error::InvalidArgument(format!("{root} is not a primitive root mod {p}")));
            }
            powers.push(x as u32);
            dlog[x as usize] = i;
            x = x * root as u64 % p as u64;
        }
        if x != 1 || root.is_multiple_of(p) {
            return Err(Error::InvalidArgument(format!("{root} is not a primitive root mod {p}")));
        }
        Ok(PrimeField { p, root, powers, dlog })
    }

    fn check_prime(p: u32) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if p > MAX_PRIME {
            return Err(Error::InvalidArgument(format!("prime {p} above {MAX_PRIME}")));
        }
        Ok(())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    /// The additive group `Z/p`.
    pub fn additive(&self) -> CyclicGroup {
        CyclicGroup::new(self.p).expect("p >= 2")
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    pub fn pow_root(&self, e: u64) -> u32 {
        self.powers[(e % (self.p as u64 - 1)) as usize]
    }

    /// Discrete log of a nonzero element.
    pub fn dlog(&self, x: u32) -> Option<u32> {
        (x != 0 && x < self.p).then(|| self.dlog[x as usize])
    }

    pub fn inv(&self, x: u32) -> Option<u32> {
        let l = self.dlog(x)?;
        Some(self.pow_root(((self.p - 1 - l) % (self.p - 1)) as u64))
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `e(x) = exp(2πix)`.
fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x)
}

/// The subgroup `Γ = {g^{nl} : 0 <= l < t}` of order `t = (p - 1) / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultSubgroup {
    field: Arc<PrimeField>,
    t: u32,
    n: u32,
    /// `elements[l] = g^{nl}`.
    elements: Vec<u32>,
    set: GroupSet,
}

impl MultSubgroup {
    pub fn new(field: Arc<PrimeField>, t: u32) -> Result<Self> {
        let order = field.p - 1;
        if t == 0 || !order.is_multiple_of(t) {
            return Err(Error::NotDivisor { t: t as u64, order: order as u64 });
        }
        let n = order / t;
        let elements: Vec<u32> = (0..t).map(|l| field.pow_root(n as u64 * l as u64)).collect();
        let set = GroupSet::new(field.additive(), elements.iter().copied())?;
        Ok(MultSubgroup { field, t, n, elements, set })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn shared_field(&self) -> Arc<PrimeField> {
        Arc::clone(&self.field)
    }

    pub fn p(&self) -> u32 {
        self.field.p
    }

    pub fn order(&self) -> u32 {
        self.t
    }

    pub fn index(&self) -> u32 {
        self.n
    }

    /// Elements in exponent order `g^0, g^n, g^{2n}, …`.
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    /// Elements as a subset of the additive group.
    pub fn as_set(&self) -> &GroupSet {
        &self.set
    }

    /// `l` with `x = g^{nl}`, if `x ∈ Γ`.
    pub fn exponent(&self, x: u32) -> Option<u32> {
        let d = self.field.dlog(x)?;
        (d % self.n == 0).then_some(d / self.n)
    }

    /// Index of the coset `xΓ` among `g^0 Γ, …, g^{n-1} Γ`.
    pub fn coset(&self, x: u32) -> Option<u32> {
        self.field.dlog(x).map(|d| d % self.n)
    }

    pub fn contains(&self, x: u32) -> bool {
        self.exponent(x).is_some()
    }

    /// `ξΓ` as a set.
    pub fn coset_set(&self, xi: u32) -> Result<GroupSet> {
        if xi.is_multiple_of(self.p()) {
            return Err(Error::InvalidArgument("coset representative must be nonzero".into()));
        }
        GroupSet::new(self.field.additive(), self.elements.iter().map(|&g| self.field.mul(g, xi)))
    }

    /// `χ_α(x)`: `t^{-1/2} e(αl/t)` at `x = g^{nl}`, zero off `Γ`.
    pub fn character(&self, alpha: u32, x: u32) -> Complex64 {
        match self.exponent(x) {
            Some(l) => e((alpha as u64 * l as u64 % self.t as u64) as f64 / self.t as f64) / (self.t as f64).sqrt(),
            None => Complex64::zero(),
        }
    }

    pub fn character_fn(&self, alpha: u32) -> Character {
        Character { t: self.t, alpha: alpha % self.t }
    }

    /// Dense `χ_α` on `F_p`.
    pub fn character_values(&self, alpha: u32) -> Vec<Complex64> {
        (0..self.p()).map(|x| self.character(alpha, x)).collect()
    }

    pub fn is_invariant_set(&self, s: &GroupSet) -> bool {
        s.iter().all(|x| self.elements.iter().all(|&g| s.contains(self.field.mul(g, x))))
    }

    /// Smallest `Γ`-invariant superset.
    pub fn orbit_closure(&self, s: &GroupSet) -> GroupSet {
        GroupSet::new(self.field.additive(), s.iter().flat_map(|x| self.elements.iter().map(move |&g| self.field.mul(g, x))))
            .expect("residues are in range")
    }

    pub fn is_invariant_fn(&self, f: &GroupFn) -> bool {
        f.group().modulus() == self.p() && (1..self.p()).all(|x| self.elements.iter().all(|&g| f.at(self.field.mul(g, x)) == f.at(x)))
    }

    fn require_invariant(&self, f: &GroupFn) -> Result<()> {
        if f.group().modulus() != self.p() {
            return Err(Error::ModulusMismatch(f.group().modulus(), self.p()));
        }
        if !self.is_invariant_fn(f) {
            return Err(Error::NotInvariant);
        }
        Ok(())
    }
}

/// `χ_α` as a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    pub t: u32,
    pub alpha: u32,
}

/// A `Γ`-invariant function stored as its value at 0 and one value per coset.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantFn {
    pub at_zero: i64,
    /// `cosets[c]` is the value on `g^c Γ`.
    pub cosets: Vec<i64>,
}

impl InvariantFn {
    pub fn to_group_fn(&self, gamma: &MultSubgroup) -> Result<GroupFn> {
        if self.cosets.len() != gamma.index() as usize {
            return Err(Error::InvalidArgument(format!("{} coset values for index {}", self.cosets.len(), gamma.index())));
        }
        Ok(GroupFn::from_fn(gamma.field.additive(), |x| match gamma.coset(x) {
            None => self.at_zero,
            Some(c) => self.cosets[c as usize],
        }))
    }

    pub fn from_group_fn(gamma: &MultSubgroup, f: &GroupFn) -> Result<Self> {
        gamma.require_invariant(f)?;
        let v = f.ints().ok_or_else(|| Error::InvalidArgument("integer function expected".into()))?;
        Ok(InvariantFn { at_zero: v[0], cosets: (0..gamma.index()).map(|c| v[gamma.field.pow_root(c as u64) as usize]).collect() })
    }

    /// Uniform random values in `lo..=hi`, optionally even (`f(-x) = f(x)`).
    pub fn random(gamma: &MultSubgroup, rng: &mut impl Rng, lo: i64, hi: i64, even: bool) -> Self {
        let n = gamma.index() as usize;
        let mut cosets: Vec<i64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
        if even && gamma.p() > 2 {
            // -1 = g^{(p-1)/2} sits in coset ((p-1)/2) mod n
            let shift = ((gamma.p() - 1) / 2 % gamma.index()) as usize;
            for c in 0..n {
                let d = (c + shift) % n;
                if d > c {
                    cosets[d] = cosets[c];
                }
            }
        }
        InvariantFn { at_zero: rng.random_range(lo..=hi), cosets }
    }
}

/// Eigenvalues `μ_α(g)` of `g(x - y)` on `Γ`, one per character.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuTable {
    pub t: u32,
    pub values: Vec<Complex64>,
}

impl MuTable {
    pub fn at(&self, alpha: i64) -> Complex64 {
        self.values[alpha.rem_euclid(self.t as i64) as usize]
    }
}

/// `μ_α(g) = |Γ|^{1/2} Σ_x g(x) χ_α(1 - x) = Σ_l g(1 - g^{nl}) e(αl/t)`.
pub fn mu_alpha_direct(gamma: &MultSubgroup, g: &GroupFn) -> Result<MuTable> {
    gamma.require_invariant(g)?;
    let p = gamma.p();
    let sqrt_t = (gamma.order() as f64).sqrt();
    let values = (0..gamma.order())
        .map(|alpha| (0..p).map(|x| g.at(x) * gamma.character(alpha, (1 + p - x) % p)).sum::<Complex64>() * sqrt_t)
        .collect();
    Ok(MuTable { t: gamma.order(), values })
}

/// Normalized cyclic convolution on `Z/t`: `(1/t) Σ_β a(β) b(α - β)`.
pub fn mu_convolve(a: &MuTable, b: &MuTable) -> MuTable {
    let t = a.t as i64;
    let values = (0..t).map(|al| (0..t).map(|be| a.at(be) * b.at(al - be)).sum::<Complex64>() / t as f64).collect();
    MuTable { t: a.t, values }
}

fn complex_matrix_on(set: &[u32], g: &GroupFn, grp: CyclicGroup) -> Vec<Complex64> {
    set.iter().flat_map(|&x| set.iter().map(move |&y| g.at(grp.sub(x, y)))).collect()
}

fn max_residual(m: &[Complex64], v: &[Complex64], mu: Complex64) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let mv: Complex64 = (0..n).map(|j| m[i * n + j] * v[j]).sum();
            (mv - mu * v[i]).norm()
        })
        .fold(0.0, f64::max)
}

/// `‖M χ_α - μ_α χ_α‖_∞` over all `α`, where `M = g(x - y)` on `ξΓ` and
/// `χ_α` is carried to the coset by `χ_α(ξ^{-1} x)`.
pub fn check_eigenbasis_on_coset(gamma: &MultSubgroup, g: &GroupFn, xi: u32) -> Result<IneqCheck> {
    gamma.require_invariant(g)?;
    let f = gamma.field();
    let xi_inv = f.inv(xi).ok_or_else(|| Error::InvalidArgument("coset representative must be nonzero".into()))?;
    let coset = gamma.coset_set(xi)?;
    let pts = coset.members();
    let m = complex_matrix_on(pts, g, f.additive());
    // the kernel seen from Γ is x ↦ g(ξx)
    let scaled = GroupFn::from_complex(f.additive(), (0..f.p()).map(|x| g.at(f.mul(xi, x))).collect())?;
    let mu = mu_alpha_direct(gamma, &scaled)?;
    let scale = g.sup_norm().max(1.0) * gamma.order() as f64;
    let mut worst = 0.0f64;
    for alpha in 0..gamma.order() {
        let v: Vec<Complex64> = pts.iter().map(|&x| gamma.character(alpha, f.mul(xi_inv, x))).collect();
        worst = worst.max(max_residual(&m, &v, mu.at(alpha as i64)));
    }
    Ok(IneqCheck::le(&format!("eigenbasis_coset{xi}"), "character-eigenfunctions", worst / scale, tol::SPECTRAL_REL, 0.0))
}

/// Characters are eigenfunctions of `g(x - y)` on `Γ` with eigenvalues `μ_α(g)`.
pub fn check_eigenbasis(gamma: &MultSubgroup, g: &GroupFn) -> Result<IneqCheck> {
    let mut c = check_eigenbasis_on_coset(gamma, g, 1)?;
    c.name = "eigenbasis".into();
    Ok(c)
}

/// For real even invariant `g`: the Jacobi spectrum of the restricted operator
/// equals `{μ_α}` as multisets, and the `μ_α` are real.
pub fn check_spectrum_matches(gamma: &MultSubgroup, g: &GroupFn) -> Result<IneqCheck> {
    let mu = mu_alpha_direct(gamma, g)?;
    let op = SpectralOperator::new(gamma.as_set(), g)?;
    let spec = eigendecompose(&op)?;
    let re: Vec<f64> = mu.values.iter().map(|z| z.re).collect();
    let imag = mu.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let scale = spec.eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let dist = spectrum_distance(&spec.eigenvalues, &re).max(imag);
    Ok(IneqCheck::le("spectrum_vs_characters", "character-eigenvalues", dist / scale, tol::SPECTRAL_REL, 0.0))
}

/// `⟨χ_α, χ_β⟩ = δ_{αβ}` and `χ_α(γx) = t^{1/2} χ_α(γ) χ_α(x)` on `Γ`.
pub fn check_characters(gamma: &MultSubgroup) -> IneqCheck {
    let t = gamma.order();
    let els = gamma.elements();
    let mut worst = 0.0f64;
    for a in 0..t {
        for b in 0..t {
            let ip: Complex64 = els.iter().map(|&x| gamma.character(a, x) * gamma.character(b, x).conj()).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).norm());
        }
        for &x in els {
            for &y in els {
                let lhs = gamma.character(a, gamma.field().mul(x, y));
                let rhs = gamma.character(a, x) * gamma.character(a, y) * (t as f64).sqrt();
                worst = worst.max((lhs - rhs).norm());
            }
        }
    }
    IneqCheck::le("characters", "character-orthonormality", worst, tol::CHARACTER, 0.0)
}

/// `μ_α(ḡh) = t^{-1} Σ_β conj(μ_β(g)) μ_{α+β}(h)` and
/// `μ(g^l) = μ(g) ⊛ … ⊛ μ(g)` (normalized, `l ∈ {2, 3}`).
pub fn check_mu_convolution(gamma: &MultSubgroup, g: &GroupFn, h: &GroupFn) -> Result<Vec<IneqCheck>> {
    let (mg, mh) = (mu_alpha_direct(gamma, g)?, mu_alpha_direct(gamma, h)?);
    let prod = mu_alpha_direct(gamma, &g.conj().mul(h)?)?;
    let t = gamma.order() as i64;
    let scale = mg.values.iter().chain(&mh.values).fold(1.0f64, |m, z| m.max(z.norm())).powi(2);
    let mut worst = 0.0f64;
    for al in 0..t {
        let rhs: Complex64 = (0..t).map(|be| mg.at(be).conj() * mh.at(al + be)).sum::<Complex64>() / t as f64;
        worst = worst.max((prod.at(al) - rhs).norm());
    }
    let mut out = vec![IneqCheck::le("mu_product", "eigenvalue-convolution", worst / scale, tol::SPECTRAL_REL, 0.0)];
    let mut power = g.clone();
    let mut conv = mg.clone();
    for l in 2..=3 {
        power = power.mul(g)?;
        conv = mu_convolve(&conv, &mg);
        let direct = mu_alpha_direct(gamma, &power)?;
        let scale = conv.values.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let diff = direct.values.iter().zip(&conv.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        out.push(IneqCheck::le(&format!("mu_power_{l}"), "eigenvalue-power", diff / scale, tol::SPECTRAL_REL, 0.0));
    }
    Ok(out)
}

fn require_support(gamma: &MultSubgroup, f: &GroupFn) -> Result<()> {
    if f.group().modulus() != gamma.p() {
        return Err(Error::ModulusMismatch(f.group().modulus(), gamma.p()));
    }
    if f.support().iter().any(|x| !gamma.contains(x)) {
        return Err(Error::SupportOutsideSubgroup);
    }
    Ok(())
}

/// `Σ_x |ĥ(x)|^2 |Γ̂(x)|^2`, the common denominator.
fn fourier_energy(hh: &[f64], gh: &[Complex64]) -> f64 {
    hh.iter().zip(gh).map(|(a, b)| a * b.norm_sqr()).sum()
}

/// `|û(λ)|^2 <= |Γ|^2 Σ|ĥ|^2 |û(· + λ)|^2 / Σ|ĥ|^2 |Γ̂|^2` for each `h`,
/// with equality at `h ≡ 1`, for `u` supported on `Γ`.
pub fn check_exact_fourier(gamma: &MultSubgroup, u: &GroupFn, lambda: u32, hs: &[GroupFn]) -> Result<Vec<IneqCheck>> {
    require_support(gamma, u)?;
    let p = gamma.p() as usize;
    let t = gamma.order() as f64;
    let uh = dft(u).values;
    let gh = dft(&gamma.as_set().indicator()).values;
    let lhs = uh[lambda as usize % p].norm_sqr();
    let mut out = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        gamma.require_invariant(h)?;
        let hh: Vec<f64> = dft(h).values.iter().map(|z| z.norm_sqr()).collect();
        let den = fourier_energy(&hh, &gh);
        if den <= 0.0 {
            return Err(Error::InvalidArgument(format!("zero denominator for weight {i}")));
        }
        let num: f64 = (0..p).map(|x| hh[x] * uh[(x + lambda as usize) % p].norm_sqr()).sum();
        let rhs = t * t * num / den;
        let constant = h.to_complex().windows(2).all(|w| w[0] == w[1]);
        out.push(if constant {
            IneqCheck::eq(&format!("exact_fourier_h{i}"), "exact-fourier-formula", lhs, rhs, tol::SPECTRAL_REL)
        } else {
            IneqCheck::le(&format!("exact_fourier_h{i}"), "exact-fourier-formula", lhs, rhs, tol::SPECTRAL_REL)
        });
    }
    Ok(out)
}

/// `Σ_{x,y ∈ Γ} C_3(v, u, ū)(x, y) <= |Γ|^2 E(h, Γ)^{-1} Σ_{x,y ∈ Γ} (h ∘ h̄)(x - y) C_3(v, u, ū)(x, y)`
/// with `E(h, Γ) = Σ (h ∘ h̄)(Γ ∘ Γ)`, equality at `h ≡ 1`.
pub fn check_exact_fourier_c3(gamma: &MultSubgroup, u: &GroupFn, v: &GroupFn, hs: &[GroupFn]) -> Result<Vec<IneqCheck>> {
    let grp = gamma.field().additive();
    let table = gen_convolution(&[v.clone(), u.clone(), u.conj()])?;
    let els = gamma.as_set().members();
    let t = gamma.order() as f64;
    let lhs: Complex64 = els.iter().flat_map(|&x| els.iter().map(move |&y| (x, y))).map(|(x, y)| table.at(&[x, y])).sum();
    let gg = correlate(&gamma.as_set().indicator(), &gamma.as_set().indicator())?;
    let mut out = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        gamma.require_invariant(h)?;
        let psi = correlate(h, &h.conj())?;
        let e_h: Complex64 = (0..gamma.p()).map(|x| psi.at(x) * gg.at(x)).sum();
        if e_h.norm() == 0.0 {
            return Err(Error::InvalidArgument(format!("zero denominator for weight {i}")));
        }
        let weighted: Complex64 =
            els.iter().flat_map(|&x| els.iter().map(move |&y| (x, y))).map(|(x, y)| psi.at(grp.sub(x, y)) * table.at(&[x, y])).sum();
        let rhs = (weighted * t * t / e_h).re;
        let constant = h.to_complex().windows(2).all(|w| w[0] == w[1]);
        out.push(if constant {
            IneqCheck::eq(&format!("exact_fourier_c3_h{i}"), "exact-fourier-formula-triple", lhs.re, rhs, tol::SPECTRAL_REL)
        } else {
            IneqCheck::le(&format!("exact_fourier_c3_h{i}"), "exact-fourier-formula-triple", lhs.re, rhs, tol::SPECTRAL_REL)
        });
    }
    Ok(out)
}

/// `Σ ψ (u ∘ ū) >= |Γ|^{-2} Σ ψ (Γ∘Γ) |Σ_{Γ} u|^2` for `ψ = h ∘ h̄` and `u`
/// supported on `Γ`.
pub fn check_connected(gamma: &MultSubgroup, h: &GroupFn, u: &GroupFn) -> Result<IneqCheck> {
    require_support(gamma, u)?;
    gamma.require_invariant(h)?;
    let psi = correlate(h, &h.conj())?;
    let uu = correlate(u, &u.conj())?;
    let gg = correlate(&gamma.as_set().indicator(), &gamma.as_set().indicator())?;
    let lhs: Complex64 = (0..gamma.p()).map(|x| psi.at(x) * uu.at(x)).sum();
    let base: Complex64 = (0..gamma.p()).map(|x| psi.at(x) * gg.at(x)).sum();
    let mass: Complex64 = gamma.elements().iter().map(|&x| u.at(x)).sum();
    let t = gamma.order() as f64;
    Ok(IneqCheck::ge("connected", "invariant-kernel-lower-bound", lhs.re, base.re * mass.norm_sqr() / (t * t), tol::SPECTRAL_REL))
}

/// `max_α t^{-1}⟨M χ_α, χ_α⟩` for `M = (Γ∘Γ)^k(x - y)` on `Γ` is attained at
/// `α = 0`, where it equals `E_{k+1}(Γ)` (with `‖√t χ_α‖^2 = t`).
pub fn check_energy_maximizer(gamma: &MultSubgroup, k: u32) -> Result<IneqCheck> {
    let set = gamma.as_set();
    let gg = correlate(&set.indicator(), &set.indicator())?;
    let kernel = GroupFn::from_fn(set.group(), |x| gg.int_at(x).unwrap().pow(k));
    let mu = mu_alpha_direct(gamma, &kernel)?;
    let top = mu.values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let e = energy_k(set, set, k + 1)? as f64;
    let at_zero = mu.values[0].re * gamma.order() as f64;
    let c = IneqCheck::eq(&format!("energy_maximizer_k{k}"), "subgroup-energy-maximizer", at_zero, e, tol::SPECTRAL_REL);
    let d = IneqCheck::ge(&format!("energy_maximizer_k{k}"), "subgroup-energy-maximizer", mu.values[0].re, top, tol::SPECTRAL_REL);
    Ok(IneqCheck::worst_of(&format!("energy_maximizer_k{k}"), vec![c, d]).expect("two checks"))
}

/// `T^×_k(f) = Σ |Σ_{x_1 … x_k = y} f(x_1) … f(x_k)|^2` by enumerating
/// `k`-tuples of `Γ` and multiplying in `F_p`.
pub fn mult_energy_k(gamma: &MultSubgroup, f: &GroupFn, k: u32) -> Result<EnergyValue> {
    require_support(gamma, f)?;
    let t = gamma.order() as u128;
    let size = t.checked_pow(2 * k - 1).unwrap_or(u128::MAX);
    if size > MULT_ENERGY_CAP {
        return Err(Error::CapExceeded { size, cap: MULT_ENERGY_CAP });
    }
    let fld = gamma.field();
    let els = gamma.elements();
    let mut tuples: Vec<(u32, Complex64, i128)> = vec![(1, Complex64::new(1.0, 0.0), 1)];
    for _ in 0..k {
        tuples = tuples
            .iter()
            .flat_map(|&(prod, w, wi)| els.iter().map(move |&x| (fld.mul(prod, x), w * f.at(x), wi * f.int_at(x).unwrap_or(0) as i128)))
            .collect();
    }
    let p = gamma.p() as usize;
    if f.is_int() {
        let mut hist = vec![0i128; p];
        for (prod, _, wi) in tuples {
            hist[prod as usize] += wi;
        }
        Ok(EnergyValue::Exact(hist.iter().map(|&h| (h * h) as u128).sum()))
    } else {
        let mut hist = vec![Complex64::zero(); p];
        for (prod, w, _) in tuples {
            hist[prod as usize] += w;
        }
        Ok(EnergyValue::Real(hist.iter().map(|z| z.norm_sqr()).sum()))
    }
}

/// `c_α = ⟨f, χ_α⟩`.
pub fn character_coefficients(gamma: &MultSubgroup, f: &GroupFn) -> Vec<Complex64> {
    (0..gamma.order()).map(|a| gamma.elements().iter().map(|&x| f.at(x) * gamma.character(a, x).conj()).sum()).collect()
}

/// `T^×_k(f) = |Γ|^{k-1} Σ_α |c_α|^{2k}`; for indicators also `T^×_k(A) >= |A|^{2k} / |Γ|`.
pub fn check_tk_characters(gamma: &MultSubgroup, f: &GroupFn, k: u32) -> Result<Vec<IneqCheck>> {
    let direct = mult_energy_k(gamma, f, k)?;
    let t = gamma.order() as f64;
    let coeffs = character_coefficients(gamma, f);
    let formula = t.powi(k as i32 - 1) * coeffs.iter().map(|c| c.norm_sqr().powi(k as i32)).sum::<f64>();
    let mut out = vec![IneqCheck::eq(
        &format!("mult_energy_k{k}"),
        "multiplicative-energy-characters",
        direct.as_f64(),
        formula,
        tol::MULT_ENERGY_REL,
    )];
    if let (Some(vals), EnergyValue::Exact(e)) = (f.ints(), direct) {
        if vals.iter().all(|&v| v == 0 || v == 1) {
            let size = vals.iter().sum::<i64>() as i128;
            out.push(IneqCheck::ge_int(
                &format!("mult_energy_lower_k{k}"),
                "multiplicative-energy-lower-bound",
                e as i128 * gamma.order() as i128,
                size.pow(2 * k),
            ));
        }
    }
    Ok(out)
}

/// `|A|^4 <= |Γ| E^×(A)` and `E_l(A, Γ)^2 |Γ| <= E_{2l-1}(Γ) E^×(A)` for
/// `l ∈ {2, 3}`, all in integers.
pub fn check_vinogradov_bounds(gamma: &MultSubgroup, a: &GroupSet) -> Result<Vec<IneqCheck>> {
    if !a.is_subset(gamma.as_set()) {
        return Err(Error::SupportOutsideSubgroup);
    }
    let em = mult_energy_k(gamma, &a.indicator(), 2)?.exact().expect("indicator") as i128;
    let t = gamma.order() as i128;
    let n = a.len() as i128;
    let mut out = vec![IneqCheck::le_int("vinogradov_size", "subset-size-by-multiplicative-energy", n.pow(4), t * em)];
    for l in 2..=3u32 {
        let el = energy_k(a, gamma.as_set(), l)? as i128;
        let eg = energy_k(gamma.as_set(), gamma.as_set(), 2 * l - 1)? as i128;
        out.push(IneqCheck::le_int(&format!("vinogradov_energy_l{l}"), "mixed-energy-by-multiplicative-energy", el * el * t, eg * em));
    }
    Ok(out)
}

/// `|A|^2 <= |Γ|^2 T^×_k(A)^{1/k} (‖h‖_1/‖h‖_2)^{2/k} Σ|h|^2 / Σ (h∘h̄)(Γ∘Γ)` for each `h`.
pub fn check_p_variance(gamma: &MultSubgroup, a: &GroupSet, hs: &[GroupFn], k: u32) -> Result<Vec<IneqCheck>> {
    if !a.is_subset(gamma.as_set()) {
        return Err(Error::SupportOutsideSubgroup);
    }
    let tk = mult_energy_k(gamma, &a.indicator(), k)?.as_f64();
    let t = gamma.order() as f64;
    let gg = correlate(&gamma.as_set().indicator(), &gamma.as_set().indicator())?;
    let lhs = (a.len() * a.len()) as f64;
    let mut out = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        gamma.require_invariant(h)?;
        let l1: f64 = h.to_complex().iter().map(|z| z.norm()).sum();
        let l2sq = h.l2_sq();
        let psi = correlate(h, &h.conj())?;
        let den: f64 = (0..gamma.p()).map(|x| (psi.at(x) * gg.at(x)).re).sum();
        if l2sq == 0.0 || den <= 0.0 {
            return Err(Error::InvalidArgument(format!("degenerate weight {i}")));
        }
        let rhs = t * t * tk.powf(1.0 / k as f64) * (l1 / l2sq.sqrt()).powf(2.0 / k as f64) * l2sq / den;
        out.push(IneqCheck::le(&format!("p_variance_k{k}_h{i}"), "subset-size-variance", lhs, rhs, tol::POWER_REL));
    }
    Ok(out)
}

/// One empirical row for the three-set convolution sum over invariant sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepanovRow {
    pub p: u32,
    pub t: u32,
    pub q: usize,
    pub q1: usize,
    pub q2: usize,
    pub sum: u64,
    pub ratio: f64,
    /// `|Q||Q_1||Q_2| <= t^5`.
    pub size_ok: bool,
    /// `|Q||Q_1||Q_2| t <= p^3`.
    pub field_ok: bool,
}

/// `Σ_{x ∈ Q} (Q_1 ∘ Q_2)(x) / (t^{-1/3} (|Q||Q_1||Q_2|)^{2/3})`, reported only.
pub fn stepanov_row(gamma: &MultSubgroup, q: &GroupSet, q1: &GroupSet, q2: &GroupSet) -> Result<StepanovRow> {
    for s in [q, q1, q2] {
        if !gamma.is_invariant_set(s) {
            return Err(Error::NotInvariant);
        }
    }
    let c = correlate(&q1.indicator(), &q2.indicator())?;
    let sum: i64 = q.iter().map(|x| c.int_at(x).unwrap()).sum();
    let vol = (q.len() * q1.len() * q2.len()) as f64;
    let t = gamma.order() as f64;
    let p = gamma.p() as f64;
    Ok(StepanovRow {
        p: gamma.p(),
        t: gamma.order(),
        q: q.len(),
        q1: q1.len(),
        q2: q2.len(),
        sum: sum as u64,
        ratio: if vol > 0.0 { sum as f64 / (t.powf(-1.0 / 3.0) * vol.powf(2.0 / 3.0)) } else { 0.0 },
        size_ok: vol <= t.powi(5),
        field_ok: vol * t <= p.powi(3),
    })
}

/// A random union of cosets of `Γ` in `F_p^*`, each kept with probability `density`.
pub fn random_invariant_set(gamma: &MultSubgroup, rng: &mut impl Rng, density: f64) -> GroupSet {
    let f = gamma.field();
    let reps: Vec<u32> = (0..gamma.index()).filter(|_| rng.random_bool(density)).map(|c| f.pow_root(c as u64)).collect();
    let seeds = GroupSet::new(f.additive(), reps).expect("in range");
    gamma.orbit_closure(&seeds)
}

/// Random complex function supported on `Γ`.
pub fn random_supported(gamma: &MultSubgroup, rng: &mut impl Rng) -> GroupFn {
    let mut v = vec![Complex64::zero(); gamma.p() as usize];
    for &x in gamma.elements() {
        v[x as usize] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    GroupFn::new(gamma.field().additive(), FnValues::Complex(v)).expect("length p")
}
