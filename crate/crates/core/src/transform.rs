//! Fourier transform, convolutions, and generalized convolutions `C_k`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::check::IneqCheck;
use crate::error::{Error, Result};
use crate::func::{FnValues, GenConvTable, GroupFn, TupleFn};
use crate::group::{CyclicGroup, DEFAULT_TUPLE_CAP};
use crate::tol;

/// Fourier coefficients `f̂(ξ) = Σ_x f(x) e(-ξx/N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs {
    pub group: CyclicGroup,
    pub values: Vec<Complex64>,
}

impl FourierCoeffs {
    pub fn at(&self, xi: u32) -> Complex64 {
        self.values[xi as usize]
    }
}

/// `e(k/N)` for `k = 0..N`.
fn unit_roots(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect()
}

pub fn dft(f: &GroupFn) -> FourierCoeffs {
    let g = f.group();
    let n = g.order();
    let roots = unit_roots(n);
    let vals = f.to_complex();
    let values = (0..n)
        .map(|xi| {
            (0..n).fold(Complex64::zero(), |acc, x| {
                // e(-ξx/N) = roots[(N - ξx mod N) mod N]
                let k = (xi * x) % n;
                acc + vals[x] * roots[(n - k) % n]
            })
        })
        .collect();
    FourierCoeffs { group: g, values }
}

pub fn idft(coeffs: &FourierCoeffs) -> GroupFn {
    let n = coeffs.group.order();
    let roots = unit_roots(n);
    let scale = 1.0 / n as f64;
    let values = (0..n).map(|x| (0..n).fold(Complex64::zero(), |acc, xi| acc + coeffs.values[xi] * roots[(xi * x) % n]) * scale).collect();
    GroupFn::from_complex(coeffs.group, values).expect("length preserved")
}

/// Scalar arithmetic shared by the exact-integer and complex paths.
trait Scalar: Copy + Send + Sync {
    fn nil() -> Self;
    fn unit() -> Self;
    fn add(self, o: Self) -> Option<Self>;
    fn mul(self, o: Self) -> Option<Self>;
}

impl Scalar for i128 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn add(self, o: Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn mul(self, o: Self) -> Option<Self> {
        self.checked_mul(o)
    }
}

impl Scalar for Complex64 {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn add(self, o: Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(self, o: Self) -> Option<Self> {
        Some(self * o)
    }
}

enum Lifted {
    Int(Vec<Vec<i128>>),
    Complex(Vec<Vec<Complex64>>),
}

/// Brings several value vectors to a common scalar type.
fn lift<'a>(values: impl IntoIterator<Item = &'a FnValues>) -> Lifted {
    let values: Vec<&FnValues> = values.into_iter().collect();
    if values.iter().all(|v| v.is_int()) {
        Lifted::Int(values.iter().map(|v| v.to_wide().expect("integer")).collect())
    } else {
        Lifted::Complex(values.iter().map(|v| v.to_complex()).collect())
    }
}

fn overflow(what: &'static str) -> Error {
    Error::Overflow(what)
}

fn pair_sum<T: Scalar>(n: usize, f: &[T], g: &[T], index: impl Fn(usize, usize) -> usize) -> Option<Vec<T>> {
    (0..n).map(|x| (0..n).try_fold(T::nil(), |acc, y| acc.add(f[y].mul(g[index(x, y)])?))).collect()
}

fn bilinear(f: &GroupFn, g: &GroupFn, what: &'static str, index: impl Fn(usize, usize) -> usize + Copy) -> Result<GroupFn> {
    f.group().same_as(g.group())?;
    let grp = f.group();
    let n = grp.order();
    let values = match lift([f.values(), g.values()]) {
        Lifted::Int(v) => FnValues::from_wide(pair_sum(n, &v[0], &v[1], index).ok_or(overflow(what))?, what)?,
        Lifted::Complex(v) => FnValues::Complex(pair_sum(n, &v[0], &v[1], index).expect("complex never overflows")),
    };
    GroupFn::new(grp, values)
}

/// `(f * g)(x) = Σ_y f(y) g(x - y)`.
pub fn convolve(f: &GroupFn, g: &GroupFn) -> Result<GroupFn> {
    let n = f.group().order();
    bilinear(f, g, "convolution", move |x, y| (x + n - y) % n)
}

/// `(f ∘ g)(x) = Σ_y f(y) g(y + x)`.
pub fn correlate(f: &GroupFn, g: &GroupFn) -> Result<GroupFn> {
    let n = f.group().order();
    bilinear(f, g, "correlation", move |x, y| (x + y) % n)
}

/// `f *_k f`: `k` copies of `f` convolved together; `k = 1` gives `f`.
pub fn kfold_convolve(f: &GroupFn, k: usize) -> Result<GroupFn> {
    if k == 0 {
        return Err(Error::InvalidArgument("k-fold convolution needs k >= 1".into()));
    }
    let mut acc = f.clone();
    for _ in 1..k {
        acc = convolve(&acc, f)?;
    }
    Ok(acc)
}

/// `(f ∘_k f)(x) = Σ f(y_1)…f(y_k) f(x + y_1 + … + y_k)`; `k = 1` gives `f ∘ f`.
pub fn kfold_correlate(f: &GroupFn, k: usize) -> Result<GroupFn> {
    correlate(&kfold_convolve(f, k)?, f)
}

fn check_tables(tables: &[TupleFn]) -> Result<(CyclicGroup, usize)> {
    let first = tables.first().ok_or_else(|| Error::InvalidArgument("generalized convolution of no functions".into()))?;
    if tables.len() < 2 {
        return Err(Error::InvalidArgument("generalized convolution needs at least two functions".into()));
    }
    for t in tables {
        first.group().same_as(t.group())?;
        if t.arity() != first.arity() {
            return Err(Error::InvalidArgument("tables of different arity".into()));
        }
    }
    Ok((first.group(), first.arity()))
}

/// `Σ_z F_0(z) Π_i F_i(z + y_i)` for encoded shifts `y_i`.
fn gen_point<T: Scalar>(g: CyclicGroup, d: usize, tables: &[Vec<T>], shifts: &[u64]) -> Option<T> {
    let size = tables[0].len() as u64;
    (0..size).try_fold(T::nil(), |acc, z| {
        let mut term = tables[0][z as usize];
        for (t, &y) in tables[1..].iter().zip(shifts) {
            term = term.mul(t[g.add_encoded(z, y, d) as usize])?;
        }
        acc.add(term)
    })
}

fn split_point(g: CyclicGroup, d: usize, point: &[u32]) -> Vec<u64> {
    point.chunks(d).map(|block| g.encode(block)).collect()
}

/// `C_l(F_0, …, F_{l-1})` for tables over `(Z/N)^d`, a table over `(Z/N)^{d(l-1)}`.
pub fn gen_convolution_tables(tables: &[TupleFn]) -> Result<GenConvTable> {
    let (g, d) = check_tables(tables)?;
    let out_arity = d * (tables.len() - 1);
    let size = g.tuple_space(out_arity, DEFAULT_TUPLE_CAP)?;
    let eval = |idx: u64| split_point(g, d, &g.decode(idx, out_arity));
    let values = match lift(tables.iter().map(|t| t.values())) {
        Lifted::Int(v) => {
            let out: Option<Vec<i128>> = (0..size as u64).map(|i| gen_point(g, d, &v, &eval(i))).collect();
            FnValues::from_wide(out.ok_or(overflow("generalized convolution"))?, "generalized convolution")?
        }
        Lifted::Complex(v) => FnValues::Complex((0..size as u64).map(|i| gen_point(g, d, &v, &eval(i)).expect("complex")).collect()),
    };
    TupleFn::new(g, out_arity, values)
}

/// `C_k(f_0, …, f_{k-1})(x_1, …, x_{k-1}) = Σ_z f_0(z) f_1(z + x_1) … f_{k-1}(z + x_{k-1})`.
pub fn gen_convolution(fs: &[GroupFn]) -> Result<GenConvTable> {
    let tables: Vec<TupleFn> = fs.iter().cloned().map(TupleFn::from).collect();
    gen_convolution_tables(&tables)
}

/// One value of `C_l(F_0, …)` at `point ∈ (Z/N)^{d(l-1)}`, exact for integer tables.
pub fn gen_convolution_at(tables: &[TupleFn], point: &[u32]) -> Result<Value> {
    let (g, d) = check_tables(tables)?;
    if point.len() != d * (tables.len() - 1) {
        return Err(Error::InvalidArgument(format!("point of length {} for {} tables of arity {d}", point.len(), tables.len())));
    }
    let shifts = split_point(g, d, point);
    Ok(match lift(tables.iter().map(|t| t.values())) {
        Lifted::Int(v) => Value::Int(gen_point(g, d, &v, &shifts).ok_or(overflow("generalized convolution"))?),
        Lifted::Complex(v) => Value::Complex(gen_point(g, d, &v, &shifts).expect("complex")),
    })
}

/// A scalar that is exact when every input was an integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(i128),
    Complex(Complex64),
}

impl Value {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Value::Int(v) => Complex64::new(v as f64, 0.0),
            Value::Complex(z) => z,
        }
    }
}

/// Equality of two scalars: exact for integers, relative tolerance otherwise.
pub fn value_check(name: &str, identity: &str, lhs: Value, rhs: Value, rel: f64) -> IneqCheck {
    match (lhs, rhs) {
        (Value::Int(a), Value::Int(b)) => IneqCheck::eq_int(name, identity, a, b),
        _ => complex_check(name, identity, lhs.to_complex(), rhs.to_complex(), rel),
    }
}

/// `|lhs - rhs| <= rel · max(|lhs|, |rhs|, 1)`, reported on moduli.
pub fn complex_check(name: &str, identity: &str, lhs: Complex64, rhs: Complex64, rel: f64) -> IneqCheck {
    let tol = tol::scaled(rel, lhs.norm(), rhs.norm());
    let slack = -(lhs - rhs).norm();
    IneqCheck {
        name: name.to_string(),
        identity: identity.to_string(),
        lhs: lhs.norm(),
        rhs: rhs.norm(),
        slack,
        pass: slack.is_finite() && slack >= -tol,
        tol,
        exact: false,
    }
}

fn sum_values<T: Scalar>(v: &[T]) -> Option<T> {
    v.iter().try_fold(T::nil(), |acc, &x| acc.add(x))
}

fn pow<T: Scalar>(x: T, e: usize) -> Option<T> {
    (0..e).try_fold(T::unit(), |acc, _| acc.mul(x))
}

fn value_of(t: &TupleFn, f: impl Fn(&[i128]) -> Option<i128>, c: impl Fn(&[Complex64]) -> Complex64) -> Result<Value> {
    match t.values() {
        FnValues::Int(v) => {
            let w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
            Ok(Value::Int(f(&w).ok_or(overflow("table sum"))?))
        }
        FnValues::Complex(v) => Ok(Value::Complex(c(v))),
    }
}

/// Sum of all entries of a table.
pub fn table_sum(t: &TupleFn) -> Result<Value> {
    value_of(t, sum_values, |v| v.iter().sum())
}

/// `Σ_x F(x)^l`.
pub fn table_power_sum(t: &TupleFn, l: usize) -> Result<Value> {
    value_of(
        t,
        |v| v.iter().try_fold(0i128, |acc, &x| acc.checked_add(pow(x, l)?)),
        |v| v.iter().map(|&x| pow(x, l).expect("complex")).sum(),
    )
}

/// `Σ_x F(x) G(x)` over a common table space.
pub fn table_dot(a: &TupleFn, b: &TupleFn) -> Result<Value> {
    if a.group() != b.group() || a.arity() != b.arity() {
        return Err(Error::InvalidArgument("tables over different spaces".into()));
    }
    Ok(match lift([a.values(), b.values()]) {
        Lifted::Int(v) => Value::Int(
            v[0].iter().zip(&v[1]).try_fold(0i128, |acc, (&x, &y)| acc.checked_add(x.checked_mul(y)?)).ok_or(overflow("dot product"))?,
        ),
        Lifted::Complex(v) => Value::Complex(v[0].iter().zip(&v[1]).map(|(x, y)| x * y).sum()),
    })
}

/// Pointwise product of several tables on a common space.
pub fn table_product(tables: &[TupleFn]) -> Result<TupleFn> {
    let first = tables.first().ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
    for t in tables {
        if t.group() != first.group() || t.arity() != first.arity() {
            return Err(Error::InvalidArgument("tables over different spaces".into()));
        }
    }
    let n = first.len();
    let values = match lift(tables.iter().map(|t| t.values())) {
        Lifted::Int(v) => {
            let out: Option<Vec<i128>> = (0..n).map(|i| v.iter().try_fold(1i128, |acc, t| acc.checked_mul(t[i]))).collect();
            FnValues::from_wide(out.ok_or(overflow("table product"))?, "table product")?
        }
        Lifted::Complex(v) => FnValues::Complex((0..n).map(|i| v.iter().map(|t| t[i]).product()).collect()),
    };
    TupleFn::new(first.group(), first.arity(), values)
}

/// `(F ∘ G)(x) = Σ_y F(y) G(y + x)` over `(Z/N)^d`.
pub fn table_correlate(a: &TupleFn, b: &TupleFn) -> Result<TupleFn> {
    gen_convolution_tables(&[a.clone(), b.clone()])
}

/// Points at which a commutation check is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Points {
    /// Every point of the output space.
    Full,
    /// This many uniformly random points.
    Sampled(usize),
}

/// Checks `C_l(C_k(R_0), …, C_k(R_{l-1}))(y) = C_k(C_l(K_0), …, C_l(K_{k-1}))(yᵀ)`.
///
/// `matrix` has `l` rows of `k` functions; `R_i` are its rows and `K_j` its
/// columns. A point on the left is `l - 1` blocks of `k - 1` coordinates; the
/// matching point on the right is the transposed `(k - 1) × (l - 1)` array.
pub fn check_commutation(matrix: &[Vec<GroupFn>], points: Points, rng: &mut impl Rng) -> Result<IneqCheck> {
    let l = matrix.len();
    let k = matrix.first().map_or(0, Vec::len);
    if l < 2 || k < 2 || matrix.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidArgument("commutation needs an l × k matrix with l, k >= 2".into()));
    }
    let g = matrix[0][0].group();
    let dim = (l - 1) * (k - 1);
    g.tuple_space(dim, DEFAULT_TUPLE_CAP)?;

    let rows: Vec<TupleFn> = matrix.iter().map(|r| gen_convolution(r)).collect::<Result<_>>()?;
    let cols: Vec<TupleFn> =
        (0..k).map(|j| gen_convolution(&matrix.iter().map(|r| r[j].clone()).collect::<Vec<_>>())).collect::<Result<_>>()?;

    let pts: Vec<Vec<u32>> = match points {
        Points::Full => (0..g.tuple_space(dim, DEFAULT_TUPLE_CAP)? as u64).map(|i| g.decode(i, dim)).collect(),
        Points::Sampled(count) => (0..count).map(|_| (0..dim).map(|_| rng.random_range(0..g.modulus())).collect()).collect(),
    };
    let mut checks = Vec::with_capacity(pts.len());
    for y in pts {
        // y[i * (k-1) + j] is coordinate j of block i on the left
        let transposed: Vec<u32> = (0..k - 1).flat_map(|j| (0..l - 1).map(move |i| (i, j))).map(|(i, j)| y[i * (k - 1) + j]).collect();
        let lhs = gen_convolution_at(&rows, &y)?;
        let rhs = gen_convolution_at(&cols, &transposed)?;
        checks.push(value_check("commutation", "generalized-convolution-commutation", lhs, rhs, tol::FOURIER_REL));
    }
    Ok(IneqCheck::worst_of(&format!("commutation_l{l}_k{k}"), checks).expect("at least one point"))
}

/// `Σ_x C_l(f_0..)(x) C_l(g_0..)(x) = Σ_z Π_i (f_i ∘ g_i)(z)`.
pub fn check_scalar_c(fs: &[GroupFn], gs: &[GroupFn]) -> Result<IneqCheck> {
    if fs.len() != gs.len() {
        return Err(Error::InvalidArgument("scalar product needs equally many functions".into()));
    }
    let lhs = table_dot(&gen_convolution(fs)?, &gen_convolution(gs)?)?;
    let corr: Vec<TupleFn> = fs.iter().zip(gs).map(|(f, g)| correlate(f, g).map(TupleFn::from)).collect::<Result<_>>()?;
    let rhs = table_sum(&table_product(&corr)?)?;
    Ok(value_check(&format!("scalar_c_l{}", fs.len()), "generalized-convolution-scalar-product", lhs, rhs, tol::FOURIER_REL))
}

/// `Σ_{x ∈ Gr^{l-1}} Π_j C_l(f_j, …, f_j)(x) = Σ_{y ∈ Gr^{k-1}} C_k(f_0, …, f_{k-1})(y)^l`.
pub fn check_gen_c(fs: &[GroupFn], l: usize) -> Result<IneqCheck> {
    let diag: Vec<TupleFn> = fs.iter().map(|f| gen_convolution(&vec![f.clone(); l])).collect::<Result<_>>()?;
    let lhs = table_sum(&table_product(&diag)?)?;
    let rhs = table_power_sum(&gen_convolution(fs)?, l)?;
    Ok(value_check(&format!("gen_c_l{l}_k{}", fs.len()), "generalized-convolution-multi-scalar-product", lhs, rhs, tol::FOURIER_REL))
}

/// `Σ_x C_l(f_0)(x) (C_l(f_1) ∘ C_l(f_2))(x) = Σ_z (f_0 ∘ (f_1 ∘ f_2))(z)^l`,
/// with `C_l(f) = C_l(f, …, f)`.
pub fn check_conv_c(f0: &GroupFn, f1: &GroupFn, f2: &GroupFn, l: usize) -> Result<IneqCheck> {
    let c = |f: &GroupFn| gen_convolution(&vec![f.clone(); l]);
    let lhs = table_dot(&c(f0)?, &table_correlate(&c(f1)?, &c(f2)?)?)?;
    let inner = correlate(f0, &correlate(f1, f2)?)?;
    let rhs = table_power_sum(&inner.into(), l)?;
    Ok(value_check(&format!("conv_c_l{l}"), "generalized-convolution-triple-form", lhs, rhs, tol::FOURIER_REL))
}

/// `Σ f(x) conj(g(x)) = N^{-1} Σ f̂(ξ) conj(ĝ(ξ))`.
pub fn check_parseval(f: &GroupFn, g: &GroupFn) -> Result<IneqCheck> {
    f.group().same_as(g.group())?;
    let n = f.group().order() as f64;
    let lhs: Complex64 = f.to_complex().iter().zip(g.to_complex()).map(|(a, b)| a * b.conj()).sum();
    let (fh, gh) = (dft(f), dft(g));
    let rhs: Complex64 = fh.values.iter().zip(&gh.values).map(|(a, b)| a * b.conj()).sum::<Complex64>() / n;
    Ok(complex_check("parseval", "parseval", lhs, rhs, tol::FOURIER_REL))
}

/// `Σ_y |Σ_x f(x) g(y - x)|^2 = N^{-1} Σ |f̂|^2 |ĝ|^2`.
pub fn check_convolution_energy(f: &GroupFn, g: &GroupFn) -> Result<IneqCheck> {
    let n = f.group().order() as f64;
    let lhs = convolve(f, g)?.l2_sq();
    let (fh, gh) = (dft(f), dft(g));
    let rhs = fh.values.iter().zip(&gh.values).map(|(a, b)| a.norm_sqr() * b.norm_sqr()).sum::<f64>() / n;
    Ok(IneqCheck::eq("convolution_energy", "convolution-energy", lhs, rhs, tol::FOURIER_REL))
}

/// `idft(dft(f)) = f`.
pub fn check_inversion(f: &GroupFn) -> Result<IneqCheck> {
    let back = idft(&dft(f));
    let err = back.max_abs_diff(f)?;
    let scale = f.sup_norm().max(1.0);
    Ok(IneqCheck::le("inversion", "fourier-inversion", err, tol::ROUND_TRIP_REL * scale, 0.0))
}

/// `F(f * g) = f̂ ĝ` and `F(f ∘ g) = conj(F(f̄)) ĝ`, worst coefficient.
pub fn check_convolution_theorem(f: &GroupFn, g: &GroupFn) -> Result<IneqCheck> {
    let (fh, gh, fbar) = (dft(f), dft(g), dft(&f.conj()));
    let conv = dft(&convolve(f, g)?);
    let corr = dft(&correlate(f, g)?);
    let mut checks = Vec::new();
    for xi in 0..f.group().order() {
        checks.push(complex_check("c", "fourier-of-convolution", conv.values[xi], fh.values[xi] * gh.values[xi], tol::FOURIER_REL));
        checks.push(complex_check(
            "c",
            "fourier-of-correlation",
            corr.values[xi],
            fbar.values[xi].conj() * gh.values[xi],
            tol::FOURIER_REL,
        ));
    }
    Ok(IneqCheck::worst_of("convolution_theorem", checks).expect("nonempty group"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSet;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(n: u32) -> CyclicGroup {
        CyclicGroup::new(n).unwrap()
    }

    fn ints(n: u32, v: &[i64]) -> GroupFn {
        GroupFn::from_ints(z(n), v.to_vec()).unwrap()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-9
    }

    #[test]
    fn dft_of_delta_and_constant() {
        let d = dft(&GroupFn::delta(z(4), 0));
        assert!(d.values.iter().all(|&c| close(c, Complex64::one())));
        let c = dft(&GroupFn::constant(z(4), 1));
        assert!(close(c.at(0), Complex64::new(4.0, 0.0)));
        assert!((1..4).all(|xi| close(c.at(xi), Complex64::zero())));
    }

    #[test]
    fn forward_sign() {
        // δ_1 has f̂(ξ) = e(-ξ/N)
        let d = dft(&GroupFn::delta(z(4), 1));
        assert!(close(d.at(1), Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn inverse_of_zero_and_delta() {
        let zero = GroupFn::zero(z(6));
        assert!(idft(&dft(&zero)).max_abs_diff(&zero).unwrap() == 0.0);
        let d = GroupFn::delta(z(6), 0);
        assert!(idft(&dft(&d)).max_abs_diff(&d).unwrap() < 1e-12);
    }

    #[test]
    fn small_correlation() {
        let a = GroupSet::new(z(5), [0, 1]).unwrap().indicator();
        assert_eq!(correlate(&a, &a).unwrap().ints().unwrap(), &[2, 1, 0, 0, 1]);
        let f = ints(5, &[3, -1, 4, 1, -5]);
        assert_eq!(convolve(&f, &GroupFn::delta(z(5), 0)).unwrap(), f);
    }

    #[test]
    fn kfold_examples() {
        let d1 = GroupFn::delta(z(5), 1);
        assert_eq!(kfold_convolve(&d1, 3).unwrap(), GroupFn::delta(z(5), 3));
        assert_eq!(kfold_convolve(&d1, 1).unwrap(), d1);
        assert_eq!(kfold_correlate(&d1, 1).unwrap(), correlate(&d1, &d1).unwrap());
        assert!(kfold_convolve(&d1, 0).is_err());
        // σ_2(Γ) for Γ = {1,2,4} ⊂ Z/7: pairs with a + b = 0
        let gamma = GroupSet::new(z(7), [1, 2, 4]).unwrap().indicator();
        let direct = [1i64, 2, 4].iter().flat_map(|a| [1i64, 2, 4].map(|b| (a + b) % 7)).filter(|&s| s == 0).count();
        assert_eq!(kfold_convolve(&gamma, 2).unwrap().int_at(0), Some(direct as i64));
    }

    #[test]
    fn kfold_correlate_matches_definition() {
        let f = ints(5, &[1, 2, 0, -1, 3]);
        let out = kfold_correlate(&f, 2).unwrap();
        for x in 0..5u32 {
            let mut s = 0i64;
            for y1 in 0..5u32 {
                for y2 in 0..5u32 {
                    s += f.int_at(y1).unwrap() * f.int_at(y2).unwrap() * f.int_at((x + y1 + y2) % 5).unwrap();
                }
            }
            assert_eq!(out.int_at(x), Some(s));
        }
    }

    #[test]
    fn c3_small_values() {
        let a = GroupSet::new(z(5), [0, 1]).unwrap().indicator();
        let c3 = gen_convolution(&[a.clone(), a.clone(), a.clone()]).unwrap();
        assert_eq!(c3.int_at(&[0, 0]), Some(2));
        assert_eq!(c3.int_at(&[1, 1]), Some(1));
        let zero = gen_convolution(&[GroupFn::zero(z(5)), a.clone(), a.clone()]).unwrap();
        assert!(zero.values().to_wide().unwrap().iter().all(|&v| v == 0));
        let c2 = gen_convolution(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(GroupFn::try_from(c2).unwrap(), correlate(&a, &a).unwrap());
    }

    #[test]
    fn commutation_on_deltas() {
        let d = GroupFn::delta(z(5), 0);
        let m = vec![vec![d.clone(), d.clone()], vec![d.clone(), d]];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = check_commutation(&m, Points::Full, &mut rng).unwrap();
        assert!(c.pass && c.exact && c.slack == 0.0);
    }

    fn small_fn(n: u32) -> impl Strategy<Value = GroupFn> {
        proptest::collection::vec(-3i64..=3, n as usize).prop_map(move |v| GroupFn::from_ints(z(n), v).unwrap())
    }

    fn cplx_fn(n: u32) -> impl Strategy<Value = GroupFn> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n as usize)
            .prop_map(move |v| GroupFn::from_complex(z(n), v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn correlation_reflection(f in small_fn(7), g in small_fn(7)) {
            prop_assert_eq!(correlate(&f, &g).unwrap(), correlate(&g, &f).unwrap().reflect());
        }

        #[test]
        fn convolution_commutes(f in small_fn(6), g in small_fn(6)) {
            prop_assert_eq!(convolve(&f, &g).unwrap(), convolve(&g, &f).unwrap());
        }

        #[test]
        fn fourier_identities(f in cplx_fn(16), g in cplx_fn(16)) {
            prop_assert!(check_parseval(&f, &g).unwrap().pass);
            prop_assert!(check_convolution_energy(&f, &g).unwrap().pass);
            prop_assert!(check_inversion(&f).unwrap().pass);
            prop_assert!(check_convolution_theorem(&f, &g).unwrap().pass);
        }

        #[test]
        fn commutation_2x2(m in proptest::collection::vec(small_fn(5), 4), seed in any::<u64>()) {
            let matrix = vec![m[..2].to_vec(), m[2..].to_vec()];
            let c = check_commutation(&matrix, Points::Full, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            prop_assert!(c.pass && c.exact);
        }

        #[test]
        fn commutation_2x3_and_3x2(m in proptest::collection::vec(small_fn(5), 6), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let two_by_three = vec![m[..3].to_vec(), m[3..].to_vec()];
            prop_assert!(check_commutation(&two_by_three, Points::Sampled(50), &mut rng).unwrap().pass);
            let three_by_two = vec![m[..2].to_vec(), m[2..4].to_vec(), m[4..].to_vec()];
            prop_assert!(check_commutation(&three_by_two, Points::Sampled(50), &mut rng).unwrap().pass);
        }

        #[test]
        fn corollary_forms(fs in proptest::collection::vec(small_fn(5), 6)) {
            prop_assert!(check_scalar_c(&fs[..3], &fs[3..]).unwrap().pass);
            prop_assert!(check_scalar_c(&fs[..2], &fs[2..4]).unwrap().pass);
            for l in 2..=3 {
                prop_assert!(check_gen_c(&fs[..2], l).unwrap().pass);
                prop_assert!(check_gen_c(&fs[..3], l).unwrap().pass);
                prop_assert!(check_conv_c(&fs[0], &fs[1], &fs[2], l).unwrap().pass);
            }
        }
    }
}
