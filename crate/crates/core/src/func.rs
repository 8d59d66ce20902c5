//! Functions on `Z/N` and on tuple spaces `(Z/N)^d`.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CyclicGroup, GroupSet, DEFAULT_TUPLE_CAP};

/// Dense values of a function: exact integers or complex doubles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "lowercase")]
pub enum FnValues {
    Int(Vec<i64>),
    Complex(Vec<Complex64>),
}

impl FnValues {
    pub fn len(&self) -> usize {
        match self {
            FnValues::Int(v) => v.len(),
            FnValues::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_int(&self) -> bool {
        matches!(self, FnValues::Int(_))
    }

    pub fn complex_at(&self, i: usize) -> Complex64 {
        match self {
            FnValues::Int(v) => Complex64::new(v[i] as f64, 0.0),
            FnValues::Complex(v) => v[i],
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            FnValues::Int(v) => v.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect(),
            FnValues::Complex(v) => v.clone(),
        }
    }

    pub fn to_wide(&self) -> Option<Vec<i128>> {
        match self {
            FnValues::Int(v) => Some(v.iter().map(|&x| x as i128).collect()),
            FnValues::Complex(_) => None,
        }
    }

    pub(crate) fn from_wide(values: Vec<i128>, what: &'static str) -> Result<Self> {
        values.into_iter().map(|x| i64::try_from(x).map_err(|_| Error::Overflow(what))).collect::<Result<Vec<_>>>().map(FnValues::Int)
    }
}

/// A function `Z/N -> Z` or `Z/N -> C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFn {
    group: CyclicGroup,
    values: FnValues,
}

impl GroupFn {
    pub fn new(group: CyclicGroup, values: FnValues) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::LengthMismatch { len: values.len(), modulus: group.modulus() });
        }
        Ok(GroupFn { group, values })
    }

    pub fn from_ints(group: CyclicGroup, values: Vec<i64>) -> Result<Self> {
        Self::new(group, FnValues::Int(values))
    }

    pub fn from_complex(group: CyclicGroup, values: Vec<Complex64>) -> Result<Self> {
        Self::new(group, FnValues::Complex(values))
    }

    pub fn from_fn(group: CyclicGroup, f: impl Fn(u32) -> i64) -> Self {
        GroupFn { group, values: FnValues::Int(group.elements().map(f).collect()) }
    }

    pub fn zero(group: CyclicGroup) -> Self {
        Self::from_fn(group, |_| 0)
    }

    pub fn constant(group: CyclicGroup, c: i64) -> Self {
        Self::from_fn(group, |_| c)
    }

    pub fn delta(group: CyclicGroup, at: u32) -> Self {
        let at = at % group.modulus();
        Self::from_fn(group, |x| i64::from(x == at))
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn values(&self) -> &FnValues {
        &self.values
    }

    pub fn is_int(&self) -> bool {
        self.values.is_int()
    }

    pub fn ints(&self) -> Option<&[i64]> {
        match &self.values {
            FnValues::Int(v) => Some(v),
            FnValues::Complex(_) => None,
        }
    }

    pub fn int_at(&self, x: u32) -> Option<i64> {
        self.ints().map(|v| v[x as usize])
    }

    pub fn at(&self, x: u32) -> Complex64 {
        self.values.complex_at(x as usize)
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.values.to_complex()
    }

    /// Real parts; exact for integer functions.
    pub fn to_real(&self) -> Vec<f64> {
        match &self.values {
            FnValues::Int(v) => v.iter().map(|&x| x as f64).collect(),
            FnValues::Complex(v) => v.iter().map(|z| z.re).collect(),
        }
    }

    pub fn into_complex(self) -> GroupFn {
        GroupFn { group: self.group, values: FnValues::Complex(self.values.to_complex()) }
    }

    /// `x ↦ conj(f(x))`.
    pub fn conj(&self) -> GroupFn {
        match &self.values {
            FnValues::Int(_) => self.clone(),
            FnValues::Complex(v) => GroupFn { group: self.group, values: FnValues::Complex(v.iter().map(|z| z.conj()).collect()) },
        }
    }

    /// `x ↦ f(-x)`.
    pub fn reflect(&self) -> GroupFn {
        let g = self.group;
        let idx = |x: u32| g.neg(x) as usize;
        let values = match &self.values {
            FnValues::Int(v) => FnValues::Int(g.elements().map(|x| v[idx(x)]).collect()),
            FnValues::Complex(v) => FnValues::Complex(g.elements().map(|x| v[idx(x)]).collect()),
        };
        GroupFn { group: g, values }
    }

    /// `x ↦ f(x + s)`.
    pub fn shift(&self, s: u32) -> GroupFn {
        let g = self.group;
        let idx = |x: u32| g.add(x, s) as usize;
        let values = match &self.values {
            FnValues::Int(v) => FnValues::Int(g.elements().map(|x| v[idx(x)]).collect()),
            FnValues::Complex(v) => FnValues::Complex(g.elements().map(|x| v[idx(x)]).collect()),
        };
        GroupFn { group: g, values }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GroupFn) -> Result<GroupFn> {
        self.group.same_as(other.group)?;
        let values = match (&self.values, &other.values) {
            (FnValues::Int(a), FnValues::Int(b)) => {
                let wide: Vec<i128> = a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).collect();
                FnValues::from_wide(wide, "pointwise product")?
            }
            _ => FnValues::Complex(self.to_complex().into_iter().zip(other.to_complex()).map(|(x, y)| x * y).collect()),
        };
        Ok(GroupFn { group: self.group, values })
    }

    pub fn is_real(&self) -> bool {
        match &self.values {
            FnValues::Int(_) => true,
            FnValues::Complex(v) => v.iter().all(|z| z.im == 0.0),
        }
    }

    /// `f(x) = f(-x)` exactly.
    pub fn is_even(&self) -> bool {
        *self == self.reflect()
    }

    pub fn sum(&self) -> Complex64 {
        self.to_complex().into_iter().sum()
    }

    pub fn int_sum(&self) -> Option<i128> {
        self.ints().map(|v| v.iter().map(|&x| x as i128).sum())
    }

    /// `Σ |f(x)|^2`.
    pub fn l2_sq(&self) -> f64 {
        self.to_complex().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn sup_norm(&self) -> f64 {
        self.to_complex().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn support(&self) -> GroupSet {
        let vals = self.to_complex();
        GroupSet::new(self.group, self.group.elements().filter(|&x| !vals[x as usize].is_zero())).expect("residues come from the group")
    }

    /// Largest `|f(x) - g(x)|`.
    pub fn max_abs_diff(&self, other: &GroupFn) -> Result<f64> {
        self.group.same_as(other.group)?;
        Ok(self.to_complex().iter().zip(other.to_complex()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// A function on `(Z/N)^d`, indexed by mixed-radix tuple encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TupleFn {
    group: CyclicGroup,
    arity: usize,
    values: FnValues,
}

/// Tables produced by generalized convolutions.
pub type GenConvTable = TupleFn;

impl TupleFn {
    pub fn new(group: CyclicGroup, arity: usize, values: FnValues) -> Result<Self> {
        let size = group.tuple_space(arity, DEFAULT_TUPLE_CAP)?;
        if values.len() != size {
            return Err(Error::LengthMismatch { len: values.len(), modulus: group.modulus() });
        }
        Ok(TupleFn { group, arity, values })
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &FnValues {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_int(&self) -> bool {
        self.values.is_int()
    }

    pub fn int_at(&self, tuple: &[u32]) -> Option<i64> {
        match &self.values {
            FnValues::Int(v) => Some(v[self.group.encode(tuple) as usize]),
            FnValues::Complex(_) => None,
        }
    }

    pub fn at(&self, tuple: &[u32]) -> Complex64 {
        self.values.complex_at(self.group.encode(tuple) as usize)
    }

    pub fn at_index(&self, index: u64) -> Complex64 {
        self.values.complex_at(index as usize)
    }
}

impl From<GroupFn> for TupleFn {
    fn from(f: GroupFn) -> Self {
        TupleFn { group: f.group, arity: 1, values: f.values }
    }
}

impl TryFrom<TupleFn> for GroupFn {
    type Error = Error;

    fn try_from(t: TupleFn) -> Result<Self> {
        if t.arity != 1 {
            return Err(Error::InvalidArgument(format!("table of arity {} is not a function on the group", t.arity)));
        }
        GroupFn::new(t.group, t.values)
    }
}
