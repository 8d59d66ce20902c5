//! The ambient cyclic group `Z/N`, its subsets, and tuple sets in `(Z/N)^k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::GroupFn;

/// Largest `N^k` a [`TupleSet`] or tuple table may occupy.
pub const DEFAULT_TUPLE_CAP: u128 = 1_000_000;

/// Sets in groups up to this order also keep a membership bitset.
pub const BITSET_MAX_MODULUS: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicGroup {
    modulus: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    residue: u32,
}

impl GroupElement {
    pub fn residue(self) -> u32 {
        self.residue
    }
}

/// Sign of a sum or difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// How a shift enters an intersection: `A - s` or `s - A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shift {
    Translate,
    Reflect,
}

impl CyclicGroup {
    pub fn new(modulus: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(CyclicGroup { modulus })
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn order(self) -> usize {
        self.modulus as usize
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.modulus as i64) as u32
    }

    pub fn element(self, x: i64) -> GroupElement {
        GroupElement { residue: self.reduce(x) }
    }

    pub fn checked_element(self, residue: u32) -> Result<GroupElement> {
        if residue >= self.modulus {
            return Err(Error::OutOfRange { residue: residue as u64, modulus: self.modulus });
        }
        Ok(GroupElement { residue })
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.modulus as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        let m = self.modulus as u64;
        ((a as u64 + m - b as u64 % m) % m) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn signed(self, a: u32, b: u32, sign: Sign) -> u32 {
        match sign {
            Sign::Plus => self.add(a, b),
            Sign::Minus => self.sub(a, b),
        }
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.modulus
    }

    pub fn same_as(self, other: CyclicGroup) -> Result<()> {
        if self != other {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    /// `N^k`, rejected above `cap`.
    pub fn tuple_space(self, arity: usize, cap: u128) -> Result<usize> {
        let size = (self.modulus as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        Ok(size as usize)
    }

    /// Mixed-radix index of a tuple, first coordinate most significant.
    pub fn encode(self, tuple: &[u32]) -> u64 {
        tuple.iter().fold(0u64, |acc, &x| acc * self.modulus as u64 + x as u64)
    }

    pub fn decode(self, mut index: u64, arity: usize) -> Vec<u32> {
        let mut out = vec![0u32; arity];
        for slot in out.iter_mut().rev() {
            *slot = (index % self.modulus as u64) as u32;
            index /= self.modulus as u64;
        }
        out
    }

    /// Coordinatewise `x + y` on encoded tuples.
    pub fn add_encoded(self, x: u64, y: u64, arity: usize) -> u64 {
        let m = self.modulus as u64;
        let (mut x, mut y) = (x, y);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..arity {
            let d = (x % m + y % m) % m;
            out += d * place;
            place *= m;
            x /= m;
            y /= m;
        }
        out
    }
}

/// A subset of `Z/N`, stored as a strictly increasing residue list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSet {
    group: CyclicGroup,
    members: Vec<u32>,
    #[serde(skip)]
    bits: Option<Vec<u64>>,
}

impl GroupSet {
    /// Builds a set from arbitrary residues; duplicates are merged.
    pub fn new(group: CyclicGroup, residues: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut members: Vec<u32> = residues.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&x| x >= group.modulus) {
            return Err(Error::OutOfRange { residue: bad as u64, modulus: group.modulus });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted(group, members))
    }

    /// Builds a set from integers reduced mod `N`.
    pub fn from_ints(group: CyclicGroup, values: impl IntoIterator<Item = i64>) -> Self {
        let mut members: Vec<u32> = values.into_iter().map(|x| group.reduce(x)).collect();
        members.sort_unstable();
        members.dedup();
        Self::from_sorted(group, members)
    }

    fn from_sorted(group: CyclicGroup, members: Vec<u32>) -> Self {
        let bits = (group.modulus <= BITSET_MAX_MODULUS).then(|| {
            let mut words = vec![0u64; (group.modulus as usize).div_ceil(64)];
            for &x in &members {
                words[x as usize / 64] |= 1 << (x % 64);
            }
            words
        });
        GroupSet { group, members, bits }
    }

    fn from_mask(group: CyclicGroup, mask: &[bool]) -> Self {
        let members = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32).collect();
        Self::from_sorted(group, members)
    }

    pub fn empty(group: CyclicGroup) -> Self {
        Self::from_sorted(group, Vec::new())
    }

    pub fn full(group: CyclicGroup) -> Self {
        Self::from_sorted(group, group.elements().collect())
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        match &self.bits {
            Some(words) => x < self.group.modulus && words[x as usize / 64] >> (x % 64) & 1 == 1,
            None => self.members.binary_search(&x).is_ok(),
        }
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.group.order()];
        for &x in &self.members {
            mask[x as usize] = true;
        }
        mask
    }

    /// `A + s`.
    pub fn translate(&self, s: u32) -> Self {
        Self::from_ints(self.group, self.iter().map(|x| self.group.add(x, s) as i64))
    }

    /// `-A`.
    pub fn negate(&self) -> Self {
        Self::from_ints(self.group, self.iter().map(|x| self.group.neg(x) as i64))
    }

    /// `s - A`.
    pub fn reflect(&self, s: u32) -> Self {
        Self::from_ints(self.group, self.iter().map(|x| self.group.sub(s, x) as i64))
    }

    pub fn intersect(&self, other: &GroupSet) -> Result<Self> {
        self.group.same_as(other.group)?;
        let members = self.iter().filter(|&x| other.contains(x)).collect();
        Ok(Self::from_sorted(self.group, members))
    }

    pub fn union(&self, other: &GroupSet) -> Result<Self> {
        self.group.same_as(other.group)?;
        Ok(Self::from_ints(self.group, self.iter().chain(other.iter()).map(i64::from)))
    }

    pub fn is_subset(&self, other: &GroupSet) -> bool {
        self.group == other.group && self.iter().all(|x| other.contains(x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|x| self.contains(self.group.neg(x)))
    }

    pub fn indicator(&self) -> GroupFn {
        indicator(self)
    }
}

/// Characteristic function of a set.
pub fn indicator(set: &GroupSet) -> GroupFn {
    let mut values = vec![0i64; set.group.order()];
    for x in set.iter() {
        values[x as usize] = 1;
    }
    GroupFn::from_ints(set.group, values).expect("length matches group order")
}

/// `B ∩ (A ∘ s_1) ∩ … ∩ (A ∘ s_m)` where each `∘` is `A - s_i` or `s_i - A`.
///
/// With every shift a [`Shift::Translate`] this is `A^B_s`; an empty `s`
/// returns `B`.
pub fn intersect_shifts(a: &GroupSet, b: &GroupSet, s: &[u32], shifts: &[Shift]) -> Result<GroupSet> {
    a.group.same_as(b.group)?;
    if s.len() != shifts.len() {
        return Err(Error::InvalidArgument(format!("{} shifts but {} shift kinds", s.len(), shifts.len())));
    }
    let g = a.group;
    if let Some(&bad) = s.iter().find(|&&x| x >= g.modulus) {
        return Err(Error::OutOfRange { residue: bad as u64, modulus: g.modulus });
    }
    let members = b
        .iter()
        .filter(|&y| {
            s.iter().zip(shifts).all(|(&si, kind)| match kind {
                // y ∈ A - s  ⇔  y + s ∈ A
                Shift::Translate => a.contains(g.add(y, si)),
                // y ∈ s - A  ⇔  s - y ∈ A
                Shift::Reflect => a.contains(g.sub(si, y)),
            })
        })
        .collect();
    Ok(GroupSet::from_sorted(g, members))
}

/// `A^B_s = B ∩ (A - s_1) ∩ … ∩ (A - s_m)`.
pub fn a_b_s(a: &GroupSet, b: &GroupSet, s: &[u32]) -> Result<GroupSet> {
    intersect_shifts(a, b, s, &vec![Shift::Translate; s.len()])
}

/// `A^*_s = B ∩ (s_1 - A) ∩ … ∩ (s_m - A)`.
pub fn a_star_s(a: &GroupSet, b: &GroupSet, s: &[u32]) -> Result<GroupSet> {
    intersect_shifts(a, b, s, &vec![Shift::Reflect; s.len()])
}

/// `A + B` or `A - B`.
pub fn sumset(a: &GroupSet, b: &GroupSet, sign: Sign) -> Result<GroupSet> {
    a.group.same_as(b.group)?;
    let g = a.group;
    let mut mask = vec![false; g.order()];
    for x in a.iter() {
        for y in b.iter() {
            mask[g.signed(x, y, sign) as usize] = true;
        }
    }
    Ok(GroupSet::from_mask(g, &mask))
}

/// `|A ± B|` without materializing the set.
pub fn sumset_size(a: &GroupSet, b: &GroupSet, sign: Sign) -> Result<usize> {
    Ok(sumset(a, b, sign)?.len())
}

/// A set of `k`-tuples over `Z/N`, stored as sorted mixed-radix indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleSet {
    group: CyclicGroup,
    arity: usize,
    members: Vec<u64>,
}

impl TupleSet {
    pub fn new(group: CyclicGroup, arity: usize, tuples: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        group.tuple_space(arity, DEFAULT_TUPLE_CAP)?;
        let mut members = Vec::new();
        for t in tuples {
            if t.len() != arity {
                return Err(Error::InvalidArgument(format!("tuple of length {} in arity {arity}", t.len())));
            }
            if let Some(&bad) = t.iter().find(|&&x| x >= group.modulus) {
                return Err(Error::OutOfRange { residue: bad as u64, modulus: group.modulus });
            }
            members.push(group.encode(&t));
        }
        members.sort_unstable();
        members.dedup();
        Ok(TupleSet { group, arity, members })
    }

    fn from_mask(group: CyclicGroup, arity: usize, mask: &[bool]) -> Self {
        let members = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect();
        TupleSet { group, arity, members }
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        tuple.len() == self.arity && self.members.binary_search(&self.group.encode(tuple)).is_ok()
    }

    pub fn contains_index(&self, index: u64) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    pub fn indices(&self) -> &[u64] {
        &self.members
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.members.iter().map(|&i| self.group.decode(i, self.arity))
    }

    /// Cartesian power `A^k`.
    pub fn power(a: &GroupSet, arity: usize) -> Result<Self> {
        let g = a.group;
        g.tuple_space(arity, DEFAULT_TUPLE_CAP)?;
        let mut members = vec![0u64];
        for _ in 0..arity {
            members = members.iter().flat_map(|&prefix| a.iter().map(move |x| prefix * g.modulus as u64 + x as u64)).collect();
        }
        members.sort_unstable();
        Ok(TupleSet { group: g, arity, members })
    }

    /// Diagonal `Δ_k(B) = {(b, …, b)}`.
    pub fn diagonal(b: &GroupSet, arity: usize) -> Result<Self> {
        TupleSet::new(b.group, arity, b.iter().map(|x| vec![x; arity]))
    }
}

/// `A_1 × … × A_k ± Δ_k(B)` by direct enumeration of `(a_1 ± b, …, a_k ± b)`.
pub fn tuple_sumset_with_diagonal(sets: &[GroupSet], b: &GroupSet, sign: Sign) -> Result<TupleSet> {
    let arity = sets.len();
    if arity == 0 {
        return Err(Error::InvalidArgument("at least one factor required".into()));
    }
    let g = b.group;
    for s in sets {
        g.same_as(s.group)?;
    }
    let size = g.tuple_space(arity, DEFAULT_TUPLE_CAP)?;
    let mut mask = vec![false; size];
    let mut prefixes: Vec<Vec<u32>> = vec![Vec::new()];
    for s in sets {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                s.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let mut shifted = vec![0u32; arity];
    for t in &prefixes {
        for y in b.iter() {
            for (dst, &x) in shifted.iter_mut().zip(t) {
                *dst = g.signed(x, y, sign);
            }
            mask[g.encode(&shifted) as usize] = true;
        }
    }
    Ok(TupleSet::from_mask(g, arity, &mask))
}

/// `{x : B ∩ (A_1 - x_1) ∩ … ∩ (A_k - x_k) ≠ ∅}` by scanning every tuple.
pub fn characteristic_set(sets: &[GroupSet], b: &GroupSet) -> Result<TupleSet> {
    let arity = sets.len();
    let g = b.group;
    for s in sets {
        g.same_as(s.group)?;
    }
    let size = g.tuple_space(arity, DEFAULT_TUPLE_CAP)?;
    let mask: Vec<bool> = (0..size as u64)
        .map(|i| {
            let x = g.decode(i, arity);
            b.iter().any(|y| sets.iter().zip(&x).all(|(a, &xi)| a.contains(g.add(y, xi))))
        })
        .collect();
    Ok(TupleSet::from_mask(g, arity, &mask))
}

/// Additive energy of two tuple sets, `#{x_1 + y_1 = x_2 + y_2}`.
pub fn tuple_energy(x: &TupleSet, y: &TupleSet) -> Result<u128> {
    x.group.same_as(y.group)?;
    if x.arity != y.arity {
        return Err(Error::InvalidArgument("arity mismatch".into()));
    }
    let size = x.group.tuple_space(x.arity, DEFAULT_TUPLE_CAP)?;
    let mut reps = vec![0u64; size];
    for &a in &x.members {
        for &b in &y.members {
            reps[x.group.add_encoded(a, b, x.arity) as usize] += 1;
        }
    }
    Ok(reps.iter().map(|&r| (r as u128) * (r as u128)).sum())
}
