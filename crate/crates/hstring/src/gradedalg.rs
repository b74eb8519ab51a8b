//! Divided power algebras over F2 on named graded generators.
//!
//! A [`DPClass`] is an F2-linear combination of monomials
//! `g_1^[n_1] ⋯ g_r^[n_r]`, with the product rule
//! `v^[n] v^[m] = C(n+m, m) v^[n+m]`. Over one degree-1 generator this is
//! `H_*(BZ/2)`; over `k` of them `H_*(BV_k)`; degree-2 generators give the
//! homology of a torus. [`SU2Class`] is the quotient module `H_*(BSU(2))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2core::{binom_parity, F2Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("generator sets differ: {0} vs {1}")]
    GeneratorMismatch(String, String),
    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected a class over a single degree-{0} generator")]
    NotSingleGenerator(u32),
    #[error("cannot parse class: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

/// Ordered, distinct generators of degree 1 or 2.
///
/// Positions matter: monomials store exponents by position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<Generator>) -> Result<Self, AlgError> {
        let mut names = BTreeSet::new();
        for g in &gens {
            if !(1..=2).contains(&g.degree) {
                return Err(AlgError::InvalidGenerators(format!(
                    "{} has degree {}",
                    g.name, g.degree
                )));
            }
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(AlgError::InvalidGenerators(format!("bad name {:?}", g.name)));
            }
            if !names.insert(g.name.clone()) {
                return Err(AlgError::InvalidGenerators(format!("duplicate {}", g.name)));
            }
        }
        Ok(GeneratorSet { gens })
    }

    /// Generators `prefix1, …, prefixN`, all of the given degree.
    pub fn indexed(prefix: &str, count: usize, degree: u32) -> Self {
        let gens = (1..=count)
            .map(|i| Generator {
                name: format!("{prefix}{i}"),
                degree,
            })
            .collect();
        GeneratorSet::new(gens).expect("indexed generator names are valid")
    }

    pub fn single(name: &str, degree: u32) -> Self {
        GeneratorSet::new(vec![Generator {
            name: name.to_string(),
            degree,
        }])
        .expect("single generator name is valid")
    }

    /// Generators `x1, …, xk` of `H_*(BV_k)`.
    pub fn vk(k: usize) -> Self {
        GeneratorSet::indexed("x", k, 1)
    }

    pub fn empty() -> Self {
        GeneratorSet { gens: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.gens[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    fn describe(&self) -> String {
        let parts: Vec<_> = self
            .gens
            .iter()
            .map(|g| format!("{}:{}", g.name, g.degree))
            .collect();
        format!("[{}]", parts.join(","))
    }
}

/// Exponents of a divided-power monomial, by generator position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DPMonomial {
    exps: Vec<u32>,
}

impl DPMonomial {
    pub fn new(exps: Vec<u32>) -> Self {
        DPMonomial { exps }
    }

    pub fn unit(ngens: usize) -> Self {
        DPMonomial {
            exps: vec![0; ngens],
        }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, gens: &GeneratorSet) -> u32 {
        self.exps
            .iter()
            .enumerate()
            .map(|(i, &e)| e * gens.degree(i))
            .sum()
    }

    /// Product of two monomials, or `None` when the coefficient is even.
    pub fn mul(&self, other: &DPMonomial) -> Option<DPMonomial> {
        assert_eq!(self.exps.len(), other.exps.len());
        let mut exps = Vec::with_capacity(self.exps.len());
        for (&a, &b) in self.exps.iter().zip(&other.exps) {
            if !binom_parity(u64::from(a + b), u64::from(b)) {
                return None;
            }
            exps.push(a + b);
        }
        Some(DPMonomial { exps })
    }

    /// Exponents of `self` followed by those of `other`.
    pub fn concat(&self, other: &DPMonomial) -> DPMonomial {
        let mut exps = self.exps.clone();
        exps.extend_from_slice(&other.exps);
        DPMonomial { exps }
    }
}

/// An F2-linear combination of divided-power monomials.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DPClassJson", into = "DPClassJson")]
pub struct DPClass {
    gens: GeneratorSet,
    terms: BTreeSet<DPMonomial>,
}

impl DPClass {
    pub fn zero(gens: &GeneratorSet) -> Self {
        DPClass {
            gens: gens.clone(),
            terms: BTreeSet::new(),
        }
    }

    pub fn one(gens: &GeneratorSet) -> Self {
        DPClass::monomial(gens, vec![0; gens.len()])
    }

    pub fn monomial(gens: &GeneratorSet, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), gens.len(), "exponent count must match generators");
        let mut c = DPClass::zero(gens);
        c.terms.insert(DPMonomial::new(exps));
        c
    }

    pub fn from_monomials(gens: &GeneratorSet, monos: impl IntoIterator<Item = DPMonomial>) -> Self {
        let mut c = DPClass::zero(gens);
        for m in monos {
            c.toggle(m);
        }
        c
    }

    pub fn gens(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn terms(&self) -> impl Iterator<Item = &DPMonomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, m: &DPMonomial) -> bool {
        self.terms.contains(m)
    }

    /// Adds one copy of `m` (mod 2).
    pub fn toggle(&mut self, m: DPMonomial) {
        assert_eq!(m.exps.len(), self.gens.len(), "monomial arity");
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add(&self, other: &DPClass) -> Result<DPClass, AlgError> {
        self.check_same(other)?;
        Ok(DPClass {
            gens: self.gens.clone(),
            terms: self
                .terms
                .symmetric_difference(&other.terms)
                .cloned()
                .collect(),
        })
    }

    pub fn add_assign(&mut self, other: &DPClass) -> Result<(), AlgError> {
        self.check_same(other)?;
        for m in &other.terms {
            self.toggle(m.clone());
        }
        Ok(())
    }

    fn check_same(&self, other: &DPClass) -> Result<(), AlgError> {
        if self.gens != other.gens {
            return Err(AlgError::GeneratorMismatch(
                self.gens.describe(),
                other.gens.describe(),
            ));
        }
        Ok(())
    }

    /// The common degree of all terms; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.iter().map(|m| m.degree(&self.gens));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    /// The same terms over another generator set of the same shape.
    pub fn relabel(&self, gens: &GeneratorSet) -> Result<DPClass, AlgError> {
        let same_shape = gens.len() == self.gens.len()
            && (0..gens.len()).all(|i| gens.degree(i) == self.gens.degree(i));
        if !same_shape {
            return Err(AlgError::GeneratorMismatch(
                self.gens.describe(),
                gens.describe(),
            ));
        }
        Ok(DPClass {
            gens: gens.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Parses sums like `x1^[1]*x2^[2] + x1^[3]`, `1` or `0`.
    pub fn parse(gens: &GeneratorSet, text: &str) -> Result<DPClass, AlgError> {
        let mut class = DPClass::zero(gens);
        let text = text.trim();
        if text == "0" {
            return Ok(class);
        }
        for term in text.split('+') {
            let mut exps = vec![0u32; gens.len()];
            let mut vanishes = false;
            for factor in term.split('*').map(str::trim) {
                if factor == "1" {
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((name, rest)) => {
                        let inner = rest
                            .trim()
                            .strip_prefix('[')
                            .and_then(|r| r.strip_suffix(']'))
                            .ok_or_else(|| AlgError::Parse(format!("expected ^[n] in {factor:?}")))?;
                        let e = inner
                            .trim()
                            .parse::<u32>()
                            .map_err(|e| AlgError::Parse(format!("{factor:?}: {e}")))?;
                        (name.trim(), e)
                    }
                    None => (factor, 1),
                };
                let i = gens
                    .index_of(name)
                    .ok_or_else(|| AlgError::Parse(format!("unknown generator {name:?}")))?;
                vanishes |= exps[i] & exp != 0;
                exps[i] += exp;
            }
            if !vanishes {
                class.toggle(DPMonomial::new(exps));
            }
        }
        Ok(class)
    }

    pub fn format_monomial(gens: &GeneratorSet, m: &DPMonomial) -> String {
        let parts: Vec<String> = m
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| format!("{}^[{}]", gens.name(i), e))
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for DPClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|m| DPClass::format_monomial(&self.gens, m))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DPClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DPClass({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct DPClassJson {
    generators: Vec<Generator>,
    terms: Vec<BTreeMap<String, u32>>,
}

impl TryFrom<DPClassJson> for DPClass {
    type Error = AlgError;

    fn try_from(j: DPClassJson) -> Result<Self, AlgError> {
        let gens = GeneratorSet::new(j.generators)?;
        let mut class = DPClass::zero(&gens);
        for t in j.terms {
            let mut exps = vec![0; gens.len()];
            for (name, e) in t {
                let i = gens
                    .index_of(&name)
                    .ok_or_else(|| AlgError::Parse(format!("unknown generator {name:?}")))?;
                exps[i] = e;
            }
            class.toggle(DPMonomial::new(exps));
        }
        Ok(class)
    }
}

impl From<DPClass> for DPClassJson {
    fn from(c: DPClass) -> Self {
        let terms = c
            .terms
            .iter()
            .map(|m| {
                m.exps
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (c.gens.name(i).to_string(), e))
                    .collect()
            })
            .collect();
        DPClassJson {
            generators: c.gens.gens.clone(),
            terms,
        }
    }
}

/// Product in the divided power algebra.
pub fn dp_multiply(a: &DPClass, b: &DPClass) -> Result<DPClass, AlgError> {
    a.check_same(b)?;
    let mut out = DPClass::zero(&a.gens);
    for x in &a.terms {
        for y in &b.terms {
            if let Some(z) = x.mul(y) {
                out.toggle(z);
            }
        }
    }
    Ok(out)
}

/// The deconcatenation coproduct `g^[n] ↦ Σ_i g^[i] ⊗ g^[n-i]`, per generator.
pub fn dp_coproduct(m: &DPMonomial) -> Vec<(DPMonomial, DPMonomial)> {
    let mut out = vec![(Vec::new(), Vec::new())];
    for &n in &m.exps {
        let mut next = Vec::with_capacity(out.len() * (n as usize + 1));
        for (l, r) in &out {
            for i in 0..=n {
                let mut l: Vec<u32> = l.clone();
                let mut r: Vec<u32> = r.clone();
                l.push(i);
                r.push(n - i);
                next.push((l, r));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(l, r)| (DPMonomial::new(l), DPMonomial::new(r)))
        .collect()
}

/// Coproduct of a class as a set of tensor terms (mod 2).
pub fn dp_coproduct_class(a: &DPClass) -> BTreeSet<(DPMonomial, DPMonomial)> {
    let mut out = BTreeSet::new();
    for m in a.terms() {
        for pair in dp_coproduct(m) {
            if !out.remove(&pair) {
                out.insert(pair);
            }
        }
    }
    out
}

/// The map induced on homology by a linear map `K: V_k → V_l` (an `l × k`
/// matrix), landing over generators `t1, …, tl`.
pub fn linear_push(k: &F2Matrix, a: &DPClass) -> Result<DPClass, AlgError> {
    linear_push_to(k, a, &GeneratorSet::indexed("t", k.rows(), 1))
}

/// [`linear_push`] with an explicit target generator set.
pub fn linear_push_to(
    k: &F2Matrix,
    a: &DPClass,
    target: &GeneratorSet,
) -> Result<DPClass, AlgError> {
    if a.gens.len() != k.cols() {
        return Err(AlgError::DimensionMismatch {
            expected: k.cols(),
            found: a.gens.len(),
        });
    }
    if target.len() != k.rows() {
        return Err(AlgError::DimensionMismatch {
            expected: k.rows(),
            found: target.len(),
        });
    }
    if (0..a.gens.len()).any(|i| a.gens.degree(i) != 1) || (0..target.len()).any(|i| target.degree(i) != 1)
    {
        return Err(AlgError::InvalidGenerators(
            "linear maps act on degree-1 generators".into(),
        ));
    }
    let supports: Vec<Vec<usize>> = (0..k.cols())
        .map(|j| (0..k.rows()).filter(|&i| k.get(i, j)).collect())
        .collect();
    let mut out = DPClass::zero(target);
    let mut acc = vec![0u32; k.rows()];
    for m in a.terms() {
        push_monomial(&m.exps, &supports, 0, &mut acc, &mut out);
    }
    Ok(out)
}

// Each source generator x_j^[n] maps to (Σ_{i∈S_j} t_i)^[n] = Σ over all
// compositions of n indexed by S_j, each with coefficient one. Accumulated
// target exponents must stay bit-disjoint for the product to survive.
fn push_monomial(
    exps: &[u32],
    supports: &[Vec<usize>],
    j: usize,
    acc: &mut Vec<u32>,
    out: &mut DPClass,
) {
    if j == exps.len() {
        out.toggle(DPMonomial::new(acc.clone()));
        return;
    }
    distribute(exps, supports, j, 0, exps[j], acc, out);
}

fn distribute(
    exps: &[u32],
    supports: &[Vec<usize>],
    j: usize,
    pos: usize,
    remaining: u32,
    acc: &mut Vec<u32>,
    out: &mut DPClass,
) {
    let support = &supports[j];
    if pos == support.len() {
        if remaining == 0 {
            push_monomial(exps, supports, j + 1, acc, out);
        }
        return;
    }
    let i = support[pos];
    let last = pos + 1 == support.len();
    let choices = if last { remaining..=remaining } else { 0..=remaining };
    for c in choices {
        if acc[i] & c != 0 {
            continue;
        }
        acc[i] += c;
        distribute(exps, supports, j, pos + 1, remaining - c, acc, out);
        acc[i] -= c;
    }
}

fn single_generator(a: &DPClass, degree: u32) -> Result<(), AlgError> {
    if a.gens.len() == 1 && a.gens.degree(0) == degree {
        Ok(())
    } else {
        Err(AlgError::NotSingleGenerator(degree))
    }
}

/// `H_*(BZ/2) → H_*(BT^1)`: `x^[2m] ↦ y^[m]`, odd degrees to zero.
pub fn beta_push(a: &DPClass) -> Result<DPClass, AlgError> {
    single_generator(a, 1)?;
    let y = GeneratorSet::single("y", 2);
    Ok(DPClass::from_monomials(
        &y,
        a.terms()
            .filter(|m| m.exps[0] % 2 == 0)
            .map(|m| DPMonomial::new(vec![m.exps[0] / 2])),
    ))
}

/// A class in `H_*(BSU(2))`, stored by `m` for the generator `u_m` of `H_{4m}`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SU2Class {
    terms: BTreeSet<u32>,
}

impl SU2Class {
    pub fn zero() -> Self {
        SU2Class::default()
    }

    pub fn basis(m: u32) -> Self {
        SU2Class {
            terms: BTreeSet::from([m]),
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = u32>) -> Self {
        let mut c = SU2Class::zero();
        for m in terms {
            c.toggle(m);
        }
        c
    }

    pub fn toggle(&mut self, m: u32) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lift along `u_m ↦ x^[4m]`.
    pub fn lift(&self) -> DPClass {
        let x = GeneratorSet::single("x", 1);
        DPClass::from_monomials(&x, self.terms().map(|m| DPMonomial::new(vec![4 * m])))
    }

    /// Parses sums like `u0 + u2`, or `0`.
    pub fn parse(text: &str) -> Result<SU2Class, AlgError> {
        let text = text.trim();
        if text == "0" {
            return Ok(SU2Class::zero());
        }
        let mut c = SU2Class::zero();
        for t in text.split('+').map(str::trim) {
            let m = t
                .strip_prefix('u')
                .and_then(|r| r.parse::<u32>().ok())
                .ok_or_else(|| AlgError::Parse(format!("expected u<m>, found {t:?}")))?;
            c.toggle(m);
        }
        Ok(c)
    }
}

impl fmt::Display for SU2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|m| format!("u{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SU2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SU2Class({self})")
    }
}

/// The `H_*(BZ/2)`-module structure on `H_*(BSU(2))`: multiply the lift and
/// drop everything outside degrees divisible by four.
pub fn su2_act(a: &DPClass, b: &SU2Class) -> Result<SU2Class, AlgError> {
    single_generator(a, 1)?;
    let prod = dp_multiply(&a.relabel(&GeneratorSet::single("x", 1))?, &b.lift())?;
    Ok(SU2Class::from_terms(
        prod.terms()
            .filter(|m| m.exps[0] % 4 == 0)
            .map(|m| m.exps[0] / 4),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> GeneratorSet {
        GeneratorSet::single("x", 1)
    }

    fn xp(n: u32) -> DPClass {
        DPClass::monomial(&x(), vec![n])
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(dp_multiply(&xp(1), &xp(2)).unwrap(), xp(3));
        assert!(dp_multiply(&xp(1), &xp(1)).unwrap().is_zero());
        assert_eq!(dp_multiply(&DPClass::one(&x()), &xp(5)).unwrap(), xp(5));
        let y = GeneratorSet::single("y", 2);
        let prod = dp_multiply(
            &DPClass::monomial(&y, vec![2]),
            &DPClass::monomial(&y, vec![4]),
        )
        .unwrap();
        assert_eq!(prod, DPClass::monomial(&y, vec![6]));
        assert_eq!(prod.degree(), Some(12));
    }

    #[test]
    fn multiply_rejects_mismatch() {
        let y = GeneratorSet::single("y", 2);
        assert!(dp_multiply(&xp(1), &DPClass::one(&y)).is_err());
    }

    #[test]
    fn coproduct_examples() {
        let c = dp_coproduct(&DPMonomial::new(vec![2]));
        let exps: Vec<(u32, u32)> = c.iter().map(|(l, r)| (l.exps[0], r.exps[0])).collect();
        assert_eq!(exps, vec![(0, 2), (1, 1), (2, 0)]);
        assert_eq!(dp_coproduct(&DPMonomial::new(vec![])).len(), 1);
        assert_eq!(dp_coproduct(&DPMonomial::new(vec![1, 1])).len(), 4);
    }

    #[test]
    fn linear_push_examples() {
        let k = F2Matrix::from_rows(&[vec![1], vec![1]]);
        let got = linear_push(&k, &DPClass::monomial(&GeneratorSet::vk(1), vec![2])).unwrap();
        let t = GeneratorSet::indexed("t", 2, 1);
        let want = DPClass::parse(&t, "t1^[2] + t1*t2 + t2^[2]").unwrap();
        assert_eq!(got, want);

        let zero = F2Matrix::zeros(1, 1);
        let v1 = GeneratorSet::vk(1);
        assert!(linear_push(&zero, &DPClass::monomial(&v1, vec![3])).unwrap().is_zero());
        assert_eq!(
            linear_push(&zero, &DPClass::one(&v1)).unwrap(),
            DPClass::one(&GeneratorSet::indexed("t", 1, 1))
        );

        let sum = F2Matrix::from_rows(&[vec![1, 1]]);
        let a = DPClass::monomial(&GeneratorSet::vk(2), vec![1, 1]);
        assert!(linear_push(&sum, &a).unwrap().is_zero());
        assert!(linear_push(&sum, &DPClass::one(&GeneratorSet::vk(3))).is_err());
    }

    #[test]
    fn beta_examples() {
        let y = GeneratorSet::single("y", 2);
        assert_eq!(beta_push(&xp(2)).unwrap(), DPClass::monomial(&y, vec![1]));
        assert!(beta_push(&xp(3)).unwrap().is_zero());
        assert_eq!(beta_push(&xp(0)).unwrap(), DPClass::one(&y));
    }

    #[test]
    fn su2_examples() {
        assert_eq!(su2_act(&xp(4), &SU2Class::basis(0)).unwrap(), SU2Class::basis(1));
        assert!(su2_act(&xp(5), &SU2Class::basis(0)).unwrap().is_zero());
        assert_eq!(su2_act(&xp(8), &SU2Class::basis(1)).unwrap(), SU2Class::basis(3));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let v2 = GeneratorSet::vk(2);
        let c = DPClass::parse(&v2, "x1^[3]*x2 + x2^[4] + 1").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(DPClass::parse(&v2, &c.to_string()).unwrap(), c);
        assert!(DPClass::parse(&v2, "x1^[1]*x1^[1]").unwrap().is_zero());
        assert!(DPClass::parse(&v2, "z^[2]").is_err());
        assert_eq!(SU2Class::parse("u0 + u3").unwrap(), SU2Class::from_terms([0, 3]));
    }

    #[test]
    fn json_encoding() {
        let v2 = GeneratorSet::vk(2);
        let c = DPClass::parse(&v2, "x1^[3]*x2 + x2^[2]").unwrap();
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(
            j,
            serde_json::json!({
                "generators": [{"name": "x1", "degree": 1}, {"name": "x2", "degree": 1}],
                "terms": [{"x2": 2}, {"x1": 3, "x2": 1}]
            })
        );
        let back: DPClass = serde_json::from_value(j).unwrap();
        assert_eq!(back, c);
    }

    fn class_strategy(ngens: usize, max_exp: u32) -> impl Strategy<Value = DPClass> {
        proptest::collection::vec(proptest::collection::vec(0..=max_exp, ngens), 0..4).prop_map(
            move |monos| {
                DPClass::from_monomials(
                    &GeneratorSet::vk(ngens),
                    monos.into_iter().map(DPMonomial::new),
                )
            },
        )
    }

    fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = F2Matrix> {
        proptest::collection::vec(any::<bool>(), rows * cols).prop_map(move |bits| {
            let mut m = F2Matrix::zeros(rows, cols);
            for (i, b) in bits.into_iter().enumerate() {
                m.set(i / cols, i % cols, b);
            }
            m
        })
    }

    fn tensor_product(
        l: &BTreeSet<(DPMonomial, DPMonomial)>,
        r: &BTreeSet<(DPMonomial, DPMonomial)>,
    ) -> BTreeSet<(DPMonomial, DPMonomial)> {
        let mut out = BTreeSet::new();
        for (a1, a2) in l {
            for (b1, b2) in r {
                if let (Some(c1), Some(c2)) = (a1.mul(b1), a2.mul(b2)) {
                    if !out.remove(&(c1.clone(), c2.clone())) {
                        out.insert((c1, c2));
                    }
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn multiply_commutative_associative(
            a in class_strategy(3, 10), b in class_strategy(3, 10), c in class_strategy(3, 10)
        ) {
            let ab = dp_multiply(&a, &b).unwrap();
            prop_assert_eq!(&ab, &dp_multiply(&b, &a).unwrap());
            prop_assert_eq!(
                dp_multiply(&ab, &c).unwrap(),
                dp_multiply(&a, &dp_multiply(&b, &c).unwrap()).unwrap()
            );
        }

        #[test]
        fn coproduct_is_multiplicative(a in class_strategy(2, 6), b in class_strategy(2, 6)) {
            let lhs = dp_coproduct_class(&dp_multiply(&a, &b).unwrap());
            let rhs = tensor_product(&dp_coproduct_class(&a), &dp_coproduct_class(&b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn coproduct_is_coassociative(n in 0u32..12, m in 0u32..12) {
            let mono = DPMonomial::new(vec![n, m]);
            let mut left = BTreeSet::new();
            let mut right = BTreeSet::new();
            for (a, b) in dp_coproduct(&mono) {
                for (a1, a2) in dp_coproduct(&a) {
                    left.insert((a1, a2, b.clone()));
                }
                for (b1, b2) in dp_coproduct(&b) {
                    right.insert((a.clone(), b1, b2));
                }
            }
            prop_assert_eq!(left, right);
        }

        #[test]
        fn linear_push_functorial(
            (p, q, r) in (1usize..=3, 1usize..=3, 1usize..=3),
            seed in any::<u64>(),
            a in class_strategy(3, 6),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut rand_matrix = |rows: usize, cols: usize| {
                let mut m = F2Matrix::zeros(rows, cols);
                for i in 0..rows { for j in 0..cols { m.set(i, j, rng.gen()); } }
                m
            };
            let l = rand_matrix(q, p);
            let k = rand_matrix(r, q);
            let a = DPClass::from_monomials(
                &GeneratorSet::vk(p),
                a.terms().map(|m| DPMonomial::new(m.exps()[..p].to_vec())),
            );
            let direct = linear_push(&k.mul(&l), &a).unwrap();
            let mid = linear_push_to(&l, &a, &GeneratorSet::vk(q)).unwrap();
            prop_assert_eq!(direct, linear_push(&k, &mid).unwrap());
        }

        #[test]
        fn linear_push_is_ring_map(k in matrix_strategy(2, 3), a in class_strategy(3, 6), b in class_strategy(3, 6)) {
            let lhs = linear_push(&k, &dp_multiply(&a, &b).unwrap()).unwrap();
            let rhs = dp_multiply(&linear_push(&k, &a).unwrap(), &linear_push(&k, &b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn beta_is_ring_map(n in 0u32..40, m in 0u32..40) {
            let lhs = beta_push(&dp_multiply(&xp(n), &xp(m)).unwrap()).unwrap();
            let rhs = dp_multiply(&beta_push(&xp(n)).unwrap(), &beta_push(&xp(m)).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn su2_is_module(n in 0u32..=20, m in 0u32..=20, b in 0u32..6) {
            let b = SU2Class::basis(b);
            let lhs = su2_act(&xp(n), &su2_act(&xp(m), &b).unwrap()).unwrap();
            let rhs = su2_act(&dp_multiply(&xp(n), &xp(m)).unwrap(), &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn linear_push_matches_iterated_products() {
        // independent route: expand each (Σ t_i)^[n] as a class, multiply classes
        let t = GeneratorSet::indexed("t", 2, 1);
        let power_of_sum = |support: &[usize], n: u32| {
            let mut c = DPClass::zero(&t);
            if support.is_empty() {
                if n == 0 {
                    c = DPClass::one(&t);
                }
                return c;
            }
            let mut stack = vec![(0usize, n, vec![0u32; 2])];
            while let Some((pos, rem, exps)) = stack.pop() {
                if pos + 1 == support.len() {
                    let mut e = exps.clone();
                    e[support[pos]] += rem;
                    c.toggle(DPMonomial::new(e));
                    continue;
                }
                for i in 0..=rem {
                    let mut e = exps.clone();
                    e[support[pos]] += i;
                    stack.push((pos + 1, rem - i, e));
                }
            }
            c
        };
        for bits in 0..64u32 {
            let k = F2Matrix::from_rows(&[
                vec![(bits & 1) as u8, (bits >> 1 & 1) as u8, (bits >> 2 & 1) as u8],
                vec![(bits >> 3 & 1) as u8, (bits >> 4 & 1) as u8, (bits >> 5 & 1) as u8],
            ]);
            for n in [[1u32, 2, 3], [2, 2, 0], [0, 5, 1], [4, 1, 2]] {
                let mut expected = DPClass::one(&t);
                for (j, &nj) in n.iter().enumerate() {
                    let support: Vec<usize> = (0..2).filter(|&i| k.get(i, j)).collect();
                    expected = dp_multiply(&expected, &power_of_sum(&support, nj)).unwrap();
                }
                let a = DPClass::monomial(&GeneratorSet::vk(3), n.to_vec());
                assert_eq!(linear_push(&k, &a).unwrap(), expected, "K bits {bits}, n {n:?}");
            }
        }
    }
}
