//! The bigraded ring `H_*(⊔_n BΣ_n; F2)` in the E-generator basis.
//!
//! As a ring under the juxtaposition product it is polynomial on the
//! generators `E_{i_1} ∘ E_{2 i_2} ∘ ⋯ ∘ E_{2^{k-1} i_k}` with
//! `1 ≤ i_1 ≤ ⋯ ≤ i_k`, of degree `Σ 2^{j-1} i_j` and weight `2^k`. The
//! empty chain is the weight-one class `[1]`, which is a generator and not
//! the ring unit.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gradedalg::DPMonomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("chain {0:?} is not a weakly increasing list of positive integers")]
    BadChain(Vec<u32>),
    #[error("index {0:?} is not admissible")]
    Inadmissible(Vec<u32>),
    #[error("index {0:?} has non-positive excess")]
    NonPositiveExcess(Vec<u32>),
    #[error("cannot parse symmetric-group class: {0}")]
    Parse(String),
}

/// A polynomial generator, given by its chain `(i_1, …, i_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct EMonomial {
    chain: Vec<u32>,
}

impl EMonomial {
    pub fn new(chain: Vec<u32>) -> Result<Self, SymError> {
        let ok = chain.iter().all(|&i| i >= 1) && chain.windows(2).all(|w| w[0] <= w[1]);
        if ok {
            Ok(EMonomial { chain })
        } else {
            Err(SymError::BadChain(chain))
        }
    }

    /// The weight-one generator `[1]`.
    pub fn bracket_one() -> Self {
        EMonomial { chain: Vec::new() }
    }

    pub fn chain(&self) -> &[u32] {
        &self.chain
    }

    /// `k`, where the weight is `2^k`.
    pub fn length(&self) -> usize {
        self.chain.len()
    }

    pub fn degree(&self) -> u64 {
        self.subscripts().iter().map(|&s| u64::from(s)).sum()
    }

    pub fn weight(&self) -> u64 {
        1 << self.chain.len()
    }

    /// The subscripts `(i_1, 2 i_2, 4 i_3, …)` of the ∘-factors.
    pub fn subscripts(&self) -> Vec<u32> {
        self.chain
            .iter()
            .enumerate()
            .map(|(j, &i)| i << j)
            .collect()
    }
}

impl TryFrom<Vec<u32>> for EMonomial {
    type Error = SymError;
    fn try_from(chain: Vec<u32>) -> Result<Self, SymError> {
        EMonomial::new(chain)
    }
}

impl From<EMonomial> for Vec<u32> {
    fn from(e: EMonomial) -> Self {
        e.chain
    }
}

impl fmt::Display for EMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.is_empty() {
            return write!(f, "[1]");
        }
        let parts: Vec<String> = self.chain.iter().map(u32::to_string).collect();
        write!(f, "E({})", parts.join(","))
    }
}

/// A monomial in the generators: a sorted multiset. Empty is the ring unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "SymTermJson")]
pub struct SymTerm {
    gens: Vec<EMonomial>,
}

#[derive(Deserialize)]
struct SymTermJson {
    gens: Vec<EMonomial>,
}

impl From<SymTermJson> for SymTerm {
    fn from(j: SymTermJson) -> Self {
        SymTerm::new(j.gens)
    }
}

impl SymTerm {
    pub fn new(mut gens: Vec<EMonomial>) -> Self {
        gens.sort();
        SymTerm { gens }
    }

    pub fn unit() -> Self {
        SymTerm::default()
    }

    pub fn generator(e: EMonomial) -> Self {
        SymTerm { gens: vec![e] }
    }

    pub fn gens(&self) -> &[EMonomial] {
        &self.gens
    }

    pub fn degree(&self) -> u64 {
        self.gens.iter().map(EMonomial::degree).sum()
    }

    pub fn weight(&self) -> u64 {
        self.gens.iter().map(EMonomial::weight).sum()
    }

    /// A product of at least two generators.
    pub fn is_decomposable(&self) -> bool {
        self.gens.len() >= 2
    }

    pub fn mul(&self, other: &SymTerm) -> SymTerm {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        SymTerm::new(gens)
    }
}

impl fmt::Display for SymTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.gens.iter().map(EMonomial::to_string).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// An F2-linear combination of [`SymTerm`]s.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<SymTerm>", into = "Vec<SymTerm>")]
pub struct SymClass {
    terms: BTreeSet<SymTerm>,
}

impl From<Vec<SymTerm>> for SymClass {
    fn from(terms: Vec<SymTerm>) -> Self {
        let mut c = SymClass::zero();
        for t in terms {
            c.toggle(t);
        }
        c
    }
}

impl From<SymClass> for Vec<SymTerm> {
    fn from(c: SymClass) -> Self {
        c.terms.into_iter().collect()
    }
}

impl SymClass {
    pub fn zero() -> Self {
        SymClass::default()
    }

    pub fn from_term(t: SymTerm) -> Self {
        SymClass {
            terms: BTreeSet::from([t]),
        }
    }

    pub fn generator(e: EMonomial) -> Self {
        SymClass::from_term(SymTerm::generator(e))
    }

    /// Shorthand for the generator with the given chain.
    pub fn e(chain: &[u32]) -> Result<Self, SymError> {
        Ok(SymClass::generator(EMonomial::new(chain.to_vec())?))
    }

    pub fn terms(&self) -> impl Iterator<Item = &SymTerm> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn toggle(&mut self, t: SymTerm) {
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add(&self, other: &SymClass) -> SymClass {
        SymClass {
            terms: self.terms.symmetric_difference(&other.terms).cloned().collect(),
        }
    }

    /// Common weight of all terms; `None` for zero or mixed weights.
    pub fn weight(&self) -> Option<u64> {
        let mut ws = self.terms.iter().map(SymTerm::weight);
        let w = ws.next()?;
        ws.all(|v| v == w).then_some(w)
    }

    /// Common degree of all terms; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<u64> {
        let mut ds = self.terms.iter().map(SymTerm::degree);
        let d = ds.next()?;
        ds.all(|v| v == d).then_some(d)
    }

    /// Parses sums of products such as `E(1,2)*E(3) + [1]*E(1)`; `1` is the
    /// ring unit and `0` the zero class.
    pub fn parse(text: &str) -> Result<SymClass, SymError> {
        let text = text.trim();
        let mut class = SymClass::zero();
        if text == "0" {
            return Ok(class);
        }
        for term in split_top_level(text, '+') {
            let mut gens = Vec::new();
            for factor in split_top_level(&term, '*') {
                let factor = factor.trim();
                match factor {
                    "1" => {}
                    "[1]" | "E()" => gens.push(EMonomial::bracket_one()),
                    _ => {
                        let inner = factor
                            .strip_prefix("E(")
                            .and_then(|r| r.strip_suffix(')'))
                            .ok_or_else(|| SymError::Parse(format!("bad factor {factor:?}")))?;
                        let chain = inner
                            .split(',')
                            .map(|s| s.trim().parse::<u32>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|e| SymError::Parse(format!("{factor:?}: {e}")))?;
                        gens.push(EMonomial::new(chain)?);
                    }
                }
            }
            class.toggle(SymTerm::new(gens));
        }
        Ok(class)
    }
}

fn split_top_level(text: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == sep && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

impl fmt::Display for SymClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(SymTerm::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SymClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymClass({self})")
    }
}

/// A Dyer–Lashof multi-index `(s_1, …, s_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleIndex {
    entries: Vec<u32>,
}

impl AdmissibleIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        AdmissibleIndex { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_admissible(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] <= 2 * w[1])
    }

    /// `s_1 − Σ_{j≥2} s_j`. The empty index is given excess 1 so that it
    /// corresponds to `[1]`.
    pub fn excess(&self) -> i64 {
        match self.entries.split_first() {
            None => 1,
            Some((&s1, rest)) => i64::from(s1) - rest.iter().map(|&s| i64::from(s)).sum::<i64>(),
        }
    }

    pub fn degree(&self) -> u64 {
        self.entries.iter().map(|&s| u64::from(s)).sum()
    }

    pub fn weight(&self) -> u64 {
        1 << self.entries.len()
    }
}

/// `i_t = s_t − Σ_{j>t} s_j`.
pub fn dl_to_chain(index: &AdmissibleIndex) -> Result<EMonomial, SymError> {
    if !index.is_admissible() {
        return Err(SymError::Inadmissible(index.entries.clone()));
    }
    if index.excess() <= 0 {
        return Err(SymError::NonPositiveExcess(index.entries.clone()));
    }
    let s = &index.entries;
    let mut tail = 0u32;
    let mut chain = vec![0; s.len()];
    for t in (0..s.len()).rev() {
        chain[t] = s[t] - tail;
        tail += s[t];
    }
    EMonomial::new(chain)
}

/// Inverse of [`dl_to_chain`]: `s_k = i_k`, `s_t = i_t + Σ_{j>t} s_j`.
pub fn chain_to_dl(e: &EMonomial) -> AdmissibleIndex {
    let mut tail = 0u32;
    let mut s = vec![0; e.chain.len()];
    for t in (0..s.len()).rev() {
        s[t] = e.chain[t] + tail;
        tail += s[t];
    }
    AdmissibleIndex::new(s)
}

/// A ∘-product `E_{n_1} ∘ ⋯ ∘ E_{n_k}` with sorted subscripts.
///
/// Subscript zero stands for `E_0 = [2]`, which is not the ∘-unit, so zero
/// exponents are kept rather than dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct OWord {
    subscripts: Vec<u32>,
}

impl From<Vec<u32>> for OWord {
    fn from(v: Vec<u32>) -> Self {
        OWord::new(v)
    }
}

impl From<OWord> for Vec<u32> {
    fn from(w: OWord) -> Self {
        w.subscripts
    }
}

impl OWord {
    pub fn new(mut subscripts: Vec<u32>) -> Self {
        subscripts.sort_unstable();
        OWord { subscripts }
    }

    pub fn subscripts(&self) -> &[u32] {
        &self.subscripts
    }

    /// Parses `o(2,5)` or the display form `E_2∘E_5`; `[1]` is the empty word.
    pub fn parse(text: &str) -> Result<OWord, SymError> {
        let t = text.trim();
        let bad = || SymError::Parse(format!("bad ∘-word {t:?}"));
        if t == "[1]" {
            return Ok(OWord::new(Vec::new()));
        }
        let parts: Vec<u32> = if let Some(body) = t.strip_prefix("o(").and_then(|r| r.strip_suffix(')')) {
            body.split(',')
                .map(|p| p.trim().parse().map_err(|_| bad()))
                .collect::<Result<_, _>>()?
        } else {
            t.split('∘')
                .map(|p| {
                    p.trim()
                        .strip_prefix("E_")
                        .and_then(|n| n.parse().ok())
                        .ok_or_else(bad)
                })
                .collect::<Result<_, _>>()?
        };
        Ok(OWord::new(parts))
    }

    pub fn degree(&self) -> u64 {
        self.subscripts.iter().map(|&s| u64::from(s)).sum()
    }

    pub fn weight(&self) -> u64 {
        1 << self.subscripts.len()
    }

    /// The polynomial generator this word equals, if its sorted subscripts
    /// have the shape `(i_1, 2 i_2, 4 i_3, …)` with `1 ≤ i_1 ≤ i_2 ≤ ⋯`.
    pub fn as_generator(&self) -> Option<EMonomial> {
        let mut chain = Vec::with_capacity(self.subscripts.len());
        for (j, &s) in self.subscripts.iter().enumerate() {
            if s == 0 || s % (1 << j) != 0 {
                return None;
            }
            chain.push(s >> j);
        }
        EMonomial::new(chain).ok()
    }
}

impl fmt::Display for OWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.subscripts.is_empty() {
            return write!(f, "[1]");
        }
        let parts: Vec<String> = self.subscripts.iter().map(|s| format!("E_{s}")).collect();
        write!(f, "{}", parts.join("∘"))
    }
}

/// `ι_*: x_1^[n_1] ⋯ x_k^[n_k] ↦ E_{n_1} ∘ ⋯ ∘ E_{n_k}`.
pub fn iota_push(m: &DPMonomial) -> OWord {
    OWord::new(m.exps().to_vec())
}

/// The canonical `ι`-preimage `x_1^[i_1] x_2^[2 i_2] ⋯` of a generator.
pub fn iota_preimage(e: &EMonomial) -> DPMonomial {
    DPMonomial::new(e.subscripts())
}

pub fn juxta_multiply(a: &SymClass, b: &SymClass) -> SymClass {
    let mut out = SymClass::zero();
    for x in &a.terms {
        for y in &b.terms {
            out.toggle(x.mul(y));
        }
    }
    out
}

/// All generator chains of length `k` and the given degree.
pub fn chains(degree: u64, k: usize) -> Vec<EMonomial> {
    fn go(rem: u64, j: usize, k: usize, min: u64, cur: &mut Vec<u32>, out: &mut Vec<EMonomial>) {
        if j == k {
            if rem == 0 {
                out.push(EMonomial { chain: cur.clone() });
            }
            return;
        }
        let scale = 1u64 << j;
        // remaining entries are all ≥ i, so their weighted sum is ≥ i·(2^k − 2^j)
        let tail_scale = (1u64 << k) - scale;
        let mut i = min;
        while i * tail_scale <= rem {
            cur.push(i as u32);
            go(rem - i * scale, j + 1, k, i, cur, out);
            cur.pop();
            i += 1;
        }
    }
    let mut out = Vec::new();
    go(degree, 0, k, 1, &mut Vec::new(), &mut out);
    out
}

/// Number of generators of the given degree and weight `2^k`.
pub fn count_basis(degree: u64, k: usize) -> u64 {
    chains(degree, k).len() as u64
}

/// Admissible indices of length `k`, positive excess and the given degree.
pub fn admissible_indices(degree: u64, k: usize) -> Vec<AdmissibleIndex> {
    fn go(rem: u64, j: usize, k: usize, cur: &mut Vec<u32>, out: &mut Vec<AdmissibleIndex>) {
        if j == k {
            if rem == 0 {
                let idx = AdmissibleIndex::new(cur.clone());
                if idx.is_admissible() && idx.excess() > 0 {
                    out.push(idx);
                }
            }
            return;
        }
        for s in 0..=rem {
            cur.push(s as u32);
            go(rem - s, j + 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(degree, 0, k, &mut Vec::new(), &mut out);
    out
}

pub fn count_admissible(degree: u64, k: usize) -> u64 {
    admissible_indices(degree, k).len() as u64
}

/// All generators (including `[1]`) with degree and weight within bounds.
pub fn generators_up_to(max_degree: u64, max_weight: u64) -> Vec<EMonomial> {
    let mut out = Vec::new();
    let mut k = 0;
    while 1u64 << k <= max_weight {
        for d in 0..=max_degree {
            out.extend(chains(d, k));
        }
        k += 1;
    }
    out.sort();
    out
}

/// Basis monomials of exactly the given degree and weight.
pub fn basis_terms(degree: u64, weight: u64) -> Vec<SymTerm> {
    let gens = generators_up_to(degree, weight);
    let mut out = Vec::new();
    fn go(
        gens: &[EMonomial],
        start: usize,
        deg: u64,
        wt: u64,
        cur: &mut Vec<EMonomial>,
        out: &mut Vec<SymTerm>,
    ) {
        if deg == 0 && wt == 0 {
            out.push(SymTerm::new(cur.clone()));
            return;
        }
        for (i, g) in gens.iter().enumerate().skip(start) {
            if g.degree() <= deg && g.weight() <= wt {
                cur.push(g.clone());
                go(gens, i, deg - g.degree(), wt - g.weight(), cur, out);
                cur.pop();
            }
        }
    }
    go(&gens, 0, degree, weight, &mut Vec::new(), &mut out);
    out
}
