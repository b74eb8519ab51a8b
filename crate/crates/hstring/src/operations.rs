//! The operations `α^G_k`, `Φ^G(S_n/BΣ_n)` and their composites.
//!
//! Coefficient groups are described by [`GroupDescriptor`]; homology classes
//! of `BG` by [`CoefficientClass`], whose terms are tensors with one basis
//! element per atomic factor of `G`.
//!
//! Degree convention: `α^G_k(a ⊗ b)` has degree `|a| + |b| + dim(G)(2^k − 1)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2core::{binom_parity, multinomial_parity, F2Matrix};
use crate::gradedalg::{
    dp_coproduct, linear_push_to, su2_act, AlgError, DPClass, DPMonomial, GeneratorSet, SU2Class,
};
use crate::symhomology::{iota_preimage, OWord, SymClass, SymError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpError {
    #[error("α^G_k is not computed for G = {group}, k = {k}")]
    Unsupported { group: String, k: usize },
    #[error("expected a class over {expected} degree-1 generators, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("coefficient class lives over {found}, expected {expected}")]
    GroupMismatch { expected: String, found: String },
    #[error("term {term} has weight {found}, expected {expected}")]
    WeightMismatch {
        term: String,
        expected: u64,
        found: u64,
    },
    #[error("finite group of odd order: {0}")]
    OddOrder(String),
    #[error("bad group spec {0:?}: {1}")]
    BadGroupSpec(String, String),
    #[error("bad coefficient class: {0}")]
    BadClass(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// The coefficient group `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupDescriptor {
    /// `(Z/2)^l`, `l ≥ 1`.
    Z2Power(u32),
    /// `D_{4n+2}`; `n = 0` is `Z/2`.
    Dihedral(u32),
    /// `T^l`, `l ≥ 1`.
    Torus(u32),
    SU2,
    /// Flattened, with at least two atomic factors.
    Product(Vec<GroupDescriptor>),
}

impl GroupDescriptor {
    /// Product of the given groups, flattened left to right.
    pub fn product(parts: Vec<GroupDescriptor>) -> GroupDescriptor {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                GroupDescriptor::Product(inner) => flat.extend(inner),
                atom => flat.push(atom),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            GroupDescriptor::Product(flat)
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            GroupDescriptor::Z2Power(_) | GroupDescriptor::Dihedral(_) => 0,
            GroupDescriptor::Torus(l) => *l,
            GroupDescriptor::SU2 => 3,
            GroupDescriptor::Product(fs) => fs.iter().map(GroupDescriptor::dim).sum(),
        }
    }

    /// Atomic factors, left to right.
    pub fn factors(&self) -> Vec<GroupDescriptor> {
        match self {
            GroupDescriptor::Product(fs) => fs.clone(),
            atom => vec![atom.clone()],
        }
    }

    /// Order of a finite group; `None` for positive-dimensional groups.
    pub fn order(&self) -> Option<u64> {
        match self {
            GroupDescriptor::Z2Power(l) => Some(1 << l),
            GroupDescriptor::Dihedral(n) => Some(4 * u64::from(*n) + 2),
            GroupDescriptor::Torus(_) | GroupDescriptor::SU2 => None,
            GroupDescriptor::Product(fs) => fs.iter().map(GroupDescriptor::order).product(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.factors().iter().all(|f| match f {
            GroupDescriptor::Z2Power(_) | GroupDescriptor::Torus(_) => true,
            GroupDescriptor::Dihedral(n) => *n == 0,
            _ => false,
        })
    }

    pub fn is_elementary_abelian_2(&self) -> bool {
        self.factors().iter().all(|f| {
            matches!(f, GroupDescriptor::Z2Power(_) | GroupDescriptor::Dihedral(0))
        })
    }

    /// Positive-dimensional, or finite of even order.
    pub fn is_positive_dim_or_even_order(&self) -> bool {
        match self.order() {
            None => true,
            Some(o) => o % 2 == 0,
        }
    }

    /// Homology generators of an atomic factor; `None` for `SU(2)`.
    pub fn factor_generators(&self) -> Option<GeneratorSet> {
        match self {
            GroupDescriptor::Z2Power(1) | GroupDescriptor::Dihedral(_) => {
                Some(GeneratorSet::single("x", 1))
            }
            GroupDescriptor::Z2Power(l) => Some(GeneratorSet::indexed("t", *l as usize, 1)),
            GroupDescriptor::Torus(1) => Some(GeneratorSet::single("y", 2)),
            GroupDescriptor::Torus(l) => Some(GeneratorSet::indexed("y", *l as usize, 2)),
            GroupDescriptor::SU2 => None,
            GroupDescriptor::Product(_) => panic!("factor_generators on a product"),
        }
    }

    /// Largest `k` for which `α^G_k` is available.
    pub fn max_k(&self) -> Option<usize> {
        self.factors()
            .iter()
            .map(|f| match f {
                GroupDescriptor::Torus(_) => Some(2),
                GroupDescriptor::SU2 => Some(1),
                _ => None,
            })
            .fold(None, |acc, m| match (acc, m) {
                (None, m) => m,
                (a, None) => a,
                (Some(a), Some(b)) => Some(a.min(b)),
            })
    }

    pub fn supports(&self, k: usize) -> bool {
        k == 0 || self.max_k().is_none_or(|m| k <= m)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Z2Power(l) => write!(f, "z2^{l}"),
            GroupDescriptor::Dihedral(n) => write!(f, "d{}", 4 * n + 2),
            GroupDescriptor::Torus(l) => write!(f, "t^{l}"),
            GroupDescriptor::SU2 => write!(f, "su2"),
            GroupDescriptor::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|g| format!("({g})")).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = OpError;

    /// Grammar: `z2^L | d<4n+2> | t^L | su2 | (G1)x(G2)x…`.
    fn from_str(spec: &str) -> Result<Self, OpError> {
        let bad = |why: &str| OpError::BadGroupSpec(spec.to_string(), why.to_string());
        let s = spec.trim();
        if s.starts_with('(') {
            let mut parts = Vec::new();
            let mut rest = s;
            loop {
                let inner_start = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
                let mut depth = 1;
                let mut end = None;
                for (i, c) in inner_start.char_indices() {
                    match c {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(i);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let end = end.ok_or_else(|| bad("unbalanced parentheses"))?;
                parts.push(inner_start[..end].parse::<GroupDescriptor>()?);
                rest = inner_start[end + 1..].trim_start();
                if rest.is_empty() {
                    break;
                }
                rest = rest
                    .strip_prefix('x')
                    .ok_or_else(|| bad("expected 'x' between factors"))?
                    .trim_start();
            }
            return Ok(GroupDescriptor::product(parts));
        }
        let exponent = |body: &str| -> Result<u32, OpError> {
            let l = match body.strip_prefix('^') {
                None if body.is_empty() => 1,
                Some(e) => e.parse::<u32>().map_err(|_| bad("bad exponent"))?,
                None => return Err(bad("expected '^L'")),
            };
            if l == 0 {
                return Err(bad("rank must be positive"));
            }
            Ok(l)
        };
        if s == "su2" {
            Ok(GroupDescriptor::SU2)
        } else if let Some(body) = s.strip_prefix("z2") {
            Ok(GroupDescriptor::Z2Power(exponent(body)?))
        } else if let Some(body) = s.strip_prefix('t') {
            Ok(GroupDescriptor::Torus(exponent(body)?))
        } else if let Some(body) = s.strip_prefix('d') {
            let order: u64 = body.parse().map_err(|_| bad("bad dihedral order"))?;
            if order % 2 == 1 {
                return Err(OpError::OddOrder(spec.to_string()));
            }
            if order % 4 != 2 {
                return Err(bad("dihedral order must be 2 mod 4"));
            }
            Ok(GroupDescriptor::Dihedral(((order - 2) / 4) as u32))
        } else {
            Err(bad("unknown group"))
        }
    }
}

/// One basis element of the homology of an atomic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElt {
    Dp(DPMonomial),
    /// `u_m ∈ H_{4m}(BSU(2))`.
    Su2(u32),
}

/// A class in `H_*(BG)`: a sum of tensors of factor basis elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CoefficientJson", into = "CoefficientJson")]
pub struct CoefficientClass {
    group: GroupDescriptor,
    terms: BTreeSet<Vec<BasisElt>>,
}

impl CoefficientClass {
    pub fn zero(group: &GroupDescriptor) -> Self {
        CoefficientClass {
            group: group.clone(),
            terms: BTreeSet::new(),
        }
    }

    pub fn unit(group: &GroupDescriptor) -> Self {
        let term = group
            .factors()
            .iter()
            .map(|f| match f.factor_generators() {
                Some(g) => BasisElt::Dp(DPMonomial::unit(g.len())),
                None => BasisElt::Su2(0),
            })
            .collect();
        CoefficientClass::from_terms(group, [term])
    }

    pub fn from_terms(group: &GroupDescriptor, terms: impl IntoIterator<Item = Vec<BasisElt>>) -> Self {
        let mut c = CoefficientClass::zero(group);
        for t in terms {
            c.toggle(t);
        }
        c
    }

    /// Wraps a class for a group with a single divided-power factor.
    pub fn from_dp(group: &GroupDescriptor, class: &DPClass) -> Result<Self, OpError> {
        let factors = group.factors();
        let gens = match factors.as_slice() {
            [f] => f.factor_generators(),
            _ => None,
        }
        .ok_or_else(|| OpError::BadClass(format!("{group} is not a single divided-power factor")))?;
        let class = class.relabel(&gens)?;
        Ok(CoefficientClass::from_terms(
            group,
            class.terms().map(|m| vec![BasisElt::Dp(m.clone())]),
        ))
    }

    pub fn from_su2(class: &SU2Class) -> Self {
        CoefficientClass::from_terms(&GroupDescriptor::SU2, class.terms().map(|m| vec![BasisElt::Su2(m)]))
    }

    /// The class as a divided-power class, for single-factor groups.
    pub fn as_dp(&self) -> Option<DPClass> {
        let factors = self.group.factors();
        let [f] = factors.as_slice() else { return None };
        let gens = f.factor_generators()?;
        Some(DPClass::from_monomials(
            &gens,
            self.terms.iter().map(|t| match &t[0] {
                BasisElt::Dp(m) => m.clone(),
                BasisElt::Su2(_) => unreachable!("divided-power factor"),
            }),
        ))
    }

    pub fn as_su2(&self) -> Option<SU2Class> {
        (self.group == GroupDescriptor::SU2).then(|| {
            SU2Class::from_terms(self.terms.iter().map(|t| match t[0] {
                BasisElt::Su2(m) => m,
                BasisElt::Dp(_) => unreachable!("SU(2) factor"),
            }))
        })
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = &Vec<BasisElt>> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn toggle(&mut self, t: Vec<BasisElt>) {
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add(&self, other: &CoefficientClass) -> Result<CoefficientClass, OpError> {
        check_group(&self.group, &other.group)?;
        Ok(CoefficientClass {
            group: self.group.clone(),
            terms: self.terms.symmetric_difference(&other.terms).cloned().collect(),
        })
    }

    pub fn term_degree(group: &GroupDescriptor, term: &[BasisElt]) -> u32 {
        group
            .factors()
            .iter()
            .zip(term)
            .map(|(f, b)| match b {
                BasisElt::Dp(m) => m.degree(&f.factor_generators().expect("dp factor")),
                BasisElt::Su2(m) => 4 * m,
            })
            .sum()
    }

    /// Common degree of all terms; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<u32> {
        let mut ds = self.terms.iter().map(|t| CoefficientClass::term_degree(&self.group, t));
        let d = ds.next()?;
        ds.all(|e| e == d).then_some(d)
    }

    /// Parses a class for `group`. Pure tensors separate factors with `|`
    /// and sums of pure tensors use `;`. Single-factor classes use the
    /// factor syntax directly, e.g. `x^[3] + x^[5]` or `u0 + u1`.
    pub fn parse(group: &GroupDescriptor, text: &str) -> Result<CoefficientClass, OpError> {
        let factors = group.factors();
        let mut out = CoefficientClass::zero(group);
        let text = text.trim();
        if text == "0" {
            return Ok(out);
        }
        let tensors: Vec<&str> = if factors.len() == 1 {
            vec![text]
        } else {
            text.split(';').collect()
        };
        for tensor in tensors {
            let pieces: Vec<&str> = if factors.len() == 1 {
                vec![tensor]
            } else {
                tensor.split('|').collect()
            };
            if pieces.len() != factors.len() {
                return Err(OpError::BadClass(format!(
                    "{tensor:?} has {} tensor factors, {group} has {}",
                    pieces.len(),
                    factors.len()
                )));
            }
            let mut partial: Vec<Vec<BasisElt>> = vec![Vec::new()];
            for (f, piece) in factors.iter().zip(pieces) {
                let elts: Vec<BasisElt> = match f.factor_generators() {
                    Some(g) => DPClass::parse(&g, piece)?
                        .terms()
                        .map(|m| BasisElt::Dp(m.clone()))
                        .collect(),
                    None => SU2Class::parse(piece)?.terms().map(BasisElt::Su2).collect(),
                };
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        elts.iter().map(move |e| {
                            let mut p = p.clone();
                            p.push(e.clone());
                            p
                        })
                    })
                    .collect();
            }
            for t in partial {
                out.toggle(t);
            }
        }
        Ok(out)
    }

    fn format_term(group: &GroupDescriptor, term: &[BasisElt]) -> String {
        let parts: Vec<String> = group
            .factors()
            .iter()
            .zip(term)
            .map(|(f, b)| match b {
                BasisElt::Dp(m) => DPClass::format_monomial(&f.factor_generators().unwrap(), m),
                BasisElt::Su2(m) => format!("u{m}"),
            })
            .collect();
        parts.join(" | ")
    }
}

impl fmt::Display for CoefficientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let sep = if self.group.factors().len() == 1 { " + " } else { "; " };
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| CoefficientClass::format_term(&self.group, t))
            .collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl fmt::Debug for CoefficientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoefficientClass[{}]({self})", self.group)
    }
}

#[derive(Serialize, Deserialize)]
struct CoefficientJson {
    group: String,
    terms: Vec<Vec<std::collections::BTreeMap<String, u32>>>,
}

impl From<CoefficientClass> for CoefficientJson {
    fn from(c: CoefficientClass) -> Self {
        let factors = c.group.factors();
        let terms = c
            .terms
            .iter()
            .map(|t| {
                factors
                    .iter()
                    .zip(t)
                    .map(|(f, b)| match b {
                        BasisElt::Dp(m) => {
                            let g = f.factor_generators().unwrap();
                            m.exps()
                                .iter()
                                .enumerate()
                                .filter(|(_, &e)| e > 0)
                                .map(|(i, &e)| (g.name(i).to_string(), e))
                                .collect()
                        }
                        BasisElt::Su2(m) => [("u".to_string(), *m)].into_iter().collect(),
                    })
                    .collect()
            })
            .collect();
        CoefficientJson {
            group: c.group.to_string(),
            terms,
        }
    }
}

impl TryFrom<CoefficientJson> for CoefficientClass {
    type Error = OpError;

    fn try_from(j: CoefficientJson) -> Result<Self, OpError> {
        let group: GroupDescriptor = j.group.parse()?;
        let factors = group.factors();
        let mut out = CoefficientClass::zero(&group);
        for t in j.terms {
            if t.len() != factors.len() {
                return Err(OpError::BadClass(format!("term arity {} for {group}", t.len())));
            }
            let mut term = Vec::new();
            for (f, map) in factors.iter().zip(t) {
                match f.factor_generators() {
                    Some(g) => {
                        let mut exps = vec![0; g.len()];
                        for (name, e) in map {
                            let i = g.index_of(&name).ok_or_else(|| {
                                OpError::BadClass(format!("unknown generator {name:?} for {f}"))
                            })?;
                            exps[i] = e;
                        }
                        term.push(BasisElt::Dp(DPMonomial::new(exps)));
                    }
                    None => {
                        let m = match map.len() {
                            0 => 0,
                            1 => *map.get("u").ok_or_else(|| {
                                OpError::BadClass("SU(2) terms use the key \"u\"".into())
                            })?,
                            _ => return Err(OpError::BadClass("bad SU(2) term".into())),
                        };
                        term.push(BasisElt::Su2(m));
                    }
                }
            }
            out.toggle(term);
        }
        Ok(out)
    }
}

fn check_group(expected: &GroupDescriptor, found: &GroupDescriptor) -> Result<(), OpError> {
    if expected == found {
        Ok(())
    } else {
        Err(OpError::GroupMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        })
    }
}

/// Number of `k × l` matrices of positive integers with row sums `rows`,
/// column sums `cols`, and pairwise bit-disjoint entries in each column.
pub fn a_count(rows: &[u32], cols: &[u32]) -> u128 {
    if rows.iter().sum::<u32>() != cols.iter().sum::<u32>() || rows.is_empty() || cols.is_empty() {
        return 0;
    }
    let mut remaining = rows.to_vec();
    count_columns(cols, 0, &mut remaining)
}

pub fn a_count_parity(rows: &[u32], cols: &[u32]) -> bool {
    a_count(rows, cols) % 2 == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ACountMode {
    Parity,
    Exact,
}

pub fn a_count_mode(rows: &[u32], cols: &[u32], mode: ACountMode) -> u128 {
    let n = a_count(rows, cols);
    match mode {
        ACountMode::Exact => n,
        ACountMode::Parity => n % 2,
    }
}

fn count_columns(cols: &[u32], d: usize, remaining: &mut Vec<u32>) -> u128 {
    if d == cols.len() {
        return u128::from(remaining.iter().all(|&r| r == 0));
    }
    let bits: Vec<u32> = (0..32).filter(|b| cols[d] >> b & 1 == 1).map(|b| 1 << b).collect();
    if bits.len() < remaining.len() {
        return 0;
    }
    let mut entries = vec![0u32; remaining.len()];
    assign_bits(&bits, 0, &mut entries, cols, d, remaining)
}

fn assign_bits(
    bits: &[u32],
    b: usize,
    entries: &mut Vec<u32>,
    cols: &[u32],
    d: usize,
    remaining: &mut Vec<u32>,
) -> u128 {
    if b == bits.len() {
        if entries.contains(&0) {
            return 0;
        }
        for (r, e) in remaining.iter_mut().zip(entries.iter()) {
            *r -= e;
        }
        let n = count_columns(cols, d + 1, remaining);
        for (r, e) in remaining.iter_mut().zip(entries.iter()) {
            *r += e;
        }
        return n;
    }
    let mut total = 0;
    for row in 0..entries.len() {
        if entries[row] + bits[b] <= remaining[row] {
            entries[row] += bits[b];
            total += assign_bits(bits, b + 1, entries, cols, d, remaining);
            entries[row] -= bits[b];
        }
    }
    total
}

fn compositions(total: u32, parts: usize, min: u32, out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
    if cur.len() + 1 == parts {
        if total >= min {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
        }
        return;
    }
    let mut v = min;
    while v + min * (parts - cur.len() - 1) as u32 <= total {
        cur.push(v);
        compositions(total - v, parts, min, out, cur);
        cur.pop();
        v += 1;
    }
}

/// `α^{(Z/2)^l}_k(x^[n] ⊗ 1)` via the A-count formula.
fn alpha_elementary_unit(l: usize, n: &[u32]) -> Vec<DPMonomial> {
    if n.contains(&0) {
        return Vec::new();
    }
    let total: u32 = n.iter().sum();
    let mut cols = Vec::new();
    compositions(total, l, n.len() as u32, &mut cols, &mut Vec::new());
    cols.into_iter()
        .filter(|e| a_count_parity(n, e))
        .map(DPMonomial::new)
        .collect()
}

/// `α^{(Z/2)^l}_k` by brute force: `Σ_K K_*(a) b` over all linear `K: V_k → (Z/2)^l`.
pub fn alpha_elementary_bruteforce(l: usize, a: &DPClass, b: &DPClass) -> Result<DPClass, OpError> {
    let k = a.gens().len();
    let target = GeneratorSet::indexed("t", l, 1);
    let b = b.relabel(&target)?;
    let a = a.relabel(&GeneratorSet::vk(k))?;
    let mut sum = DPClass::zero(&target);
    for bits in 0u64..(1u64 << (l * k)) {
        let mut m = F2Matrix::zeros(l, k);
        for i in 0..l {
            for j in 0..k {
                m.set(i, j, bits >> (i * k + j) & 1 == 1);
            }
        }
        sum.add_assign(&linear_push_to(&m, &a, &target)?)?;
    }
    Ok(crate::gradedalg::dp_multiply(&sum, &b)?)
}

fn beta_exponent(n: u32) -> Option<u32> {
    n.is_multiple_of(2).then_some(n / 2)
}

/// `α^{T^1}_k(x^[n] ⊗ 1)` as an exponent of `y`, `k ∈ {1, 2}`.
fn alpha_circle_unit(n: &[u32]) -> Option<u32> {
    match *n {
        [n] => beta_exponent(n + 1),
        [n1, n2] => {
            let coeff = !binom_parity(u64::from(n1 + n2 + 2), u64::from(n1 + 1));
            if coeff {
                beta_exponent(n1 + n2 + 3)
            } else {
                None
            }
        }
        _ => unreachable!("circle operations are dispatched for k ≤ 2"),
    }
}

// α on one atomic factor: a monomial over V_k against one basis element.
fn alpha_atomic(factor: &GroupDescriptor, n: &[u32], b: &BasisElt) -> Vec<BasisElt> {
    let dp = |b: &BasisElt| match b {
        BasisElt::Dp(m) => m.clone(),
        BasisElt::Su2(_) => unreachable!("divided-power factor"),
    };
    match factor {
        GroupDescriptor::Z2Power(1) | GroupDescriptor::Dihedral(_) => {
            let bm = dp(b);
            let mut parts: Vec<u64> = n.iter().map(|&e| u64::from(e)).collect();
            parts.push(u64::from(bm.exps()[0]));
            if n.iter().all(|&e| e > 0) && multinomial_parity(&parts) {
                vec![BasisElt::Dp(DPMonomial::new(vec![parts.iter().sum::<u64>() as u32]))]
            } else {
                Vec::new()
            }
        }
        GroupDescriptor::Z2Power(l) => {
            let bm = dp(b);
            alpha_elementary_unit(*l as usize, n)
                .into_iter()
                .filter_map(|m| m.mul(&bm))
                .map(BasisElt::Dp)
                .collect()
        }
        GroupDescriptor::Torus(l) => {
            let bm = dp(b);
            let mut out = Vec::new();
            torus_split(n, bm.exps(), 0, &mut Vec::new(), *l as usize, &mut out);
            out.into_iter().map(|e| BasisElt::Dp(DPMonomial::new(e))).collect()
        }
        GroupDescriptor::SU2 => {
            let BasisElt::Su2(m) = b else { unreachable!("SU(2) factor") };
            let x = GeneratorSet::single("x", 1);
            let a = DPClass::monomial(&x, vec![n[0] + 3]);
            su2_act(&a, &SU2Class::basis(*m))
                .expect("single generator")
                .terms()
                .map(BasisElt::Su2)
                .collect()
        }
        GroupDescriptor::Product(_) => unreachable!("atomic factors only"),
    }
}

// T^l = (T^1)^l through the product rule: split the V_k monomial among the
// l circle factors with the iterated coproduct, apply the circle formula on
// each, and multiply into the matching coordinate of b. Terms that appear an
// even number of times cancel.
fn torus_split(
    n: &[u32],
    b: &[u32],
    i: usize,
    acc: &mut Vec<u32>,
    l: usize,
    out: &mut Vec<Vec<u32>>,
) {
    fn toggle(out: &mut Vec<Vec<u32>>, v: Vec<u32>) {
        if let Some(p) = out.iter().position(|w| *w == v) {
            out.swap_remove(p);
        } else {
            out.push(v);
        }
    }
    if i + 1 == l {
        if let Some(e) = alpha_circle_unit(n) {
            if binom_parity(u64::from(e + b[i]), u64::from(b[i])) {
                let mut v = acc.clone();
                v.push(e + b[i]);
                toggle(out, v);
            }
        }
        return;
    }
    for (left, right) in dp_coproduct(&DPMonomial::new(n.to_vec())) {
        if let Some(e) = alpha_circle_unit(left.exps()) {
            if binom_parity(u64::from(e + b[i]), u64::from(b[i])) {
                acc.push(e + b[i]);
                let mut sub = Vec::new();
                torus_split(right.exps(), b, i + 1, acc, l, &mut sub);
                acc.pop();
                for v in sub {
                    toggle(out, v);
                }
            }
        }
    }
}

// Product rule over the atomic factors, left-nested.
fn alpha_term(factors: &[GroupDescriptor], n: &DPMonomial, b: &[BasisElt]) -> BTreeSet<Vec<BasisElt>> {
    let mut out = BTreeSet::new();
    let mut toggle = |t: Vec<BasisElt>| {
        if !out.remove(&t) {
            out.insert(t);
        }
    };
    if factors.len() == 1 {
        for e in alpha_atomic(&factors[0], n.exps(), &b[0]) {
            toggle(vec![e]);
        }
        return out;
    }
    let last = factors.len() - 1;
    for (left, right) in dp_coproduct(n) {
        let tail = alpha_atomic(&factors[last], right.exps(), &b[last]);
        if tail.is_empty() {
            continue;
        }
        for head in alpha_term(&factors[..last], &left, &b[..last]) {
            for t in &tail {
                let mut v = head.clone();
                v.push(t.clone());
                toggle(v);
            }
        }
    }
    out
}

/// `α^G_k(a ⊗ b)`.
pub fn alpha(
    g: &GroupDescriptor,
    k: usize,
    a: &DPClass,
    b: &CoefficientClass,
) -> Result<CoefficientClass, OpError> {
    check_group(g, &b.group)?;
    if a.gens().len() != k || (0..k).any(|i| a.gens().degree(i) != 1) {
        return Err(OpError::ArityMismatch {
            expected: k,
            found: a.gens().len(),
        });
    }
    if !g.supports(k) {
        return Err(OpError::Unsupported {
            group: g.to_string(),
            k,
        });
    }
    if k == 0 {
        return Ok(if a.is_zero() { CoefficientClass::zero(g) } else { b.clone() });
    }
    let factors = g.factors();
    let mut out = CoefficientClass::zero(g);
    for m in a.terms() {
        for t in &b.terms {
            for r in alpha_term(&factors, m, t) {
                out.toggle(r);
            }
        }
    }
    Ok(out)
}

/// `Φ^G(S_n/BΣ_n)(a ⊗ b)` for `a` of weight `n`.
pub fn phi_sigma(
    g: &GroupDescriptor,
    n: u64,
    a: &SymClass,
    b: &CoefficientClass,
) -> Result<CoefficientClass, OpError> {
    if !g.is_positive_dim_or_even_order() {
        return Err(OpError::OddOrder(g.to_string()));
    }
    check_group(g, &b.group)?;
    for t in a.terms() {
        if t.weight() != n {
            return Err(OpError::WeightMismatch {
                term: t.to_string(),
                expected: n,
                found: t.weight(),
            });
        }
    }
    let mut out = CoefficientClass::zero(g);
    if !n.is_power_of_two() {
        return Ok(out);
    }
    for t in a.terms() {
        let [e] = t.gens() else { continue };
        let k = e.length();
        let pre = DPClass::from_monomials(&GeneratorSet::vk(k), [iota_preimage(e)]);
        out = out.add(&alpha(g, k, &pre, b)?)?;
    }
    Ok(out)
}

/// `Φ` on a ∘-word `ι_*(x^[u])`, which is `α_k(x^[u] ⊗ b)` by definition;
/// the word need not be a polynomial generator.
pub fn phi_oword(g: &GroupDescriptor, w: &OWord, b: &CoefficientClass) -> Result<CoefficientClass, OpError> {
    let k = w.subscripts().len();
    let a = DPClass::monomial(&GeneratorSet::vk(k), w.subscripts().to_vec());
    alpha(g, k, &a, b)
}

/// An argument of `Φ(S_n)`: a class in the E-basis or a single ∘-word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpInput {
    Sym(SymClass),
    Word(OWord),
}

impl OpInput {
    /// Parses a ∘-word (`o(2,5)`, `E_2∘E_5`) or else an E-basis class.
    pub fn parse(text: &str) -> Result<OpInput, OpError> {
        let t = text.trim();
        if t.starts_with("o(") || t.contains('∘') || t.starts_with("E_") {
            Ok(OpInput::Word(OWord::parse(t)?))
        } else {
            Ok(OpInput::Sym(SymClass::parse(t)?))
        }
    }

    /// Common degree, `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<u64> {
        match self {
            OpInput::Sym(c) => c.degree(),
            OpInput::Word(w) => Some(w.degree()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, OpInput::Sym(c) if c.is_zero())
    }

    /// The class in the E-basis, when available without a basis change.
    pub fn as_sym(&self) -> Option<SymClass> {
        match self {
            OpInput::Sym(c) => Some(c.clone()),
            OpInput::Word(w) => w.as_generator().map(SymClass::generator),
        }
    }
}

impl fmt::Display for OpInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpInput::Sym(c) => write!(f, "{c}"),
            OpInput::Word(w) => write!(f, "{w}"),
        }
    }
}

impl From<SymClass> for OpInput {
    fn from(c: SymClass) -> Self {
        OpInput::Sym(c)
    }
}

impl From<OWord> for OpInput {
    fn from(w: OWord) -> Self {
        OpInput::Word(w)
    }
}

/// `Φ(S_n)(a ⊗ b)` for either kind of input.
pub fn phi_input(
    g: &GroupDescriptor,
    n: u64,
    a: &OpInput,
    b: &CoefficientClass,
) -> Result<CoefficientClass, OpError> {
    match a {
        OpInput::Sym(c) => phi_sigma(g, n, c, b),
        OpInput::Word(w) => {
            if w.weight() != n {
                return Err(OpError::WeightMismatch {
                    term: w.to_string(),
                    expected: n,
                    found: w.weight(),
                });
            }
            phi_oword(g, w, b)
        }
    }
}

/// `Φ(a_1) ∘ ⋯ ∘ Φ(a_r)` applied to `b`; the last factor acts first.
pub fn composite_op(
    g: &GroupDescriptor,
    factors: &[(u64, OpInput)],
    b: &CoefficientClass,
) -> Result<CoefficientClass, OpError> {
    let mut cur = b.clone();
    for (n, a) in factors.iter().rev() {
        cur = phi_input(g, *n, a, &cur)?;
    }
    Ok(cur)
}

/// Canonical basis of `H_d(BG)`, in lexicographic order.
pub fn basis_in_degree(g: &GroupDescriptor, d: u32) -> Vec<Vec<BasisElt>> {
    fn atomic(f: &GroupDescriptor, d: u32) -> Vec<BasisElt> {
        match f.factor_generators() {
            None => {
                if d.is_multiple_of(4) {
                    vec![BasisElt::Su2(d / 4)]
                } else {
                    Vec::new()
                }
            }
            Some(gens) => {
                let deg = gens.degree(0);
                if !d.is_multiple_of(deg) {
                    return Vec::new();
                }
                let mut out = Vec::new();
                let mut cur = Vec::new();
                if gens.len() == 1 {
                    out.push(vec![d / deg]);
                } else {
                    let mut all = Vec::new();
                    for_each_weak_composition(d / deg, gens.len(), &mut cur, &mut all);
                    out = all;
                }
                out.into_iter().map(|e| BasisElt::Dp(DPMonomial::new(e))).collect()
            }
        }
    }
    fn go(fs: &[GroupDescriptor], d: u32, out: &mut Vec<Vec<BasisElt>>, cur: &mut Vec<BasisElt>) {
        if fs.len() == 1 {
            for e in atomic(&fs[0], d) {
                let mut v = cur.clone();
                v.push(e);
                out.push(v);
            }
            return;
        }
        for d0 in 0..=d {
            for e in atomic(&fs[0], d0) {
                cur.push(e);
                go(&fs[1..], d - d0, out, cur);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&g.factors(), d, &mut out, &mut Vec::new());
    out.sort();
    out
}

fn for_each_weak_composition(total: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() + 1 == parts {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for v in 0..=total {
        cur.push(v);
        for_each_weak_composition(total - v, parts, cur, out);
        cur.pop();
    }
}

/// Result of a witness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    /// `α(a ⊗ b) = output ≠ 0`.
    Found {
        b: CoefficientClass,
        output: CoefficientClass,
    },
    /// A closed-form criterion shows the operation is zero.
    CertifiedTrivial { reason: String },
    /// Nothing found up to the bound; not a proof of triviality.
    NotFound { degree_bound: u32 },
}

/// Default search bound `deg(a) + dim(G)·2^k + 8`.
pub fn default_degree_bound(g: &GroupDescriptor, k: usize, a: &DPClass) -> u32 {
    let deg = a.terms().map(|m| m.degree(a.gens())).max().unwrap_or(0);
    deg + g.dim() * (1 << k) + 8
}

/// Looks for a basis element `b` of `H_*(BG)` with `α^G_k(a ⊗ b) ≠ 0`.
pub fn nontrivial_witness(
    g: &GroupDescriptor,
    k: usize,
    a: &DPClass,
    degree_bound: Option<u32>,
) -> Result<WitnessOutcome, OpError> {
    if !g.supports(k) {
        return Err(OpError::Unsupported {
            group: g.to_string(),
            k,
        });
    }
    let bound = degree_bound.unwrap_or_else(|| default_degree_bound(g, k, a));
    if let Some(reason) = detector_says_trivial(g, k, a) {
        return Ok(WitnessOutcome::CertifiedTrivial { reason });
    }
    for d in 0..=bound {
        for t in basis_in_degree(g, d) {
            let b = CoefficientClass::from_terms(g, [t]);
            let output = alpha(g, k, a, &b)?;
            if !output.is_zero() {
                return Ok(WitnessOutcome::Found { b, output });
            }
        }
    }
    Ok(WitnessOutcome::NotFound { degree_bound: bound })
}

// Closed-form nontriviality criteria for single monomials. Each returns a
// reason when the operation vanishes on every b.
fn detector_says_trivial(g: &GroupDescriptor, k: usize, a: &DPClass) -> Option<String> {
    if a.is_zero() {
        return Some("a = 0".into());
    }
    if a.len() != 1 || k == 0 {
        return None;
    }
    let n: Vec<u32> = a.terms().next().unwrap().exps().to_vec();
    match g {
        GroupDescriptor::Z2Power(1) | GroupDescriptor::Dihedral(_) => {
            if n.contains(&0) {
                Some("some exponent is zero".into())
            } else if !multinomial_parity(&n.iter().map(|&e| u64::from(e)).collect::<Vec<_>>()) {
                Some("two exponents share a binary digit".into())
            } else {
                None
            }
        }
        GroupDescriptor::SU2 => (n[0] % 4 != 1).then(|| format!("{} ≢ 1 mod 4", n[0])),
        GroupDescriptor::Torus(1) => {
            alpha_circle_unit(&n).is_none().then(|| "circle coefficient vanishes".into())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedalg::dp_multiply;
    use proptest::prelude::*;

    fn z2() -> GroupDescriptor {
        GroupDescriptor::Z2Power(1)
    }

    fn vk(k: usize, exps: &[u32]) -> DPClass {
        DPClass::monomial(&GeneratorSet::vk(k), exps.to_vec())
    }

    fn cls(g: &GroupDescriptor, text: &str) -> CoefficientClass {
        CoefficientClass::parse(g, text).unwrap()
    }

    #[test]
    fn group_specs() {
        for s in ["z2^1", "z2^3", "d6", "d2", "t^2", "su2", "(z2^1)x(t^1)x(su2)"] {
            let g: GroupDescriptor = s.parse().unwrap();
            assert_eq!(g.to_string().parse::<GroupDescriptor>().unwrap(), g);
        }
        assert_eq!("z2".parse::<GroupDescriptor>().unwrap(), z2());
        assert_eq!("((z2)x(t))x(su2)".parse::<GroupDescriptor>().unwrap().factors().len(), 3);
        assert_eq!("(t^2)x(su2)".parse::<GroupDescriptor>().unwrap().dim(), 5);
        assert!(matches!("d3".parse::<GroupDescriptor>(), Err(OpError::OddOrder(_))));
        assert!("d8".parse::<GroupDescriptor>().is_err());
        assert!("z2^0".parse::<GroupDescriptor>().is_err());
        assert!("q8".parse::<GroupDescriptor>().is_err());
    }

    #[test]
    fn alpha_examples() {
        let out = alpha(&z2(), 1, &vk(1, &[3]), &cls(&z2(), "x^[4]")).unwrap();
        assert_eq!(out, cls(&z2(), "x^[7]"));
        let one = CoefficientClass::unit(&z2());
        assert_eq!(alpha(&z2(), 2, &vk(2, &[1, 2]), &one).unwrap(), cls(&z2(), "x^[3]"));
        assert!(alpha(&z2(), 2, &vk(2, &[0, 5]), &one).unwrap().is_zero());

        let e2 = GroupDescriptor::Z2Power(2);
        let out = alpha(&e2, 1, &vk(1, &[3]), &CoefficientClass::unit(&e2)).unwrap();
        assert_eq!(out, cls(&e2, "t1*t2^[2] + t1^[2]*t2"));

        let t1 = GroupDescriptor::Torus(1);
        let u = CoefficientClass::unit(&t1);
        assert_eq!(alpha(&t1, 1, &vk(1, &[1]), &u).unwrap(), cls(&t1, "y"));
        assert!(alpha(&t1, 1, &vk(1, &[2]), &u).unwrap().is_zero());
        assert_eq!(alpha(&t1, 2, &vk(2, &[1, 2]), &u).unwrap(), cls(&t1, "y^[3]"));

        let t2 = GroupDescriptor::Torus(2);
        let out = alpha(&t2, 1, &vk(1, &[2]), &CoefficientClass::unit(&t2)).unwrap();
        assert_eq!(out, cls(&t2, "y1*y2"));
        assert_eq!(out.degree(), Some(4));

        let su2 = GroupDescriptor::SU2;
        let u0 = CoefficientClass::unit(&su2);
        assert_eq!(alpha(&su2, 1, &vk(1, &[1]), &u0).unwrap(), cls(&su2, "u1"));
        assert!(alpha(&su2, 1, &vk(1, &[2]), &u0).unwrap().is_zero());

        let b = cls(&t1, "y^[2] + y");
        assert_eq!(alpha(&t1, 0, &DPClass::one(&GeneratorSet::vk(0)), &b).unwrap(), b);
    }

    #[test]
    fn alpha_errors() {
        let t1 = GroupDescriptor::Torus(1);
        let err = alpha(&t1, 3, &vk(3, &[1, 1, 1]), &CoefficientClass::unit(&t1)).unwrap_err();
        assert!(matches!(err, OpError::Unsupported { .. }));
        let su2 = GroupDescriptor::SU2;
        assert!(alpha(&su2, 2, &vk(2, &[1, 2]), &CoefficientClass::unit(&su2)).is_err());
        assert!(alpha(&z2(), 2, &vk(1, &[1]), &CoefficientClass::unit(&z2())).is_err());
        assert!(alpha(&z2(), 1, &vk(1, &[1]), &CoefficientClass::unit(&t1)).is_err());
    }

    #[test]
    fn a_count_examples() {
        assert_eq!(a_count(&[3], &[1, 2]), 1);
        for n in 1..20 {
            assert_eq!(a_count(&[n], &[n]), 1);
        }
        assert_eq!(a_count(&[6], &[2, 4]), 1);
        assert_eq!(a_count(&[3], &[1, 1]), 0);
        assert_eq!(a_count(&[1, 2], &[3]), 1);
        assert_eq!(a_count(&[3, 3], &[3, 3]), 2);
        assert_eq!(a_count_mode(&[3, 3], &[3, 3], ACountMode::Parity), 0);
    }

    #[test]
    fn phi_examples() {
        let one = CoefficientClass::unit(&z2());
        let e = |c: &[u32]| SymClass::e(c).unwrap();
        let w3 = juxta(&e(&[]), &e(&[1]));
        assert!(phi_sigma(&z2(), 3, &w3, &one).unwrap().is_zero());
        assert_eq!(
            phi_sigma(&z2(), 2, &e(&[1]), &cls(&z2(), "x^[4]")).unwrap(),
            cls(&z2(), "x^[5]")
        );
        let dec = juxta(&e(&[1]), &e(&[3]));
        assert!(phi_sigma(&z2(), 4, &dec, &cls(&z2(), "x^[2]")).unwrap().is_zero());
        let b = cls(&z2(), "x^[6]");
        assert_eq!(phi_sigma(&z2(), 1, &e(&[]), &b).unwrap(), b);
        assert!(matches!(
            phi_sigma(&z2(), 4, &e(&[1]), &one),
            Err(OpError::WeightMismatch { .. })
        ));
        let w = crate::symhomology::iota_push(&DPMonomial::new(vec![2, 5]));
        assert!(w.as_generator().is_none());
        assert_eq!(phi_oword(&z2(), &w, &one).unwrap(), cls(&z2(), "x^[7]"));
        let w = OpInput::parse("o(1,2)").unwrap();
        assert_eq!(phi_input(&z2(), 4, &w, &one).unwrap(), cls(&z2(), "x^[3]"));
        assert!(phi_input(&z2(), 2, &w, &one).is_err());
    }

    fn juxta(a: &SymClass, b: &SymClass) -> SymClass {
        crate::symhomology::juxta_multiply(a, b)
    }

    #[test]
    fn composite_examples() {
        let one = CoefficientClass::unit(&z2());
        let e = |c: &[u32]| SymClass::e(c).unwrap();
        let e = |c: &[u32]| OpInput::Sym(e(c));
        let got = composite_op(&z2(), &[(2, e(&[1])), (2, e(&[2]))], &one).unwrap();
        assert_eq!(got, cls(&z2(), "x^[3]"));
        let got = composite_op(&z2(), &[(4, e(&[1, 1]))], &one).unwrap();
        assert_eq!(got, cls(&z2(), "x^[3]"));
        assert!(composite_op(&z2(), &[(2, e(&[1])), (2, e(&[1]))], &one).unwrap().is_zero());
    }

    #[test]
    fn witness_examples() {
        match nontrivial_witness(&z2(), 2, &vk(2, &[1, 2]), None).unwrap() {
            WitnessOutcome::Found { b, .. } => assert_eq!(b, CoefficientClass::unit(&z2())),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            nontrivial_witness(&z2(), 2, &vk(2, &[1, 3]), None).unwrap(),
            WitnessOutcome::CertifiedTrivial { .. }
        ));
        let su2 = GroupDescriptor::SU2;
        match nontrivial_witness(&su2, 1, &vk(1, &[5]), None).unwrap() {
            WitnessOutcome::Found { b, .. } => assert_eq!(b, CoefficientClass::unit(&su2)),
            other => panic!("{other:?}"),
        }
        let e2 = GroupDescriptor::Z2Power(2);
        assert!(matches!(
            nontrivial_witness(&e2, 2, &vk(2, &[3, 3]), Some(6)).unwrap(),
            WitnessOutcome::NotFound { .. }
        ));
    }

    #[test]
    fn basis_enumeration() {
        let g: GroupDescriptor = "(z2^2)x(su2)".parse().unwrap();
        assert_eq!(basis_in_degree(&g, 4).len(), 5 + 1);
        assert_eq!(basis_in_degree(&GroupDescriptor::Torus(2), 3).len(), 0);
        assert_eq!(basis_in_degree(&GroupDescriptor::Torus(2), 4).len(), 3);
    }

    #[test]
    fn coefficient_json() {
        let g: GroupDescriptor = "(z2^1)x(su2)".parse().unwrap();
        let c = cls(&g, "x^[3] | u1; x | u0");
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["group"], "(z2^1)x(su2)");
        let back: CoefficientClass = serde_json::from_value(j).unwrap();
        assert_eq!(back, c);
        assert_eq!(CoefficientClass::parse(&g, &c.to_string()).unwrap(), c);
    }

    fn monomials(k: usize, max_deg: u32) -> Vec<DPMonomial> {
        let mut out = Vec::new();
        for d in 0..=max_deg {
            let mut all = Vec::new();
            if k == 0 {
                if d == 0 {
                    out.push(DPMonomial::new(vec![]));
                }
                continue;
            }
            for_each_weak_composition(d, k, &mut Vec::new(), &mut all);
            out.extend(all.into_iter().map(DPMonomial::new));
        }
        out
    }

    #[test]
    fn elementary_fast_matches_bruteforce_small() {
        for l in 1..=2usize {
            let g = GroupDescriptor::Z2Power(l as u32);
            for k in 1..=2usize {
                for m in monomials(k, 7) {
                    let a = DPClass::from_monomials(&GeneratorSet::vk(k), [m]);
                    let fast = alpha(&g, k, &a, &CoefficientClass::unit(&g)).unwrap();
                    let slow = alpha_elementary_bruteforce(
                        l,
                        &a,
                        &DPClass::one(&GeneratorSet::indexed("t", l, 1)),
                    )
                    .unwrap();
                    assert_eq!(fast.as_dp().unwrap().relabel(slow.gens()).unwrap(), slow, "{a}");
                }
            }
        }
    }

    #[test]
    fn squares_vanish() {
        for l in 1..=3u32 {
            let g = GroupDescriptor::Z2Power(l);
            for n in 1..=6 {
                let a = vk(2, &[n, n]);
                for d in 0..=4 {
                    for t in basis_in_degree(&g, d) {
                        let b = CoefficientClass::from_terms(&g, [t]);
                        assert!(alpha(&g, 2, &a, &b).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn doubling() {
        for k in 1..=2usize {
            for l in 1..=3usize {
                for total in 1..=8u32 {
                    let mut rows = Vec::new();
                    compositions(total, k, 1, &mut rows, &mut Vec::new());
                    let mut cols = Vec::new();
                    compositions(total, l, 1, &mut cols, &mut Vec::new());
                    for r in &rows {
                        for c in &cols {
                            let r2: Vec<u32> = r.iter().map(|x| 2 * x).collect();
                            let c2: Vec<u32> = c.iter().map(|x| 2 * x).collect();
                            assert_eq!(a_count(&r2, &c2), a_count(r, c), "{r:?} {c:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn telescoping() {
        for n1 in 0..=64u64 {
            for n2 in 0..=64u64 {
                let lhs = (1..=n1 + 1).filter(|&i| binom_parity(n1 + n2 + 3, i)).count() % 2 == 1;
                let rhs = !binom_parity(n1 + n2 + 2, n1 + 1);
                assert_eq!(lhs, rhs, "n1={n1} n2={n2}");
            }
        }
    }

    fn group_strategy() -> impl Strategy<Value = GroupDescriptor> {
        proptest::sample::select(vec![
            "z2^1", "z2^2", "z2^3", "d6", "t^1", "t^2", "su2", "(z2^1)x(t^1)", "(su2)x(z2^2)",
        ])
        .prop_map(|s| s.parse().unwrap())
    }

    proptest! {
        #[test]
        fn degree_contract(g in group_strategy(), k in 0usize..=2, exps in proptest::collection::vec(0u32..8, 2), bdeg in 0u32..8) {
            let k = if g.supports(k) { k } else { 1 };
            let a = vk(k, &exps[..k]);
            for t in basis_in_degree(&g, bdeg) {
                let b = CoefficientClass::from_terms(&g, [t]);
                let out = alpha(&g, k, &a, &b).unwrap();
                if let Some(d) = out.degree() {
                    let shift = g.dim() * ((1u32 << k) - 1);
                    prop_assert_eq!(d, a.degree().unwrap() + bdeg + shift);
                }
                prop_assert!(out.is_zero() || out.degree().is_some());
            }
        }

        #[test]
        fn z2_is_multiplication(u in proptest::collection::vec(1u32..12, 1..=3), b in 0u32..10) {
            let a = vk(u.len(), &u);
            let x = GeneratorSet::single("x", 1);
            let out = alpha(&z2(), u.len(), &a, &cls(&z2(), &format!("x^[{b}]"))).unwrap();
            let mut expect = DPClass::monomial(&x, vec![b]);
            for &e in &u {
                expect = dp_multiply(&expect, &DPClass::monomial(&x, vec![e])).unwrap();
            }
            prop_assert_eq!(out.as_dp().unwrap(), expect);
        }

        #[test]
        fn product_rule_agrees_for_two_circles(n1 in 0u32..6, n2 in 0u32..6, b1 in 0u32..4, b2 in 0u32..4) {
            let t2 = GroupDescriptor::Torus(2);
            let prod: GroupDescriptor = "(t^1)x(t^1)".parse().unwrap();
            for (k, a) in [(1, vk(1, &[n1])), (2, vk(2, &[n1, n2]))] {
                let lhs = alpha(&t2, k, &a, &cls(&t2, &format!("y1^[{b1}]*y2^[{b2}]"))).unwrap();
                let rhs = alpha(&prod, k, &a, &cls(&prod, &format!("y^[{b1}] | y^[{b2}]"))).unwrap();
                let lhs: BTreeSet<Vec<u32>> = lhs.terms().map(|t| match &t[0] { BasisElt::Dp(m) => m.exps().to_vec(), _ => unreachable!() }).collect();
                let rhs: BTreeSet<Vec<u32>> = rhs.terms().map(|t| t.iter().map(|b| match b { BasisElt::Dp(m) => m.exps()[0], _ => unreachable!() }).collect()).collect();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
