//! Independent checks: finite group tables and actions, orbit/stabilizer
//! enumeration for the string action, bar-complex homology with induced maps
//! and transfers, the orbit-sum evaluation of `α^G_k` for finite `G`, and the
//! T³ double-complex identity behind the two-variable circle formula.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::f2core::{f2_rank_kernel, F2Matrix, F2Vec, Reducer};
use crate::gradedalg::{linear_push_to, AlgError, DPClass, DPMonomial, GeneratorSet};
use crate::operations::{GroupDescriptor, OpError};

/// Cap on enumerated (group element, set element) pairs and on bar cells.
pub const SIZE_BOUND: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} has size {size}, above the bound {bound}")]
    SizeBound {
        what: String,
        size: usize,
        bound: usize,
    },
    #[error("group axiom fails: {0}")]
    Axiom(String),
    #[error("action axiom fails: {0}")]
    ActionAxiom(String),
    #[error("stabilizer of orbit {0} does not project injectively")]
    NotInjective(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Op(#[from] OpError),
}

fn check_size(what: &str, size: usize) -> Result<(), OracleError> {
    if size > SIZE_BOUND {
        Err(OracleError::SizeBound {
            what: what.to_string(),
            size,
            bound: SIZE_BOUND,
        })
    } else {
        Ok(())
    }
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    name: String,
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
}

impl FiniteGroupTable {
    /// Builds a group from a row-major table. Associativity is checked for
    /// order ≤ 200; identity and inverses are always checked.
    pub fn from_table(name: &str, order: usize, mul: Vec<usize>) -> Result<Self, OracleError> {
        if order == 0 || mul.len() != order * order || mul.iter().any(|&x| x >= order) {
            return Err(OracleError::Axiom(format!("{name}: malformed table")));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul[e * order + g] == g && mul[g * order + e] == g))
            .ok_or_else(|| OracleError::Axiom(format!("{name}: no identity")))?;
        let mut inv = Vec::with_capacity(order);
        for g in 0..order {
            let h = (0..order)
                .find(|&h| mul[g * order + h] == identity && mul[h * order + g] == identity)
                .ok_or_else(|| OracleError::Axiom(format!("{name}: {g} has no inverse")))?;
            inv.push(h);
        }
        if order <= 200 {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul[a * order + b];
                    for c in 0..order {
                        if mul[ab * order + c] != mul[a * order + mul[b * order + c]] {
                            return Err(OracleError::Axiom(format!(
                                "{name}: ({a}·{b})·{c} ≠ {a}·({b}·{c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(FiniteGroupTable {
            name: name.to_string(),
            order,
            mul,
            identity,
            inv,
        })
    }

    fn build(name: &str, order: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let mul = (0..order * order).map(|i| f(i / order, i % order)).collect();
        FiniteGroupTable::from_table(name, order, mul).expect("valid construction")
    }

    pub fn trivial() -> Self {
        FiniteGroupTable::build("1", 1, |_, _| 0)
    }

    /// `(Z/2)^l`; element `i` is the bit vector of `i`.
    pub fn z2_power(l: u32) -> Self {
        FiniteGroupTable::build(&format!("z2^{l}"), 1 << l, |a, b| a ^ b)
    }

    /// `D_{4n+2} = ⟨r, s⟩`; element `e·m + i` is `r^i s^e` with `m = 2n+1`.
    pub fn dihedral(n: u32) -> Self {
        let m = 2 * n as usize + 1;
        FiniteGroupTable::build(&format!("d{}", 2 * m), 2 * m, |a, b| {
            let (ea, ia) = (a / m, a % m);
            let (eb, ib) = (b / m, b % m);
            let i = if ea == 0 { ia + ib } else { ia + m - ib };
            ((ea + eb) % 2) * m + i % m
        })
    }

    /// `A × B`; element `a·|B| + b` is `(a, b)`.
    pub fn product(a: &FiniteGroupTable, b: &FiniteGroupTable) -> Self {
        let nb = b.order;
        FiniteGroupTable::build(&format!("({})x({})", a.name, b.name), a.order * nb, |x, y| {
            a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)
        })
    }

    /// The finite group described by `g`, if it is finite.
    pub fn from_descriptor(g: &GroupDescriptor) -> Result<Self, OracleError> {
        match g {
            GroupDescriptor::Z2Power(l) => Ok(FiniteGroupTable::z2_power(*l)),
            GroupDescriptor::Dihedral(n) => Ok(FiniteGroupTable::dihedral(*n)),
            GroupDescriptor::Product(fs) => {
                let mut acc = FiniteGroupTable::from_descriptor(&fs[0])?;
                for f in &fs[1..] {
                    acc = FiniteGroupTable::product(&acc, &FiniteGroupTable::from_descriptor(f)?);
                }
                Ok(acc)
            }
            _ => Err(OracleError::Unsupported(format!("{g} is not finite"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_elementary_abelian_2(&self) -> bool {
        self.is_abelian() && (0..self.order).all(|a| self.mul(a, a) == self.identity)
    }

    pub fn involutions(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| g != self.identity && self.mul(g, g) == self.identity)
            .collect()
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All subgroups generated by at most two elements, plus the whole group.
    pub fn small_subgroups(&self) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        out.insert((0..self.order).collect::<Vec<_>>());
        for a in 0..self.order {
            for b in a..self.order {
                out.insert(self.closure(&[a, b]));
            }
        }
        out.into_iter().collect()
    }

    /// The subgroup on `elems` as a table, with its embedding.
    pub fn subgroup_table(&self, elems: &[usize]) -> Result<(FiniteGroupTable, Vec<usize>), OracleError> {
        let pos: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let mut mul = Vec::with_capacity(elems.len() * elems.len());
        for &a in elems {
            for &b in elems {
                let p = pos
                    .get(&self.mul(a, b))
                    .ok_or_else(|| OracleError::Invalid("not closed under multiplication".into()))?;
                mul.push(*p);
            }
        }
        let sub = FiniteGroupTable::from_table(&format!("sub({})", self.name), elems.len(), mul)?;
        Ok((sub, elems.to_vec()))
    }

    pub fn is_homomorphism(&self, target: &FiniteGroupTable, map: &[usize]) -> bool {
        map.len() == self.order
            && (0..self.order).all(|a| {
                (0..self.order).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b]))
            })
    }
}

/// A finite group acting on `{0, …, set_size − 1}` on the left.
#[derive(Debug, Clone)]
pub struct FiniteAction {
    group: FiniteGroupTable,
    set_size: usize,
    table: Vec<usize>,
}

/// One orbit of a [`FiniteAction`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: usize,
    pub size: usize,
    pub stabilizer: Vec<usize>,
}

impl FiniteAction {
    pub fn new(
        group: FiniteGroupTable,
        set_size: usize,
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, OracleError> {
        check_size("action table", group.order * set_size)?;
        let n = group.order;
        let table: Vec<usize> = (0..n * set_size).map(|i| act(i / set_size, i % set_size)).collect();
        if table.iter().any(|&y| y >= set_size) {
            return Err(OracleError::ActionAxiom("image outside the set".into()));
        }
        let action = FiniteAction {
            group,
            set_size,
            table,
        };
        let e = action.group.identity;
        if (0..set_size).any(|x| action.act(e, x) != x) {
            return Err(OracleError::ActionAxiom("identity moves a point".into()));
        }
        if n * n * set_size <= 50 * SIZE_BOUND {
            for g in 0..n {
                for h in 0..n {
                    let gh = action.group.mul(g, h);
                    for x in 0..set_size {
                        if action.act(gh, x) != action.act(g, action.act(h, x)) {
                            return Err(OracleError::ActionAxiom(format!("(g·h)·{x} ≠ g·(h·{x})")));
                        }
                    }
                }
            }
        }
        Ok(action)
    }

    pub fn group(&self) -> &FiniteGroupTable {
        &self.group
    }

    pub fn set_size(&self) -> usize {
        self.set_size
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g * self.set_size + x]
    }

    /// All orbits, representatives being least elements.
    pub fn orbits(&self) -> Vec<Orbit> {
        let mut seen = vec![false; self.set_size];
        let mut out = Vec::new();
        for x in 0..self.set_size {
            if seen[x] {
                continue;
            }
            let mut size = 0;
            let mut stabilizer = Vec::new();
            for g in 0..self.group.order {
                let y = self.act(g, x);
                if y == x {
                    stabilizer.push(g);
                }
                if !seen[y] {
                    seen[y] = true;
                    size += 1;
                }
            }
            out.push(Orbit {
                representative: x,
                size,
                stabilizer,
            });
        }
        out
    }
}

/// The action of `Γ = V_k × G^{p} × G^{q}` on `G^{V_k}` by
/// `(u, g_p, g_q)·(g_v)_v = (g_p g_{u+v} g_q^{-1})_v`.
#[derive(Debug, Clone)]
pub struct StringAction {
    pub g: FiniteGroupTable,
    pub k: usize,
    pub action: FiniteAction,
}

/// An orbit of the string action with its projected stabilizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StringOrbit {
    pub representative: Vec<usize>,
    pub size: usize,
    /// Stabilizer elements `(u, g_p, g_q)`.
    pub stabilizer: Vec<(usize, usize, usize)>,
    /// Projection of the stabilizer to `V_k × G^{p}`.
    pub image: Vec<(usize, usize)>,
    /// Index of the projected image in `V_k × G^{p}`.
    pub image_index: usize,
}

impl StringOrbit {
    pub fn odd_index(&self) -> bool {
        self.image_index % 2 == 1
    }
}

impl StringAction {
    pub fn new(g: &FiniteGroupTable, k: usize) -> Result<Self, OracleError> {
        let n = g.order();
        let points = 1usize << k;
        let set_size = n
            .checked_pow(points as u32)
            .filter(|&s| s <= SIZE_BOUND)
            .ok_or_else(|| OracleError::SizeBound {
                what: format!("{}^(2^{k})", g.name()),
                size: usize::MAX,
                bound: SIZE_BOUND,
            })?;
        let gamma = FiniteGroupTable::product(
            &FiniteGroupTable::product(&FiniteGroupTable::z2_power(k as u32), g),
            g,
        );
        check_size("string action", gamma.order() * set_size)?;
        let gg = g.clone();
        let action = FiniteAction::new(gamma, set_size, move |el, x| {
            let (u, gp, gq) = (el / (n * n), el / n % n, el % n);
            let tuple = decode_tuple(x, n, points);
            let gqi = gg.inv(gq);
            let out: Vec<usize> = (0..points)
                .map(|v| gg.mul(gg.mul(gp, tuple[u ^ v]), gqi))
                .collect();
            encode_tuple(&out, n)
        })?;
        Ok(StringAction {
            g: g.clone(),
            k,
            action,
        })
    }

    pub fn decode_element(&self, el: usize) -> (usize, usize, usize) {
        let n = self.g.order();
        (el / (n * n), el / n % n, el % n)
    }

    pub fn decode_point(&self, x: usize) -> Vec<usize> {
        decode_tuple(x, self.g.order(), 1 << self.k)
    }
}

fn decode_tuple(mut x: usize, n: usize, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| {
            let d = x % n;
            x /= n;
            d
        })
        .collect()
}

fn encode_tuple(t: &[usize], n: usize) -> usize {
    t.iter().rev().fold(0, |acc, &d| acc * n + d)
}

/// Orbits of the string action, each with its stabilizer projected to
/// `V_k × G^{p}`. Errors if some stabilizer fails to project injectively.
pub fn action_orbits(sa: &StringAction) -> Result<Vec<StringOrbit>, OracleError> {
    let n = sa.g.order();
    let full = (1usize << sa.k) * n;
    let mut out = Vec::new();
    for (i, orbit) in sa.action.orbits().into_iter().enumerate() {
        let stabilizer: Vec<(usize, usize, usize)> =
            orbit.stabilizer.iter().map(|&el| sa.decode_element(el)).collect();
        let image: BTreeSet<(usize, usize)> = stabilizer.iter().map(|&(u, gp, _)| (u, gp)).collect();
        if image.len() != stabilizer.len() {
            return Err(OracleError::NotInjective(i));
        }
        out.push(StringOrbit {
            representative: sa.decode_point(orbit.representative),
            size: orbit.size,
            image_index: full / image.len(),
            image: image.into_iter().collect(),
            stabilizer,
        });
    }
    Ok(out)
}

/// The based variant: `V_k × G^{p}` acting on `G^{V_k}/ΔG`, with classes
/// normalized so that the entry at `v = 0` is the identity.
pub fn based_string_action(g: &FiniteGroupTable, k: usize) -> Result<FiniteAction, OracleError> {
    let n = g.order();
    let points = 1usize << k;
    let free = n
        .checked_pow(points as u32 - 1)
        .filter(|&s| s <= SIZE_BOUND)
        .ok_or_else(|| OracleError::SizeBound {
            what: "based string set".into(),
            size: usize::MAX,
            bound: SIZE_BOUND,
        })?;
    let group = FiniteGroupTable::product(&FiniteGroupTable::z2_power(k as u32), g);
    let gg = g.clone();
    let e = g.identity();
    FiniteAction::new(group, free, move |el, x| {
        let (u, gp) = (el / n, el % n);
        let mut tuple = vec![e];
        tuple.extend(decode_tuple(x, n, points - 1));
        let moved: Vec<usize> = (0..points).map(|v| gg.mul(gp, tuple[u ^ v])).collect();
        let norm = gg.inv(moved[0]);
        let normalized: Vec<usize> = moved[1..].iter().map(|&h| gg.mul(h, norm)).collect();
        encode_tuple(&normalized, n)
    })
}

/// A bounded chain complex of finite-dimensional F2-vector spaces.
#[derive(Debug, Clone)]
pub struct ChainComplexF2 {
    dims: Vec<usize>,
    /// `boundaries[n]: C_n → C_{n−1}`; `boundaries[0]` is `0 × dims[0]`.
    boundaries: Vec<F2Matrix>,
}

impl ChainComplexF2 {
    /// Checks shapes and `d∘d = 0`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<F2Matrix>) -> Result<Self, OracleError> {
        if boundaries.len() != dims.len() {
            return Err(OracleError::Invalid("one boundary per degree".into()));
        }
        for (n, d) in boundaries.iter().enumerate() {
            let rows = if n == 0 { 0 } else { dims[n - 1] };
            if d.rows() != rows || d.cols() != dims[n] {
                return Err(OracleError::Invalid(format!("boundary {n} has the wrong shape")));
            }
            if n >= 2 && !boundaries[n - 1].mul(d).is_zero() {
                return Err(OracleError::Invalid(format!("d∘d ≠ 0 in degree {n}")));
            }
        }
        Ok(ChainComplexF2 { dims, boundaries })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn boundary(&self, n: usize) -> &F2Matrix {
        &self.boundaries[n]
    }

    /// Betti numbers in every degree, treating the complex as ending at the top.
    pub fn betti(&self) -> Vec<usize> {
        (0..self.dims.len())
            .map(|n| {
                let ker = self.dims[n] - self.boundaries[n].rank();
                let im = if n < self.top() { self.boundaries[n + 1].rank() } else { 0 };
                ker - im
            })
            .collect()
    }

    /// Homology of degree `n` with representative cycles and a reducer for
    /// computing coordinates.
    pub fn homology(&self, n: usize) -> HomologyData {
        let (_, kernel) = f2_rank_kernel(&self.boundaries[n]);
        let mut reducer = Reducer::new(self.dims[n], kernel.len());
        if n < self.top() {
            let d = &self.boundaries[n + 1];
            for j in 0..d.cols() {
                reducer.insert(&d.column(j), None);
            }
        }
        let mut reps = Vec::new();
        let mut marks = Vec::new();
        for (i, z) in kernel.iter().enumerate() {
            if reducer.insert(z, Some(i)) {
                marks.push(i);
                reps.push(z.clone());
            }
        }
        HomologyData {
            reps,
            marks,
            reducer,
        }
    }
}

/// Homology of one degree of a [`ChainComplexF2`].
#[derive(Debug, Clone)]
pub struct HomologyData {
    pub reps: Vec<F2Vec>,
    marks: Vec<usize>,
    reducer: Reducer,
}

impl HomologyData {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of a cycle in the basis `reps`.
    pub fn coordinates(&self, z: &F2Vec) -> Result<F2Vec, OracleError> {
        let (res, tag) = self.reducer.reduce(z);
        if !res.is_zero() {
            return Err(OracleError::Invalid("not a cycle".into()));
        }
        let mut out = F2Vec::zeros(self.reps.len());
        for (pos, &m) in self.marks.iter().enumerate() {
            if tag.get(m) {
                out.set(pos, true);
            }
        }
        Ok(out)
    }
}

/// The normalized bar complex of a finite group with F2 coefficients,
/// truncated at `top`. Cells of degree `d` are `d`-tuples of non-identity
/// elements.
#[derive(Debug, Clone)]
pub struct BarComplex {
    group: FiniteGroupTable,
    nonid: Vec<usize>,
    slot: Vec<Option<usize>>,
    complex: ChainComplexF2,
}

impl BarComplex {
    pub fn new(group: &FiniteGroupTable, top: usize) -> Result<Self, OracleError> {
        let nonid: Vec<usize> = (0..group.order()).filter(|&g| g != group.identity()).collect();
        let mut slot = vec![None; group.order()];
        for (i, &g) in nonid.iter().enumerate() {
            slot[g] = Some(i);
        }
        let b = nonid.len();
        let mut dims = Vec::new();
        for d in 0..=top {
            let cells = b
                .checked_pow(d as u32)
                .filter(|&c| c <= SIZE_BOUND)
                .ok_or_else(|| OracleError::SizeBound {
                    what: format!("bar complex of {} in degree {d}", group.name()),
                    size: usize::MAX,
                    bound: SIZE_BOUND,
                })?;
            dims.push(cells);
        }
        let mut bar = BarComplex {
            group: group.clone(),
            nonid,
            slot,
            complex: ChainComplexF2 {
                dims: dims.clone(),
                boundaries: Vec::new(),
            },
        };
        let mut boundaries = vec![F2Matrix::zeros(0, dims[0])];
        for d in 1..=top {
            let mut m = F2Matrix::zeros(dims[d - 1], dims[d]);
            for j in 0..dims[d] {
                for i in bar.boundary_of_cell(&bar.cell(d, j)) {
                    m.flip(i, j);
                }
            }
            boundaries.push(m);
        }
        bar.complex = ChainComplexF2::new(dims, boundaries)?;
        Ok(bar)
    }

    pub fn group(&self) -> &FiniteGroupTable {
        &self.group
    }

    pub fn complex(&self) -> &ChainComplexF2 {
        &self.complex
    }

    pub fn cell(&self, d: usize, mut idx: usize) -> Vec<usize> {
        let b = self.nonid.len();
        let mut out = vec![0; d];
        for slot in out.iter_mut().rev() {
            *slot = self.nonid[idx % b];
            idx /= b;
        }
        out
    }

    /// Index of a cell, or `None` if it is degenerate.
    pub fn cell_index(&self, cell: &[usize]) -> Option<usize> {
        let b = self.nonid.len();
        cell.iter().try_fold(0, |acc, &g| Some(acc * b + self.slot[g]?))
    }

    fn boundary_of_cell(&self, cell: &[usize]) -> Vec<usize> {
        let d = cell.len();
        let mut faces = Vec::with_capacity(d + 1);
        faces.push(cell[1..].to_vec());
        for i in 0..d - 1 {
            let mut f = cell[..i].to_vec();
            f.push(self.group.mul(cell[i], cell[i + 1]));
            f.extend_from_slice(&cell[i + 2..]);
            faces.push(f);
        }
        faces.push(cell[..d - 1].to_vec());
        faces.iter().filter_map(|f| self.cell_index(f)).collect()
    }
}

/// How [`bar_homology`] obtained its dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HomologyMethod {
    Bar,
    /// Divided-power resolution of an elementary abelian 2-group; no cycle
    /// representatives.
    MinimalResolution,
}

/// `H_n(BG; F2)` for `n ≤ max_degree`.
#[derive(Debug, Clone)]
pub struct BarHomology {
    pub method: HomologyMethod,
    pub dims: Vec<usize>,
    bar: Option<BarComplex>,
    degrees: Vec<HomologyData>,
}

impl BarHomology {
    pub fn bar(&self) -> Option<&BarComplex> {
        self.bar.as_ref()
    }

    pub fn degree(&self, n: usize) -> Option<&HomologyData> {
        self.degrees.get(n)
    }
}

pub fn bar_homology(g: &FiniteGroupTable, max_degree: usize) -> Result<BarHomology, OracleError> {
    match BarComplex::new(g, max_degree + 1) {
        Ok(bar) => {
            let degrees: Vec<HomologyData> =
                (0..=max_degree).map(|n| bar.complex().homology(n)).collect();
            Ok(BarHomology {
                method: HomologyMethod::Bar,
                dims: degrees.iter().map(HomologyData::dim).collect(),
                bar: Some(bar),
                degrees,
            })
        }
        Err(e @ OracleError::SizeBound { .. }) => {
            if !g.is_elementary_abelian_2() {
                return Err(e);
            }
            let m = g.order().trailing_zeros() as usize;
            Ok(BarHomology {
                method: HomologyMethod::MinimalResolution,
                dims: koszul_coinvariant_dims(m, max_degree),
                bar: None,
                degrees: Vec::new(),
            })
        }
        Err(e) => Err(e),
    }
}

/// Matrix of `φ_*: H_d(BΓ) → H_d(BΓ')` for a homomorphism `φ`.
pub fn induced_map(
    src: &BarHomology,
    dst: &BarHomology,
    hom: &[usize],
    degree: usize,
) -> Result<F2Matrix, OracleError> {
    let (sb, db) = match (&src.bar, &dst.bar) {
        (Some(s), Some(d)) => (s, d),
        _ => return Err(OracleError::Unsupported("induced maps need bar homology".into())),
    };
    if !sb.group().is_homomorphism(db.group(), hom) {
        return Err(OracleError::Invalid("map is not a homomorphism".into()));
    }
    let (hs, hd) = (&src.degrees[degree], &dst.degrees[degree]);
    let cols: Vec<F2Vec> = hs
        .reps
        .iter()
        .map(|z| {
            let mut image = F2Vec::zeros(db.complex().dims()[degree]);
            for j in z.ones() {
                let cell: Vec<usize> = sb.cell(degree, j).iter().map(|&g| hom[g]).collect();
                if let Some(i) = db.cell_index(&cell) {
                    image.flip(i);
                }
            }
            hd.coordinates(&image)
        })
        .collect::<Result<_, _>>()?;
    Ok(F2Matrix::from_columns(hd.dim(), &cols))
}

/// Chain-level transfer from `Γ` to a subgroup `H` on the normalized bar
/// complexes, with least coset representatives as section.
#[derive(Debug, Clone)]
pub struct Transfer {
    pub gamma: FiniteGroupTable,
    pub sub: FiniteGroupTable,
    /// `embedding[i]` is the element of `Γ` for element `i` of `H`.
    pub embedding: Vec<usize>,
    /// Least representative of each right coset `Hg`, indexed by `g`.
    rho: Vec<usize>,
    reps: Vec<usize>,
    to_sub: Vec<Option<usize>>,
}

impl Transfer {
    pub fn new(gamma: &FiniteGroupTable, h: &[usize]) -> Result<Self, OracleError> {
        let (sub, embedding) = gamma.subgroup_table(h)?;
        let mut to_sub = vec![None; gamma.order()];
        for (i, &g) in embedding.iter().enumerate() {
            to_sub[g] = Some(i);
        }
        let rho: Vec<usize> = (0..gamma.order())
            .map(|g| h.iter().map(|&x| gamma.mul(x, g)).min().unwrap())
            .collect();
        let reps: BTreeSet<usize> = rho.iter().copied().collect();
        Ok(Transfer {
            gamma: gamma.clone(),
            sub,
            embedding,
            rho,
            reps: reps.into_iter().collect(),
            to_sub,
        })
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }

    /// Transfer of one bar cell, as a list of (possibly repeated) `H`-cells.
    pub fn transfer_cell(&self, cell: &[usize]) -> Vec<Vec<usize>> {
        let g = &self.gamma;
        self.reps
            .iter()
            .map(|&t| {
                let mut cur = t;
                cell.iter()
                    .map(|&gi| {
                        let x = g.mul(cur, gi);
                        let next = self.rho[x];
                        let h = g.mul(x, g.inv(next));
                        cur = next;
                        self.to_sub[h].expect("coset section lands in H")
                    })
                    .collect()
            })
            .collect()
    }

    /// Transfer of a chain of `Γ`'s bar complex into `H`'s.
    pub fn transfer_chain(
        &self,
        src: &BarComplex,
        dst: &BarComplex,
        degree: usize,
        chain: &F2Vec,
    ) -> F2Vec {
        let mut out = F2Vec::zeros(dst.complex().dims()[degree]);
        for j in chain.ones() {
            for c in self.transfer_cell(&src.cell(degree, j)) {
                if let Some(i) = dst.cell_index(&c) {
                    out.flip(i);
                }
            }
        }
        out
    }
}

/// The transfer `H_d(BΓ) → H_d(BH)` together with the inclusion `H → Γ`.
#[derive(Debug, Clone)]
pub struct TransferMap {
    pub matrix: F2Matrix,
    pub inclusion: F2Matrix,
    pub index: usize,
}

/// Transfer on bar homology in the given degree. Asserts that composing
/// with the induced map of the inclusion is multiplication by the index.
pub fn transfer_map(
    gamma: &FiniteGroupTable,
    h: &[usize],
    degree: usize,
) -> Result<TransferMap, OracleError> {
    let tr = Transfer::new(gamma, h)?;
    let hg = bar_homology(gamma, degree)?;
    let hh = bar_homology(&tr.sub, degree)?;
    let (bg, bh) = match (hg.bar(), hh.bar()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(OracleError::Unsupported("transfer needs bar homology".into())),
    };
    let (dg, dh) = (&hg.degrees[degree], &hh.degrees[degree]);
    let cols: Vec<F2Vec> = dg
        .reps
        .iter()
        .map(|z| dh.coordinates(&tr.transfer_chain(bg, bh, degree, z)))
        .collect::<Result<_, _>>()?;
    let matrix = F2Matrix::from_columns(dh.dim(), &cols);
    let inclusion = induced_map(&hh, &hg, &tr.embedding, degree)?;
    let composite = inclusion.mul(&matrix);
    let expected = if tr.index() % 2 == 1 {
        F2Matrix::identity(dg.dim())
    } else {
        F2Matrix::zeros(dg.dim(), dg.dim())
    };
    if composite != expected {
        return Err(OracleError::Invalid(format!(
            "i_*∘tr ≠ [Γ:H] in degree {degree}"
        )));
    }
    Ok(TransferMap {
        matrix,
        inclusion,
        index: tr.index(),
    })
}

/// Orbit data for evaluating `α^G_k` as a sum over orbits.
#[derive(Debug, Clone)]
pub struct Compsum {
    pub k: usize,
    pub orbits: Vec<StringOrbit>,
    /// For each odd-index orbit, the linear map `V_k × Z/2 → Z/2` it contributes.
    pub contributions: Vec<Vec<bool>>,
}

impl Compsum {
    /// Requires `|G| ≡ 2 mod 4`, so a Sylow 2-subgroup is `⟨s⟩` of order 2.
    pub fn new(g: &FiniteGroupTable, k: usize) -> Result<Self, OracleError> {
        if g.order() % 4 != 2 {
            return Err(OracleError::Unsupported(format!(
                "{} needs a Sylow 2-subgroup of order 2",
                g.name()
            )));
        }
        let s = g.involutions()[0];
        let sa = StringAction::new(g, k)?;
        let orbits = action_orbits(&sa)?;
        let e = g.identity();
        let mut contributions = Vec::new();
        for o in orbits.iter().filter(|o| o.odd_index()) {
            let phi: BTreeMap<(usize, usize), usize> =
                o.stabilizer.iter().map(|&(u, gp, gq)| ((u, gp), gq)).collect();
            // A Sylow 2-subgroup V_k × ⟨s'⟩ inside the projected stabilizer.
            let s_prime = g
                .involutions()
                .into_iter()
                .find(|&sp| (0..1usize << k).all(|v| phi.contains_key(&(v, e)) && phi.contains_key(&(v, sp))))
                .ok_or_else(|| OracleError::Invalid("odd-index image without a Sylow subgroup".into()))?;
            let mut psi: Vec<usize> = (0..k).map(|j| phi[&(1 << j, e)]).collect();
            psi.push(phi[&(0, s_prime)]);
            let nontrivial: BTreeSet<usize> = psi.iter().copied().filter(|&x| x != e).collect();
            if let Some(&c) = nontrivial.iter().next() {
                if nontrivial.len() > 1 || g.mul(c, c) != e {
                    return Err(OracleError::Invalid("ψ does not land in a subgroup of order 2".into()));
                }
                // Conjugating ⟨c⟩ onto ⟨s⟩ acts trivially on homology.
                (0..g.order())
                    .find(|&gamma| g.mul(g.mul(gamma, c), g.inv(gamma)) == s)
                    .ok_or_else(|| OracleError::Invalid("involution not conjugate to s".into()))?;
            }
            contributions.push(psi.iter().map(|&x| x != e).collect());
        }
        Ok(Compsum {
            k,
            orbits,
            contributions,
        })
    }

    pub fn odd_index_orbits(&self) -> usize {
        self.contributions.len()
    }

    /// `Σ_orbits L_*(a ⊗ b)`, with `b` and the result over the single
    /// generator `x` of `H_*(B⟨s⟩) ≅ H_*(BG)`.
    pub fn evaluate(&self, a: &DPClass, b: &DPClass) -> Result<DPClass, OracleError> {
        let k = self.k;
        if a.gens().len() != k || b.gens().len() != 1 {
            return Err(OracleError::Invalid("expected a over V_k and b over one generator".into()));
        }
        let gens = GeneratorSet::vk(k + 1);
        let ab = DPClass::from_monomials(
            &gens,
            a.terms()
                .flat_map(|m| b.terms().map(move |n| m.concat(n))),
        );
        let x = GeneratorSet::single("x", 1);
        let mut sum = DPClass::zero(&x);
        for row in &self.contributions {
            let mut l = F2Matrix::zeros(1, k + 1);
            for (j, &bit) in row.iter().enumerate() {
                l.set(0, j, bit);
            }
            sum.add_assign(&linear_push_to(&l, &ab, &x)?)?;
        }
        Ok(sum)
    }
}

/// `α^G_k(a ⊗ b)` for finite `G` of order `2 mod 4`, summed over the orbits
/// of the string action with odd-index projected stabilizer.
pub fn compsum_alpha(
    g: &FiniteGroupTable,
    k: usize,
    a: &DPClass,
    b: &DPClass,
) -> Result<DPClass, OracleError> {
    Compsum::new(g, k)?.evaluate(a, b)
}

/// Number of orbits whose projected stabilizer has odd index.
pub fn orbit_census(g: &FiniteGroupTable, k: usize) -> Result<usize, OracleError> {
    let sa = StringAction::new(g, k)?;
    Ok(action_orbits(&sa)?.iter().filter(|o| o.odd_index()).count())
}

/// Multiplication in `F2[V_m]`, elements as bit masks over `0..2^m`.
pub fn group_ring_mul(a: u64, b: u64) -> u64 {
    let mut out = 0;
    for g in 0..64 {
        if a >> g & 1 == 1 {
            for h in 0..64 {
                if b >> h & 1 == 1 {
                    out ^= 1 << (g ^ h);
                }
            }
        }
    }
    out
}

fn monomials_of_degree(m: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(m: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == m {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=d {
            cur.push(v);
            go(m, d - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(m, d, &mut Vec::new(), &mut out);
    out
}

/// The free `F2[V_m]`-resolution `F_*` of F2: divided powers in `X_1…X_m`
/// with `d(X^[k]) = Σ_i t_i X^[k − e_i]`, `t_i = 1 + x_i`, expanded to an
/// F2 chain complex up to degree `top`.
pub fn koszul_resolution(m: usize, top: usize) -> Result<ChainComplexF2, OracleError> {
    if m > 6 {
        return Err(OracleError::Unsupported("group ring masks hold at most V_6".into()));
    }
    let ring = 1usize << m;
    let basis: Vec<Vec<Vec<u32>>> = (0..=top).map(|d| monomials_of_degree(m, d as u32)).collect();
    let dims: Vec<usize> = basis.iter().map(|b| b.len() * ring).collect();
    let mut boundaries = vec![F2Matrix::zeros(0, dims[0])];
    for d in 1..=top {
        let index: BTreeMap<&Vec<u32>, usize> =
            basis[d - 1].iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut mat = F2Matrix::zeros(dims[d - 1], dims[d]);
        for (j, e) in basis[d].iter().enumerate() {
            for g in 0..ring {
                for i in 0..m {
                    if e[i] == 0 {
                        continue;
                    }
                    let mut f = e.clone();
                    f[i] -= 1;
                    let t = 1u64 | 1 << (1 << i);
                    let coeff = group_ring_mul(t, 1 << g);
                    for h in 0..ring {
                        if coeff >> h & 1 == 1 {
                            mat.flip(index[&f] * ring + h, j * ring + g);
                        }
                    }
                }
            }
        }
        boundaries.push(mat);
    }
    ChainComplexF2::new(dims, boundaries)
}

/// `dim H_n(BV_m; F2) = C(n + m − 1, m − 1)`, read off `F_* ⊗_{V_m} F2`
/// where the differential vanishes.
pub fn koszul_coinvariant_dims(m: usize, max_degree: usize) -> Vec<usize> {
    (0..=max_degree).map(|d| monomials_of_degree(m, d as u32).len()).collect()
}

/// Cells of the `V_2`-CW structure on `T³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum T3Cell {
    Cube,
    Top,
    Front,
    Right,
    E1,
    E1p,
    E2,
    E2p,
    E3,
    E3p,
    V1,
    VEta,
    VTheta,
    VZeta,
}

const ONE: u8 = 1;
const X1: u8 = 1 << 1;
const X2: u8 = 1 << 2;
const X12: u8 = 1 << 3;
const T1: u8 = ONE | X1;
const T2: u8 = ONE | X2;

fn ring4(a: u8, b: u8) -> u8 {
    group_ring_mul(u64::from(a), u64::from(b)) as u8
}

impl T3Cell {
    pub const ALL: [T3Cell; 14] = [
        T3Cell::Cube,
        T3Cell::Top,
        T3Cell::Front,
        T3Cell::Right,
        T3Cell::E1,
        T3Cell::E1p,
        T3Cell::E2,
        T3Cell::E2p,
        T3Cell::E3,
        T3Cell::E3p,
        T3Cell::V1,
        T3Cell::VEta,
        T3Cell::VTheta,
        T3Cell::VZeta,
    ];

    pub fn degree(self) -> usize {
        use T3Cell::*;
        match self {
            Cube => 3,
            Top | Front | Right => 2,
            E1 | E1p | E2 | E2p | E3 | E3p => 1,
            V1 | VEta | VTheta | VZeta => 0,
        }
    }

    // The element of V_2 acting trivially on the cell, if any; vertices are fixed by all of V_2.
    fn fixed_by(self) -> Option<usize> {
        use T3Cell::*;
        match self {
            E1 | E1p => Some(1),
            E2 | E2p => Some(2),
            E3 | E3p => Some(3),
            _ => None,
        }
    }

    fn is_vertex(self) -> bool {
        self.degree() == 0
    }

    /// Canonical form of `r·cell` for `r ∈ F2[V_2]`.
    fn canon(self, r: u8) -> u8 {
        if self.is_vertex() {
            return (r.count_ones() % 2) as u8;
        }
        match self.fixed_by() {
            None => r,
            Some(w) => {
                let mut out = 0;
                for g in 0..4usize {
                    if g < g ^ w {
                        let bit = (r >> g ^ r >> (g ^ w)) & 1;
                        out |= bit << g;
                    }
                }
                out
            }
        }
    }

    /// F2-basis of the cell's module, as canonical single-element masks.
    fn f2_basis(self) -> Vec<u8> {
        (0..4).map(|g| 1u8 << g).filter(|&m| self.canon(m) == m).collect()
    }

    fn boundary(self) -> Vec<(T3Cell, u8)> {
        use T3Cell::*;
        match self {
            Cube => vec![(Top, ONE | X12), (Front, ONE | X2), (Right, ONE | X1)],
            Top => vec![(E1, X2), (E1p, ONE), (E2, X1), (E2p, X1)],
            Front => vec![(E1, X2), (E1p, X2), (E3, X1), (E3p, X1)],
            Right => vec![(E2, X1), (E2p, ONE), (E3, X1), (E3p, ONE)],
            E1 => vec![(V1, ONE), (VEta, ONE)],
            E1p => vec![(VTheta, ONE), (VZeta, ONE)],
            E2 => vec![(V1, ONE), (VTheta, ONE)],
            E2p => vec![(VEta, ONE), (VZeta, ONE)],
            E3 => vec![(V1, ONE), (VZeta, ONE)],
            E3p => vec![(VEta, ONE), (VTheta, ONE)],
            V1 | VEta | VTheta | VZeta => Vec::new(),
        }
    }
}

/// A chain of `C_*(T³)`: a group-ring coefficient per cell.
pub type T3Chain = BTreeMap<T3Cell, u8>;

fn add_c(chain: &mut T3Chain, cell: T3Cell, r: u8) {
    let v = cell.canon(chain.get(&cell).copied().unwrap_or(0) ^ cell.canon(r));
    if v == 0 {
        chain.remove(&cell);
    } else {
        chain.insert(cell, v);
    }
}

pub fn t3_boundary(c: &T3Chain) -> T3Chain {
    let mut out = T3Chain::new();
    for (&cell, &r) in c {
        for (face, coeff) in cell.boundary() {
            add_c(&mut out, face, ring4(r, coeff));
        }
    }
    out
}

/// A chain of `Tot(F_* ⊗_{V_2} C_*)`: coefficient of `X_1^[m1] X_2^[m2] ⊗ cell`.
pub type TotChain = BTreeMap<(u32, u32, T3Cell), u8>;

fn add_t(chain: &mut TotChain, key: (u32, u32, T3Cell), r: u8) {
    let cell = key.2;
    let v = cell.canon(chain.get(&key).copied().unwrap_or(0) ^ cell.canon(r));
    if v == 0 {
        chain.remove(&key);
    } else {
        chain.insert(key, v);
    }
}

/// `d(X^m ⊗ c) = X^{m−e_1} ⊗ t_1 c + X^{m−e_2} ⊗ t_2 c + X^m ⊗ dc`.
pub fn tot_boundary(c: &TotChain) -> TotChain {
    let mut out = TotChain::new();
    for (&(m1, m2, cell), &r) in c {
        if m1 > 0 {
            add_t(&mut out, (m1 - 1, m2, cell), ring4(T1, r));
        }
        if m2 > 0 {
            add_t(&mut out, (m1, m2 - 1, cell), ring4(T2, r));
        }
        for (face, coeff) in cell.boundary() {
            add_t(&mut out, (m1, m2, face), ring4(r, coeff));
        }
    }
    out
}

/// Underlying F2 chain complex of `C_*(T³)`.
pub fn t3_underlying_complex() -> Result<ChainComplexF2, OracleError> {
    let mut basis: Vec<Vec<(T3Cell, u8)>> = vec![Vec::new(); 4];
    for cell in T3Cell::ALL {
        for m in cell.f2_basis() {
            basis[cell.degree()].push((cell, m));
        }
    }
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut boundaries = vec![F2Matrix::zeros(0, dims[0])];
    for d in 1..4 {
        let mut mat = F2Matrix::zeros(dims[d - 1], dims[d]);
        for (j, &(cell, m)) in basis[d].iter().enumerate() {
            let image = t3_boundary(&T3Chain::from([(cell, m)]));
            for (face, r) in image {
                for (i, &(fc, fm)) in basis[d - 1].iter().enumerate() {
                    if fc == face && r & fm != 0 {
                        mat.flip(i, j);
                    }
                }
            }
        }
        boundaries.push(mat);
    }
    ChainComplexF2::new(dims, boundaries)
}

/// Outcome of [`t3_verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct T3Report {
    pub n1: u32,
    pub n2: u32,
    pub d_squared_zero: bool,
    pub fundamental_cycle: bool,
    pub boundary_identity: bool,
    pub betti: Vec<usize>,
    pub betti_ok: bool,
}

impl T3Report {
    pub fn all_pass(&self) -> bool {
        self.d_squared_zero && self.fundamental_cycle && self.boundary_identity && self.betti_ok
    }
}

/// The chains `c_1 + c_2 + c_3` of the boundary identity at `(n1, n2)`.
pub fn t3_chains(n1: u32, n2: u32) -> TotChain {
    let mut c = TotChain::new();
    add_t(&mut c, (n1 + 1, n2, T3Cell::Cube), T2);
    add_t(&mut c, (n1 + 2, n2, T3Cell::Top), T2);
    add_t(&mut c, (n1 + 2, n2, T3Cell::Right), T2);
    add_t(&mut c, (n1 + 2, n2 + 1, T3Cell::E1), ONE);
    add_t(&mut c, (n1 + 2, n2 + 1, T3Cell::E1p), ONE);
    for i in 0..=n1 + 2 {
        add_t(&mut c, (i, n1 + n2 + 3 - i, T3Cell::E3), ONE);
        add_t(&mut c, (i, n1 + n2 + 3 - i, T3Cell::E3p), ONE);
    }
    c
}

/// The expected boundary of [`t3_chains`].
pub fn t3_expected_boundary(n1: u32, n2: u32) -> TotChain {
    let mut c = TotChain::new();
    add_t(&mut c, (n1, n2, T3Cell::Cube), ring4(T1, T2));
    for i in 0..=n1 + 1 {
        for v in [T3Cell::V1, T3Cell::VEta, T3Cell::VTheta, T3Cell::VZeta] {
            add_t(&mut c, (i, n1 + n2 + 3 - i, v), ONE);
        }
    }
    c
}

/// Checks the T³ double complex at `(n1, n2)`: `d² = 0` in `F_*`, `C_*` and
/// the total complex, that `t_1 t_2 e_cube` is a cycle, the boundary identity
/// for `c_1 + c_2 + c_3`, and that `C_*` has Betti numbers `(1, 3, 3, 1)`.
pub fn t3_verify(n1: u32, n2: u32) -> T3Report {
    let f_ok = koszul_resolution(2, 4).is_ok();
    let c_ok = T3Cell::ALL.iter().all(|&cell| {
        (0..4).all(|g| t3_boundary(&t3_boundary(&T3Chain::from([(cell, 1u8 << g)]))).is_empty())
    });
    // d² on X^m ⊗ c only depends on which of m_1, m_2 are 0, 1 or ≥ 2.
    let mut tot_ok = true;
    for m1 in 0..=3 {
        for m2 in 0..=3 {
            for cell in T3Cell::ALL {
                for m in cell.f2_basis() {
                    let x = TotChain::from([((m1, m2, cell), m)]);
                    tot_ok &= tot_boundary(&tot_boundary(&x)).is_empty();
                }
            }
        }
    }
    let fundamental = T3Chain::from([(T3Cell::Cube, ring4(T1, T2))]);
    let tot_fundamental = TotChain::from([((n1, n2, T3Cell::Cube), ring4(T1, T2))]);
    let fundamental_cycle =
        t3_boundary(&fundamental).is_empty() && tot_boundary(&tot_fundamental).is_empty();
    let boundary_identity = tot_boundary(&t3_chains(n1, n2)) == t3_expected_boundary(n1, n2);
    let betti = t3_underlying_complex().map(|c| c.betti()).unwrap_or_default();
    T3Report {
        n1,
        n2,
        d_squared_zero: f_ok && c_ok && tot_ok,
        fundamental_cycle,
        boundary_identity,
        betti_ok: betti == [1, 3, 3, 1],
        betti,
    }
}

/// Monomials of a fixed degree over `k` degree-1 generators.
pub fn vk_monomials(k: usize, degree: u32) -> Vec<DPMonomial> {
    monomials_of_degree(k, degree).into_iter().map(DPMonomial::new).collect()
}

/// One line of the `oracle-check` report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: serde_json::Value,
    pub pass: bool,
}

fn report(check: &str, params: serde_json::Value, result: Result<bool, OracleError>) -> CheckReport {
    CheckReport {
        check: check.to_string(),
        params,
        pass: result.unwrap_or(false),
    }
}

/// Runs the oracle comparisons at desk scale.
pub fn standard_checks() -> Vec<CheckReport> {
    use crate::operations::{alpha, CoefficientClass};
    use serde_json::json;
    let mut out = Vec::new();
    let z2 = FiniteGroupTable::z2_power(1);
    let d6 = FiniteGroupTable::dihedral(1);

    for (g, top, expect) in [
        (&z2, 4, vec![1; 5]),
        (&FiniteGroupTable::z2_power(2), 6, (1..=7).collect::<Vec<_>>()),
        (&d6, 3, vec![1; 4]),
    ] {
        let r = bar_homology(g, top).map(|h| h.dims == expect);
        out.push(report("bar_homology", json!({"group": g.name(), "max_degree": top}), r));
    }

    let v2 = FiniteGroupTable::z2_power(2);
    for d in 1..=4 {
        let r = transfer_map(&v2, &[0, 3], d).map(|t| t.matrix.is_zero());
        out.push(report("diagonal_transfer_zero", json!({"degree": d}), r));
    }

    for (g, k) in [(&z2, 1), (&z2, 2), (&d6, 1)] {
        let r = orbit_census(g, k).map(|c| c == 1 << k);
        out.push(report("orbit_census", json!({"group": g.name(), "k": k}), r));
    }

    for (table, desc, ks, max_a, max_b) in [
        (&z2, GroupDescriptor::Z2Power(1), vec![1usize, 2], 6u32, 4u32),
        (&d6, GroupDescriptor::Dihedral(1), vec![1], 4, 4),
    ] {
        for k in ks {
            let r = (|| -> Result<bool, OracleError> {
                let cs = Compsum::new(table, k)?;
                let x = GeneratorSet::single("x", 1);
                for da in 0..=max_a {
                    for m in vk_monomials(k, da) {
                        let a = DPClass::from_monomials(&GeneratorSet::vk(k), [m]);
                        for db in 0..=max_b {
                            let b = DPClass::monomial(&x, vec![db]);
                            let closed = alpha(&desc, k, &a, &CoefficientClass::from_dp(&desc, &b)?)?;
                            if closed.as_dp() != Some(cs.evaluate(&a, &b)?) {
                                return Ok(false);
                            }
                        }
                    }
                }
                Ok(true)
            })();
            out.push(report(
                "compsum_vs_closed_form",
                json!({"group": table.name(), "k": k, "max_a_degree": max_a, "max_b_degree": max_b}),
                r,
            ));
        }
    }

    let t3 = (0..=8).all(|n1| (0..=8).all(|n2| t3_verify(n1, n2).all_pass()));
    out.push(report("t3_verify", json!({"n1_max": 8, "n2_max": 8}), Ok(t3)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operations::{alpha, CoefficientClass};

    fn x(n: u32) -> DPClass {
        DPClass::monomial(&GeneratorSet::single("x", 1), vec![n])
    }

    #[test]
    fn group_tables() {
        for g in [
            FiniteGroupTable::trivial(),
            FiniteGroupTable::z2_power(3),
            FiniteGroupTable::dihedral(1),
            FiniteGroupTable::dihedral(2),
            FiniteGroupTable::product(&FiniteGroupTable::z2_power(1), &FiniteGroupTable::dihedral(1)),
        ] {
            FiniteGroupTable::from_table(g.name(), g.order(), g.mul.clone()).unwrap();
        }
        let d6 = FiniteGroupTable::dihedral(1);
        assert_eq!(d6.order(), 6);
        assert!(!d6.is_abelian());
        assert_eq!(d6.involutions().len(), 3);
        assert!(FiniteGroupTable::z2_power(2).is_elementary_abelian_2());
        let bad = FiniteGroupTable::from_table("bad", 2, vec![0, 0, 0, 1]);
        assert!(bad.is_err());
        let g: GroupDescriptor = "(z2^1)x(d6)".parse().unwrap();
        assert_eq!(FiniteGroupTable::from_descriptor(&g).unwrap().order(), 12);
    }

    #[test]
    fn orbits_z2() {
        let sa = StringAction::new(&FiniteGroupTable::z2_power(1), 1).unwrap();
        let orbits = action_orbits(&sa).unwrap();
        assert_eq!(orbits.len(), 2);
        for o in &orbits {
            assert_eq!(o.size, 2);
            assert_eq!(o.stabilizer.len(), 4);
            assert_eq!(o.image_index, 1);
        }
        let sa = StringAction::new(&FiniteGroupTable::trivial(), 1).unwrap();
        let orbits = action_orbits(&sa).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].stabilizer.len(), 2);
    }

    #[test]
    fn orbit_stabilizer() {
        for (g, k) in [
            (FiniteGroupTable::z2_power(1), 2),
            (FiniteGroupTable::dihedral(1), 1),
            (FiniteGroupTable::z2_power(2), 1),
        ] {
            let sa = StringAction::new(&g, k).unwrap();
            let total: usize = action_orbits(&sa)
                .unwrap()
                .iter()
                .map(|o| {
                    assert_eq!(o.size * o.stabilizer.len(), sa.action.group().order());
                    o.size
                })
                .sum();
            assert_eq!(total, sa.action.set_size());
        }
    }

    #[test]
    fn based_action_matches_projection() {
        let g = FiniteGroupTable::dihedral(1);
        let based = based_string_action(&g, 1).unwrap();
        let full = action_orbits(&StringAction::new(&g, 1).unwrap()).unwrap();
        let mut a: Vec<usize> = based.orbits().iter().map(|o| o.stabilizer.len()).collect();
        let mut b: Vec<usize> = full.iter().map(|o| o.image.len()).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn census() {
        assert_eq!(orbit_census(&FiniteGroupTable::z2_power(1), 1).unwrap(), 2);
        assert_eq!(orbit_census(&FiniteGroupTable::z2_power(1), 2).unwrap(), 4);
        assert_eq!(orbit_census(&FiniteGroupTable::dihedral(1), 1).unwrap(), 2);
    }

    #[test]
    fn bar_dims() {
        let z2 = bar_homology(&FiniteGroupTable::z2_power(1), 4).unwrap();
        assert_eq!(z2.dims, vec![1; 5]);
        let v2 = bar_homology(&FiniteGroupTable::z2_power(2), 6).unwrap();
        assert_eq!(v2.dims, (1..=7).collect::<Vec<_>>());
        let d6 = bar_homology(&FiniteGroupTable::dihedral(1), 3).unwrap();
        assert_eq!(d6.dims, vec![1; 4]);
        let big = bar_homology(&FiniteGroupTable::z2_power(4), 12).unwrap();
        assert_eq!(big.method, HomologyMethod::MinimalResolution);
        assert_eq!(big.dims[3], 20);
        assert!(bar_homology(&FiniteGroupTable::dihedral(2), 12).is_err());
    }

    #[test]
    fn koszul_is_a_resolution() {
        for m in 1..=3 {
            let f = koszul_resolution(m, 5).unwrap();
            let betti = f.betti();
            assert_eq!(betti[0], 1);
            assert!(betti[1..5].iter().all(|&b| b == 0), "m={m} {betti:?}");
        }
        assert_eq!(koszul_coinvariant_dims(2, 4), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn transfers() {
        let v2 = FiniteGroupTable::z2_power(2);
        for d in 1..=4 {
            let t = transfer_map(&v2, &[0, 3], d).unwrap();
            assert!(t.matrix.is_zero(), "degree {d}");
        }
        for d in 0..=3 {
            let t = transfer_map(&v2, &[0, 1, 2, 3], d).unwrap();
            assert_eq!(t.matrix, F2Matrix::identity(d + 1));
        }
        let z2 = FiniteGroupTable::z2_power(1);
        for d in 1..=3 {
            assert!(transfer_map(&z2, &[0], d).unwrap().matrix.is_zero());
        }
    }

    #[test]
    fn transfer_is_chain_map() {
        let d6 = FiniteGroupTable::dihedral(1);
        for h in d6.small_subgroups() {
            let tr = Transfer::new(&d6, &h).unwrap();
            let bg = BarComplex::new(&d6, 3).unwrap();
            let bh = BarComplex::new(&tr.sub, 3).unwrap();
            for d in 1..=3 {
                for j in 0..bg.complex().dims()[d] {
                    let cell = F2Vec::unit(bg.complex().dims()[d], j);
                    let lhs = bh.complex().boundary(d).mul_vec(&tr.transfer_chain(&bg, &bh, d, &cell));
                    let rhs = tr.transfer_chain(&bg, &bh, d - 1, &bg.complex().boundary(d).mul_vec(&cell));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn transfer_index_property_all_subgroups() {
        for g in [FiniteGroupTable::dihedral(1), FiniteGroupTable::z2_power(2)] {
            for h in g.small_subgroups() {
                for d in 0..=3 {
                    transfer_map(&g, &h, d).unwrap();
                }
            }
        }
    }

    #[test]
    fn compsum_examples() {
        let z2 = FiniteGroupTable::z2_power(1);
        let a = DPClass::monomial(&GeneratorSet::vk(1), vec![3]);
        assert_eq!(compsum_alpha(&z2, 1, &a, &x(0)).unwrap(), x(3));
        let a = DPClass::monomial(&GeneratorSet::vk(2), vec![1, 2]);
        assert_eq!(compsum_alpha(&z2, 2, &a, &x(0)).unwrap(), x(3));
        let d6 = FiniteGroupTable::dihedral(1);
        let a = DPClass::monomial(&GeneratorSet::vk(1), vec![2]);
        let got = compsum_alpha(&d6, 1, &a, &x(2)).unwrap();
        let g = GroupDescriptor::Dihedral(1);
        let b = CoefficientClass::from_dp(&g, &x(2)).unwrap();
        assert_eq!(got, alpha(&g, 1, &a, &b).unwrap().as_dp().unwrap());
        assert!(compsum_alpha(&FiniteGroupTable::z2_power(2), 1, &a, &x(0)).is_err());
    }

    #[test]
    fn t3_small() {
        let r = t3_verify(0, 0);
        assert!(r.all_pass(), "{r:?}");
        let r = t3_verify(3, 5);
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(t3_underlying_complex().unwrap().dims(), &[4, 12, 12, 4]);
    }

    #[test]
    fn t3_identity_is_sharp() {
        let mut c = t3_chains(1, 1);
        c.remove(&(3, 1, T3Cell::Top));
        assert_ne!(tot_boundary(&c), t3_expected_boundary(1, 1));
    }
}
