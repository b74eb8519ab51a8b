//! Certificates of nonzero classes in the homology of holomorphs and
//! automorphism groups of free groups and of affine groups.
//!
//! A certificate records a witness `b` with `Φ(a_1) ∘ ⋯ ∘ Φ(a_r)(b) ≠ 0`
//! together with rank, degree and stability metadata. It never claims to
//! compute the homology of the target group itself.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operations::{
    basis_in_degree, composite_op, CoefficientClass, GroupDescriptor, OpError, OpInput,
};
use crate::symhomology::{juxta_multiply, OWord, SymClass};

pub const CERTIFICATE_VERSION: &str = "v1";

/// Recorded in every certificate.
pub const SHIFT_CONVENTION_NOTE: &str = "the factorization theorems for Hol, Aut and Aff state \
shift = dim(G)(N-1); the definition of the operations and Euler characteristic additivity give \
dim(G)*N, which is the shift used here";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("{target} needs {needs}; {group} does not qualify")]
    Hypothesis {
        target: Target,
        group: String,
        needs: &'static str,
    },
    #[error("{target} needs a class of positive degree")]
    DegreeTooLow { target: Target },
    #[error("no witness up to degree {degree_bound}; inconclusive, not a proof of triviality")]
    NoWitness { degree_bound: u32 },
    #[error("u_{i} = {ui} and u_{j} = {uj} share a binary digit")]
    BitCollision { i: usize, j: usize, ui: u32, uj: u32 },
    #[error("f is not onto {{1..{r}}}: {missing} has no preimage")]
    NotSurjective { r: usize, missing: usize },
    #[error("bad family: {0}")]
    BadFamily(String),
    #[error("unsupported certificate version {0:?}")]
    Version(String),
    #[error(transparent)]
    Op(#[from] OpError),
}

/// The group and flavour of the certified class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Target {
    /// `ζ_*(a) ∈ H_*(B Hol(F_N))`.
    HolOrdinary,
    /// `ρζ_*(a) ∈ H_{*−1}(B Aut(F_N); F2^N)`.
    AutTwisted,
    /// `jρζ_*(a) ∈ H_*(B Hol(F_N))`.
    HolUnstable,
    /// `(α_Z)_* ζ_*(a) ∈ H_*(B Aff_N(Z))`.
    AffZ,
    /// `(α_{F2})_* ζ_*(a) ∈ H_*(B Aff_N(F2))`.
    AffF2,
    /// `(α_Z)_* jρζ_*(a)`.
    AffZUnstable,
    /// `(α_{F2})_* jρζ_*(a)`.
    AffF2Unstable,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::HolOrdinary,
        Target::AutTwisted,
        Target::HolUnstable,
        Target::AffZ,
        Target::AffF2,
        Target::AffZUnstable,
        Target::AffF2Unstable,
    ];

    fn check_group(self, g: &GroupDescriptor) -> Result<(), CertifyError> {
        let (ok, needs) = match self {
            Target::HolOrdinary => (true, "a compact Lie group"),
            Target::AutTwisted | Target::HolUnstable => (
                g.is_positive_dim_or_even_order(),
                "a positive-dimensional group or a finite group of even order",
            ),
            Target::AffZ => (g.is_abelian(), "an abelian group"),
            Target::AffZUnstable => (
                g.is_abelian() && g.is_positive_dim_or_even_order(),
                "an abelian group, positive-dimensional or of even order",
            ),
            Target::AffF2 | Target::AffF2Unstable => {
                (g.is_elementary_abelian_2(), "an elementary abelian 2-group")
            }
        };
        if ok {
            Ok(())
        } else {
            Err(CertifyError::Hypothesis {
                target: self,
                group: g.to_string(),
                needs,
            })
        }
    }

    /// Whether the certified class passes through the twisted `Aut` homology.
    fn is_twisted(self) -> bool {
        matches!(
            self,
            Target::AutTwisted | Target::HolUnstable | Target::AffZUnstable | Target::AffF2Unstable
        )
    }

    fn describe(self, degree: u64, n: u64) -> String {
        match self {
            Target::HolOrdinary => format!("ζ_*(a) ∈ H_{degree}(B Hol(F_{n}))"),
            Target::AutTwisted => format!("ρζ_*(a) ∈ H_{degree}(B Aut(F_{n}); F2^{n})"),
            Target::HolUnstable => format!("jρζ_*(a) ∈ H_{degree}(B Hol(F_{n}))"),
            Target::AffZ => format!("(α_Z)_*ζ_*(a) ∈ H_{degree}(B Aff_{n}(Z))"),
            Target::AffF2 => format!("(α_F2)_*ζ_*(a) ∈ H_{degree}(B Aff_{n}(F2))"),
            Target::AffZUnstable => format!("(α_Z)_*jρζ_*(a) ∈ H_{degree}(B Aff_{n}(Z))"),
            Target::AffF2Unstable => format!("(α_F2)_*jρζ_*(a) ∈ H_{degree}(B Aff_{n}(F2))"),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Target::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown target {s:?}"))
    }
}

/// One factor `(n_i, a_i)` with `a_i ∈ H_*(BΣ_{n_i})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub n: u64,
    pub a: OpInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub group: String,
    pub factors: Vec<Factor>,
    pub b: CoefficientClass,
    pub output: CoefficientClass,
}

/// `μ_*(a_1 × ⋯ × a_r) ∈ H_k(BΣ_{N+r})` and the least `L` with `N + r + L > 2k + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableImage {
    pub class: SymClass,
    pub weight: u64,
    pub offset: u64,
}

/// Classes of degree `degree` vanish after stabilizing to rank `n > rank_above`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingBound {
    pub degree: u64,
    pub rank_above: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Stability {
    pub stable: bool,
    pub stable_image: Option<StableImage>,
    /// Set when the stable image exists but some factor is a ∘-word that is
    /// not a polynomial generator, so no E-basis form is available.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_image_unavailable: Option<String>,
    pub not_in_stabilization_image: bool,
    pub unstable: bool,
    pub vanishing_bound: Option<VanishingBound>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub target: Target,
    #[serde(rename = "N")]
    pub n: u64,
    pub degree: u64,
    pub class: String,
    pub witness: Witness,
    pub stability: Stability,
    /// `dim(G)·N`.
    pub shift: u64,
    pub shift_convention_note: String,
}

fn factor_degree(factors: &[Factor]) -> Result<u64, CertifyError> {
    factors.iter().try_fold(0, |acc, f| {
        f.a.degree()
            .map(|d| acc + d)
            .ok_or_else(|| CertifyError::BadFamily(format!("{} is zero or inhomogeneous", f.a)))
    })
}

fn rank(factors: &[Factor]) -> u64 {
    factors.iter().map(|f| f.n.saturating_sub(1)).sum()
}

fn default_bound(g: &GroupDescriptor, factors: &[Factor], degree: u64) -> u32 {
    let weight: u64 = factors.iter().map(|f| f.n).sum();
    (degree + u64::from(g.dim()) * weight + 8) as u32
}

fn pairs(factors: &[Factor]) -> Vec<(u64, OpInput)> {
    factors.iter().map(|f| (f.n, f.a.clone())).collect()
}

/// First `b` in canonical order with a nonzero composite.
pub fn find_witness(
    g: &GroupDescriptor,
    factors: &[Factor],
    degree_bound: u32,
) -> Result<Option<(CoefficientClass, CoefficientClass)>, CertifyError> {
    let ops = pairs(factors);
    for d in 0..=degree_bound {
        for t in basis_in_degree(g, d) {
            let b = CoefficientClass::from_terms(g, [t]);
            let out = composite_op(g, &ops, &b)?;
            if !out.is_zero() {
                return Ok(Some((b, out)));
            }
        }
    }
    Ok(None)
}

/// `μ_*(a_1 × ⋯ × a_r)` and its stabilization offset for homology degree `k`.
pub fn stable_image(factors: &[(u64, SymClass)], k: u64) -> Result<StableImage, CertifyError> {
    let mut class = SymClass::from_term(crate::symhomology::SymTerm::unit());
    for (n, a) in factors {
        for t in a.terms() {
            if t.weight() != *n {
                return Err(OpError::WeightMismatch {
                    term: t.to_string(),
                    expected: *n,
                    found: t.weight(),
                }
                .into());
            }
        }
        class = juxta_multiply(&class, a);
    }
    let n_total: u64 = factors.iter().map(|(n, _)| n.saturating_sub(1)).sum();
    let r = factors.len() as u64;
    Ok(StableImage {
        class,
        weight: n_total + r,
        offset: (2 * k + 2).saturating_sub(n_total + r),
    })
}

fn stability(target: Target, factors: &[Factor], degree: u64) -> Result<Stability, CertifyError> {
    let mut s = Stability::default();
    let twisted_bound = || VanishingBound {
        degree: degree - 1,
        rank_above: 2 * (degree - 1) + 3,
    };
    match target {
        Target::HolOrdinary => {
            s.stable = true;
            s.not_in_stabilization_image = degree > 0;
            let syms: Option<Vec<(u64, SymClass)>> =
                factors.iter().map(|f| f.a.as_sym().map(|c| (f.n, c))).collect();
            match syms {
                Some(syms) => s.stable_image = Some(stable_image(&syms, degree)?),
                None => {
                    s.stable_image_unavailable =
                        Some("a factor is a ∘-word outside the generator basis".into())
                }
            }
        }
        Target::AutTwisted | Target::AffZUnstable => {
            s.unstable = true;
            s.vanishing_bound = Some(twisted_bound());
        }
        Target::HolUnstable => {
            s.unstable = true;
            s.not_in_stabilization_image = true;
            s.vanishing_bound = Some(twisted_bound());
        }
        Target::AffZ => {}
        Target::AffF2 | Target::AffF2Unstable => {
            // Positive-degree stable homology of Aff(F2) vanishes from rank 2k+1 on.
            s.unstable = degree > 0;
            if degree > 0 {
                s.vanishing_bound = Some(VanishingBound {
                    degree,
                    rank_above: 2 * degree,
                });
            }
        }
    }
    Ok(s)
}

fn assemble(
    target: Target,
    g: &GroupDescriptor,
    factors: &[Factor],
    b: CoefficientClass,
    output: CoefficientClass,
) -> Result<Certificate, CertifyError> {
    let total = factor_degree(factors)?;
    let n = rank(factors);
    let degree = if target == Target::AutTwisted { total - 1 } else { total };
    Ok(Certificate {
        version: CERTIFICATE_VERSION.to_string(),
        target,
        n,
        degree,
        class: target.describe(degree, n),
        witness: Witness {
            group: g.to_string(),
            factors: factors.to_vec(),
            b,
            output,
        },
        stability: stability(target, factors, total)?,
        shift: u64::from(g.dim()) * n,
        shift_convention_note: SHIFT_CONVENTION_NOTE.to_string(),
    })
}

/// Searches for a witness and emits a certificate for `target`.
pub fn build_certificate(
    target: Target,
    g: &GroupDescriptor,
    factors: &[Factor],
    degree_bound: Option<u32>,
) -> Result<Certificate, CertifyError> {
    target.check_group(g)?;
    let total = factor_degree(factors)?;
    if target.is_twisted() && total == 0 {
        return Err(CertifyError::DegreeTooLow { target });
    }
    let bound = degree_bound.unwrap_or_else(|| default_bound(g, factors, total));
    let (b, output) = find_witness(g, factors, bound)?.ok_or(CertifyError::NoWitness { degree_bound: bound })?;
    assemble(target, g, factors, b, output)
}

/// The factors of the family: `n_i = 2^{|f⁻¹(i)|}`, `a_i = ∘_{j ∈ f⁻¹(i)} E_{u_j}`.
/// `f` lists the 1-based image of each index of `u`.
pub fn family_factors(u: &[u32], f: &[usize]) -> Result<Vec<Factor>, CertifyError> {
    if u.is_empty() || u.len() != f.len() {
        return Err(CertifyError::BadFamily("u and f must be nonempty and of equal length".into()));
    }
    if let Some(&z) = u.iter().find(|&&x| x == 0) {
        return Err(CertifyError::BadFamily(format!("u must be positive, found {z}")));
    }
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if u[i] & u[j] != 0 {
                return Err(CertifyError::BitCollision {
                    i: i + 1,
                    j: j + 1,
                    ui: u[i],
                    uj: u[j],
                });
            }
        }
    }
    let r = *f.iter().max().unwrap();
    if f.contains(&0) {
        return Err(CertifyError::BadFamily("f takes values in 1..=r".into()));
    }
    let mut factors = Vec::with_capacity(r);
    for i in 1..=r {
        let word: Vec<u32> = u.iter().zip(f).filter(|(_, &fi)| fi == i).map(|(&x, _)| x).collect();
        if word.is_empty() {
            return Err(CertifyError::NotSurjective { r, missing: i });
        }
        factors.push(Factor {
            n: 1 << word.len(),
            a: OpInput::Word(OWord::new(word)),
        });
    }
    Ok(factors)
}

/// One certificate per target, all witnessed through `G = Z/2`.
pub fn example_family(u: &[u32], f: &[usize]) -> Result<Vec<Certificate>, CertifyError> {
    let factors = family_factors(u, f)?;
    let g = GroupDescriptor::Z2Power(1);
    let total = factor_degree(&factors)?;
    let (b, output) = find_witness(&g, &factors, default_bound(&g, &factors, total))?
        .ok_or(CertifyError::NoWitness { degree_bound: default_bound(&g, &factors, total) })?;
    Target::ALL
        .into_iter()
        .map(|t| {
            t.check_group(&g)?;
            assemble(t, &g, &factors, b.clone(), output.clone())
        })
        .collect()
}

/// Re-runs the witness evaluation and the bookkeeping checks.
pub fn revalidate(cert: &Certificate) -> Result<(), CertifyError> {
    if cert.version != CERTIFICATE_VERSION {
        return Err(CertifyError::Version(cert.version.clone()));
    }
    let g: GroupDescriptor = cert.witness.group.parse()?;
    cert.target.check_group(&g)?;
    let factors = &cert.witness.factors;
    let total = factor_degree(factors)?;
    let expect_degree = if cert.target == Target::AutTwisted { total.checked_sub(1) } else { Some(total) };
    let bad = |m: String| Err(CertifyError::BadFamily(m));
    if expect_degree != Some(cert.degree) {
        return bad(format!("degree {} does not match the factors", cert.degree));
    }
    if rank(factors) != cert.n {
        return bad(format!("N = {} does not match the factors", cert.n));
    }
    if cert.shift != u64::from(g.dim()) * cert.n {
        return bad("shift ≠ dim(G)·N".into());
    }
    let out = composite_op(&g, &pairs(factors), &cert.witness.b)?;
    if out.is_zero() || out != cert.witness.output {
        return bad("witness output does not reproduce".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(text: &str) -> OpInput {
        OpInput::Sym(SymClass::parse(text).unwrap())
    }

    fn z2() -> GroupDescriptor {
        GroupDescriptor::Z2Power(1)
    }

    #[test]
    fn hol_example() {
        let factors = vec![Factor { n: 2, a: sym("E(1)") }, Factor { n: 2, a: sym("E(2)") }];
        let c = build_certificate(Target::HolOrdinary, &z2(), &factors, None).unwrap();
        assert_eq!((c.n, c.degree), (2, 3));
        assert!(c.stability.stable && c.stability.not_in_stabilization_image);
        let img = c.stability.stable_image.as_ref().unwrap();
        assert_eq!(img.class, SymClass::parse("E(1)*E(2)").unwrap());
        assert_eq!((img.weight, img.offset), (4, 4));
        revalidate(&c).unwrap();
    }

    #[test]
    fn aut_example() {
        let factors = vec![Factor { n: 2, a: sym("E(3)") }];
        let c = build_certificate(Target::AutTwisted, &z2(), &factors, None).unwrap();
        assert_eq!((c.n, c.degree), (1, 2));
        assert!(c.stability.unstable);
        assert_eq!(c.stability.vanishing_bound, Some(VanishingBound { degree: 2, rank_above: 7 }));
        revalidate(&c).unwrap();
    }

    #[test]
    fn hypotheses() {
        let factors = vec![Factor { n: 2, a: sym("E(1)") }];
        let err = build_certificate(Target::AffF2, &GroupDescriptor::Torus(1), &factors, None).unwrap_err();
        assert!(matches!(err, CertifyError::Hypothesis { .. }));
        let d6: GroupDescriptor = "d6".parse().unwrap();
        assert!(build_certificate(Target::AffZ, &d6, &factors, None).is_err());
        assert!(build_certificate(Target::AutTwisted, &d6, &factors, None).is_ok());
        let unit = vec![Factor { n: 1, a: sym("[1]") }];
        assert!(build_certificate(Target::HolOrdinary, &z2(), &unit, None).is_ok());
        assert!(matches!(
            build_certificate(Target::AutTwisted, &z2(), &unit, None),
            Err(CertifyError::DegreeTooLow { .. })
        ));
        let zero_op = vec![Factor { n: 2, a: sym("E(2)") }];
        assert!(matches!(
            build_certificate(Target::HolOrdinary, &GroupDescriptor::SU2, &zero_op, Some(20)),
            Err(CertifyError::NoWitness { .. })
        ));
    }

    #[test]
    fn family_examples() {
        let bundle = example_family(&[1, 2], &[1, 1]).unwrap();
        assert_eq!(bundle.len(), 7);
        for c in &bundle {
            assert_eq!(c.n, 3);
            let expect = if c.target == Target::AutTwisted { 2 } else { 3 };
            assert_eq!(c.degree, expect);
            revalidate(c).unwrap();
        }
        let bundle = example_family(&[1, 2], &[1, 2]).unwrap();
        assert!(bundle.iter().all(|c| c.n == 2));
        assert!(matches!(
            example_family(&[1, 3], &[1, 1]),
            Err(CertifyError::BitCollision { i: 1, j: 2, .. })
        ));
        assert!(matches!(
            example_family(&[1, 2], &[1, 3]),
            Err(CertifyError::NotSurjective { missing: 2, .. })
        ));
        let bundle = example_family(&[2, 5], &[1, 1]).unwrap();
        assert!(bundle[0].stability.stable_image.is_none());
        assert!(bundle[0].stability.stable_image_unavailable.is_some());
    }

    #[test]
    fn stable_image_examples() {
        let e = |t: &str| SymClass::parse(t).unwrap();
        assert_eq!(stable_image(&[(2, e("E(1)"))], 1).unwrap().offset, 2);
        let s = stable_image(&[(1, e("[1]"))], 0).unwrap();
        assert_eq!((s.class.clone(), s.offset), (e("[1]"), 1));
        assert!(stable_image(&[(4, e("E(1)"))], 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let bundle = example_family(&[1, 4], &[1, 2]).unwrap();
        for c in bundle {
            let mut v = serde_json::to_value(&c).unwrap();
            assert_eq!(v["version"], "v1");
            assert!(v.get("N").is_some());
            v["extra_field"] = serde_json::json!(true);
            let back: Certificate = serde_json::from_value(v).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut c = example_family(&[1, 2], &[1, 1]).unwrap().remove(0);
        c.degree += 1;
        assert!(revalidate(&c).is_err());
        let mut c = example_family(&[1, 2], &[1, 1]).unwrap().remove(0);
        c.witness.b = CoefficientClass::parse(&z2(), "x").unwrap();
        assert!(revalidate(&c).is_err());
    }
}
