//! Irreducible corepresentation data of a truncated compact quantum group
//! and its character fusion ring.
//!
//! An instance lists, for every irrep `α` in the truncation window, its
//! dimension `n_α`, the eigenvalues of the diagonal `F^α`-matrix (their
//! order fixes the basis order of matrix indices), its conjugate `ᾱ` and an
//! index bijection `σ_α` with `λ^ᾱ_{σ(i)} λ^α_i = 1`. The first listed irrep
//! is the trivial one.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::element::{BasisKey, CoefficientElement};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Opaque irrep token, unique within an instance.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub struct IrrepLabel(Arc<str>);

impl IrrepLabel {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for IrrepLabel {
    fn from(s: &str) -> Self {
        IrrepLabel(Arc::from(s))
    }
}

impl From<String> for IrrepLabel {
    fn from(s: String) -> Self {
        IrrepLabel(Arc::from(s))
    }
}

impl From<IrrepLabel> for String {
    fn from(l: IrrepLabel) -> Self {
        l.0.to_string()
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrrepInfo {
    pub dim: usize,
    pub f_eigenvalues: Vec<f64>,
    pub conjugate: IrrepLabel,
    pub conj_index_map: Vec<usize>,
}

impl IrrepInfo {
    /// `d_α = Σ_i λ^α_i`.
    pub fn quantum_dimension(&self) -> f64 {
        self.f_eigenvalues.iter().sum()
    }
}

/// Decomposition of one tensor product `α ⊗ β`.
///
/// `complete == false` means some summands lie outside the window and were
/// left out of `decomp`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FusionEntry {
    pub decomp: BTreeMap<IrrepLabel, u32>,
    pub complete: bool,
}

impl FusionEntry {
    pub fn multiplicity(&self, gamma: &IrrepLabel) -> u32 {
        self.decomp.get(gamma).copied().unwrap_or(0)
    }
}

/// Fusion coefficients `N^γ_{αβ}`, possibly partial. A missing pair is
/// treated like an incomplete entry with nothing known.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FusionTable {
    entries: BTreeMap<(IrrepLabel, IrrepLabel), FusionEntry>,
}

impl FusionTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: IrrepLabel, b: IrrepLabel, entry: FusionEntry) {
        self.entries.insert((a, b), entry);
    }

    pub fn get(&self, a: &IrrepLabel, b: &IrrepLabel) -> Option<&FusionEntry> {
        self.entries.get(&(a.clone(), b.clone()))
    }

    /// The entry for `(a, b)` if it is present and complete.
    pub fn complete_entry(&self, a: &IrrepLabel, b: &IrrepLabel) -> Option<&FusionEntry> {
        self.get(a, b).filter(|e| e.complete)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&IrrepLabel, &IrrepLabel, &FusionEntry)> {
        self.entries.iter().map(|((a, b), e)| (a, b, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Truncated `Irr(𝔾)` together with its fusion rules. Immutable once built.
#[derive(Clone, Debug)]
pub struct QuantumGroupData {
    name: String,
    irreps: Vec<(IrrepLabel, IrrepInfo)>,
    index: HashMap<IrrepLabel, usize>,
    fusion: FusionTable,
    tolerance: f64,
}

impl PartialEq for QuantumGroupData {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.irreps == other.irreps
            && self.fusion == other.fusion
            && self.tolerance == other.tolerance
    }
}

impl QuantumGroupData {
    /// Builds an instance after structural checks (labels resolve, lengths
    /// match, index maps are permutations). Numeric invariants are left to
    /// [`validate`].
    pub fn new(
        name: impl Into<String>,
        irreps: Vec<(IrrepLabel, IrrepInfo)>,
        fusion: FusionTable,
        tolerance: f64,
    ) -> Result<Self> {
        if irreps.is_empty() {
            return Err(Error::Malformed("irrep list is empty".into()));
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::Malformed(format!("tolerance must be positive, got {tolerance}")));
        }
        let mut index = HashMap::with_capacity(irreps.len());
        for (i, (label, _)) in irreps.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate irrep label `{label}`")));
            }
        }
        for (label, info) in &irreps {
            if info.dim == 0 {
                return Err(Error::Malformed(format!("irrep `{label}` has dimension 0")));
            }
            if info.f_eigenvalues.len() != info.dim {
                return Err(Error::Malformed(format!(
                    "irrep `{label}`: {} eigenvalues for dimension {}",
                    info.f_eigenvalues.len(),
                    info.dim
                )));
            }
            if info.f_eigenvalues.iter().any(|x| !x.is_finite()) {
                return Err(Error::Malformed(format!("irrep `{label}` has a non-finite eigenvalue")));
            }
            if !index.contains_key(&info.conjugate) {
                return Err(Error::Malformed(format!(
                    "irrep `{label}` names unknown conjugate `{}`",
                    info.conjugate
                )));
            }
            if !is_permutation(&info.conj_index_map, info.dim) {
                return Err(Error::Malformed(format!(
                    "irrep `{label}`: conj_index_map is not a bijection on 0..{}",
                    info.dim
                )));
            }
        }
        for (a, b, e) in fusion.entries() {
            for l in [a, b].into_iter().chain(e.decomp.keys()) {
                if !index.contains_key(l) {
                    return Err(Error::Malformed(format!("fusion table names unknown irrep `{l}`")));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            irreps,
            index,
            fusion,
            tolerance,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(&self, tolerance: f64) -> Result<Self> {
        Self::new(self.name.clone(), self.irreps.clone(), self.fusion.clone(), tolerance)
    }

    pub fn with_fusion(&self, fusion: FusionTable) -> Result<Self> {
        Self::new(self.name.clone(), self.irreps.clone(), fusion, self.tolerance)
    }

    pub fn with_irrep(&self, label: &IrrepLabel, info: IrrepInfo) -> Result<Self> {
        let mut irreps = self.irreps.clone();
        let slot = self.index_of(label)?;
        irreps[slot].1 = info;
        Self::new(self.name.clone(), irreps, self.fusion.clone(), self.tolerance)
    }

    pub fn num_irreps(&self) -> usize {
        self.irreps.len()
    }

    /// Irreps in declaration order.
    pub fn irreps(&self) -> impl Iterator<Item = (&IrrepLabel, &IrrepInfo)> {
        self.irreps.iter().map(|(l, i)| (l, i))
    }

    pub fn labels(&self) -> impl Iterator<Item = &IrrepLabel> {
        self.irreps.iter().map(|(l, _)| l)
    }

    pub fn index_of(&self, label: &IrrepLabel) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn irrep(&self, label: &IrrepLabel) -> Result<&IrrepInfo> {
        Ok(&self.irreps[self.index_of(label)?].1)
    }

    pub fn contains(&self, label: &IrrepLabel) -> bool {
        self.index.contains_key(label)
    }

    pub fn trivial(&self) -> &IrrepLabel {
        &self.irreps[0].0
    }

    pub fn fusion(&self) -> &FusionTable {
        &self.fusion
    }

    /// Kac type: every F-eigenvalue equals 1 within tolerance.
    pub fn is_kac(&self) -> bool {
        self.irreps
            .iter()
            .flat_map(|(_, i)| i.f_eigenvalues.iter())
            .all(|l| (l - 1.0).abs() <= self.tolerance)
    }

    /// Number of matrix-coefficient basis elements, `Σ n_α²`.
    pub fn basis_size(&self) -> usize {
        self.irreps.iter().map(|(_, i)| i.dim * i.dim).sum()
    }

    /// All basis keys, irreps in declaration order, indices row-major.
    pub fn basis(&self) -> Vec<BasisKey> {
        let mut out = Vec::with_capacity(self.basis_size());
        for (label, info) in &self.irreps {
            for i in 0..info.dim {
                for j in 0..info.dim {
                    out.push(BasisKey::new(label.clone(), i, j));
                }
            }
        }
        out
    }

    pub fn to_file(&self) -> InstanceFile {
        let mut fusion: Vec<_> = self.fusion.entries().collect();
        fusion.sort_by_key(|(a, b, _)| (self.index[*a], self.index[*b]));
        InstanceFile {
            name: self.name.clone(),
            irreps: self
                .irreps
                .iter()
                .map(|(label, info)| IrrepRecord {
                    label: label.to_string(),
                    dim: info.dim,
                    f_eigenvalues: info.f_eigenvalues.clone(),
                    conjugate: info.conjugate.to_string(),
                    conj_index_map: info.conj_index_map.clone(),
                })
                .collect(),
            fusion: fusion
                .into_iter()
                .map(|(a, b, e)| FusionRecord {
                    a: a.to_string(),
                    b: b.to_string(),
                    decomp: e.decomp.iter().map(|(l, m)| (l.to_string(), *m)).collect(),
                    complete: e.complete,
                })
                .collect(),
            tolerance: self.tolerance,
        }
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        let irreps = file
            .irreps
            .into_iter()
            .map(|r| {
                (
                    IrrepLabel::from(r.label),
                    IrrepInfo {
                        dim: r.dim,
                        f_eigenvalues: r.f_eigenvalues,
                        conjugate: IrrepLabel::from(r.conjugate),
                        conj_index_map: r.conj_index_map,
                    },
                )
            })
            .collect();
        let mut fusion = FusionTable::new();
        for r in file.fusion {
            fusion.insert(
                r.a.into(),
                r.b.into(),
                FusionEntry {
                    decomp: r.decomp.into_iter().map(|(l, m)| (IrrepLabel::from(l), m)).collect(),
                    complete: r.complete,
                },
            );
        }
        Self::new(file.name, irreps, fusion, file.tolerance)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    /// Parses and structurally checks an instance; does not run [`validate`].
    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(s)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

fn is_permutation(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &i in map {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// On-disk instance representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub name: String,
    pub irreps: Vec<IrrepRecord>,
    pub fusion: Vec<FusionRecord>,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrrepRecord {
    pub label: String,
    pub dim: usize,
    pub f_eigenvalues: Vec<f64>,
    pub conjugate: String,
    pub conj_index_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionRecord {
    pub a: String,
    pub b: String,
    pub decomp: BTreeMap<String, u32>,
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub invariant: &'static str,
    pub labels: Vec<String>,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] (residual {:.3e})",
            self.invariant,
            self.labels.join(", "),
            self.residual
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Violations of one invariant.
    pub fn of(&self, invariant: &str) -> Vec<&Violation> {
        self.violations.iter().filter(|v| v.invariant == invariant).collect()
    }

    fn push(&mut self, invariant: &'static str, labels: &[&IrrepLabel], residual: f64) {
        self.violations.push(Violation {
            invariant,
            labels: labels.iter().map(|l| l.to_string()).collect(),
            residual,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{} violation(s): {}", parts.len(), parts.join("; "))
    }
}

pub const INV_POSITIVITY: &str = "f_eigenvalues positivity";
pub const INV_TRACE_BALANCE: &str = "trace balance";
pub const INV_TRIVIAL: &str = "trivial irrep";
pub const INV_CONJ_DIM: &str = "conjugate dimension";
pub const INV_CONJ_EIGENVALUES: &str = "conjugate eigenvalues";
pub const INV_CONJ_INVOLUTION: &str = "conjugate involution";
pub const INV_CONJ_INDEX_INVOLUTION: &str = "conjugate index involution";
pub const INV_FUSION_UNIT: &str = "fusion unit";
pub const INV_FUSION_DIMENSION: &str = "fusion dimension";
pub const INV_FUSION_QDIM: &str = "fusion quantum dimension";
pub const INV_FUSION_ASSOCIATIVITY: &str = "fusion associativity";
pub const INV_FUSION_CONJUGATE: &str = "fusion conjugate pairing";

/// Lists every violated numeric invariant. An empty list means valid.
pub fn validate(g: &QuantumGroupData) -> ValidationReport {
    let mut report = ValidationReport::default();
    validate_irreps(g, &mut report);
    validate_fusion(g, &mut report);
    report
}

fn validate_irreps(g: &QuantumGroupData, report: &mut ValidationReport) {
    let tol = g.tolerance();
    for (label, info) in g.irreps() {
        if let Some(worst) = info
            .f_eigenvalues
            .iter()
            .filter(|&&l| l <= 0.0)
            .map(|l| l.abs())
            .reduce(f64::max)
        {
            report.push(INV_POSITIVITY, &[label], worst);
        }
        let sum: f64 = info.f_eigenvalues.iter().sum();
        let inv_sum: f64 = info.f_eigenvalues.iter().map(|l| 1.0 / l).sum();
        let r = (sum - inv_sum).abs();
        if r.is_nan() || r > tol {
            report.push(INV_TRACE_BALANCE, &[label], r);
        }

        let conj_label = &info.conjugate;
        let Ok(conj) = g.irrep(conj_label) else { continue };
        if conj.dim != info.dim {
            report.push(INV_CONJ_DIM, &[label, conj_label], conj.dim.abs_diff(info.dim) as f64);
            continue;
        }
        let r = (0..info.dim)
            .map(|i| (conj.f_eigenvalues[info.conj_index_map[i]] * info.f_eigenvalues[i] - 1.0).abs())
            .fold(0.0, f64::max);
        if r.is_nan() || r > tol {
            report.push(INV_CONJ_EIGENVALUES, &[label, conj_label], r);
        }
        if &conj.conjugate != label {
            report.push(INV_CONJ_INVOLUTION, &[label, conj_label, &conj.conjugate], 1.0);
        } else if (0..info.dim).any(|i| conj.conj_index_map[info.conj_index_map[i]] != i) {
            report.push(INV_CONJ_INDEX_INVOLUTION, &[label, conj_label], 1.0);
        }
    }

    let (triv, info) = g.irreps().next().expect("instances are nonempty");
    let r = (info.f_eigenvalues[0] - 1.0).abs();
    if info.dim != 1 || &info.conjugate != triv || (r.is_nan() || r > tol) {
        report.push(INV_TRIVIAL, &[triv], if info.dim == 1 { r } else { 1.0 });
    }
}

fn validate_fusion(g: &QuantumGroupData, report: &mut ValidationReport) {
    let tol = g.tolerance();
    let triv = g.trivial();
    let fusion = g.fusion();

    for a in g.labels() {
        for (x, y) in [(a, triv), (triv, a)] {
            let ok = fusion
                .complete_entry(x, y)
                .is_some_and(|e| e.decomp.len() == 1 && e.multiplicity(a) == 1);
            if !ok {
                report.push(INV_FUSION_UNIT, &[x, y], 1.0);
            }
        }
    }

    for (a, b, e) in fusion.entries() {
        if !e.complete {
            continue;
        }
        let (Ok(ia), Ok(ib)) = (g.irrep(a), g.irrep(b)) else {
            continue;
        };
        let n_sum: usize = e
            .decomp
            .iter()
            .map(|(c, &m)| m as usize * g.irrep(c).map_or(0, |i| i.dim))
            .sum();
        if n_sum != ia.dim * ib.dim {
            report.push(INV_FUSION_DIMENSION, &[a, b], n_sum.abs_diff(ia.dim * ib.dim) as f64);
        }
        let d_sum: f64 = e
            .decomp
            .iter()
            .map(|(c, &m)| m as f64 * g.irrep(c).map_or(0.0, IrrepInfo::quantum_dimension))
            .sum();
        let r = (ia.quantum_dimension() * ib.quantum_dimension() - d_sum).abs();
        if r.is_nan() || r > tol {
            report.push(INV_FUSION_QDIM, &[a, b], r);
        }
        let pairing = e.multiplicity(triv);
        let expected = u32::from(&ia.conjugate == b);
        if pairing != expected {
            report.push(INV_FUSION_CONJUGATE, &[a, b], pairing.abs_diff(expected) as f64);
        }
    }

    let labels: Vec<&IrrepLabel> = g.labels().collect();
    for &a in &labels {
        for &b in &labels {
            let Some(ab) = fusion.complete_entry(a, b) else {
                continue;
            };
            for &c in &labels {
                if let Some((delta, r)) = associativity_defect(fusion, ab, a, b, c) {
                    report.push(INV_FUSION_ASSOCIATIVITY, &[a, b, c, &delta], r);
                }
            }
        }
    }
}

/// First `δ` where `Σ_e N^e_{ab} N^δ_{ec} ≠ Σ_f N^f_{bc} N^δ_{af}`, if the
/// triple is complete.
fn associativity_defect(
    fusion: &FusionTable,
    ab: &FusionEntry,
    a: &IrrepLabel,
    b: &IrrepLabel,
    c: &IrrepLabel,
) -> Option<(IrrepLabel, f64)> {
    let bc = fusion.complete_entry(b, c)?;
    let mut left: BTreeMap<IrrepLabel, i64> = BTreeMap::new();
    for (e, &m) in &ab.decomp {
        for (d, &n) in &fusion.complete_entry(e, c)?.decomp {
            *left.entry(d.clone()).or_default() += i64::from(m) * i64::from(n);
        }
    }
    let mut right: BTreeMap<IrrepLabel, i64> = BTreeMap::new();
    for (f, &m) in &bc.decomp {
        for (d, &n) in &fusion.complete_entry(a, f)?.decomp {
            *right.entry(d.clone()).or_default() += i64::from(m) * i64::from(n);
        }
    }
    left.keys()
        .chain(right.keys())
        .map(|d| {
            let l = left.get(d).copied().unwrap_or(0);
            let r = right.get(d).copied().unwrap_or(0);
            (d, (l - r).abs())
        })
        .find(|(_, diff)| *diff != 0)
        .map(|(d, diff)| (d.clone(), diff as f64))
}

pub fn quantum_dimension(g: &QuantumGroupData, alpha: &IrrepLabel) -> Result<f64> {
    Ok(g.irrep(alpha)?.quantum_dimension())
}

/// Element `Σ_α c_α χ^α` of the character ring.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CharacterRingElement {
    coeffs: BTreeMap<IrrepLabel, Complex64>,
}

impl CharacterRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn character(alpha: impl Into<IrrepLabel>) -> Self {
        let mut x = Self::zero();
        x.add_term(alpha.into(), Complex64::new(1.0, 0.0));
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (IrrepLabel, Complex64)>>(terms: I) -> Self {
        let mut x = Self::zero();
        for (l, c) in terms {
            x.add_term(l, c);
        }
        x
    }

    pub fn add_term(&mut self, alpha: IrrepLabel, c: Complex64) {
        let entry = self.coeffs.entry(alpha.clone()).or_default();
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&alpha);
        }
    }

    pub fn coeff(&self, alpha: &IrrepLabel) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IrrepLabel, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(l, v)| (l.clone(), v * c)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, c) in &other.coeffs {
            out.add_term(l.clone(), *c);
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
            .coeffs
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Expands `χ^α = Σ_i u^α_{ii}` into matrix coefficients.
    pub fn to_coefficients(&self, g: &QuantumGroupData) -> Result<CoefficientElement> {
        let mut out = CoefficientElement::zero();
        for (l, c) in &self.coeffs {
            for i in 0..g.irrep(l)?.dim {
                out.add_term(BasisKey::new(l.clone(), i, i), *c);
            }
        }
        Ok(out)
    }
}

/// Bilinear extension of `χ^α χ^β = Σ_γ N^γ_{αβ} χ^γ`. Fails with
/// [`Error::TruncationOverflow`] if a needed entry is missing or incomplete.
pub fn fuse_characters(
    g: &QuantumGroupData,
    x: &CharacterRingElement,
    y: &CharacterRingElement,
) -> Result<CharacterRingElement> {
    let (out, overflow) = fuse_impl(g, x, y, false)?;
    debug_assert!(!overflow);
    Ok(out)
}

/// Like [`fuse_characters`] but drops out-of-window summands; the flag is
/// set when anything was dropped.
pub fn fuse_characters_lossy(
    g: &QuantumGroupData,
    x: &CharacterRingElement,
    y: &CharacterRingElement,
) -> Result<(CharacterRingElement, bool)> {
    fuse_impl(g, x, y, true)
}

fn fuse_impl(
    g: &QuantumGroupData,
    x: &CharacterRingElement,
    y: &CharacterRingElement,
    lossy: bool,
) -> Result<(CharacterRingElement, bool)> {
    let mut out = CharacterRingElement::zero();
    let mut overflow = false;
    for (a, ca) in x.terms() {
        g.index_of(a)?;
        for (b, cb) in y.terms() {
            g.index_of(b)?;
            let entry = g.fusion().get(a, b);
            if !entry.is_some_and(|e| e.complete) {
                if !lossy {
                    return Err(Error::TruncationOverflow {
                        a: a.to_string(),
                        b: b.to_string(),
                    });
                }
                overflow = true;
            }
            if let Some(e) = entry {
                for (c, &m) in &e.decomp {
                    out.add_term(c.clone(), ca * cb * f64::from(m));
                }
            }
        }
    }
    Ok((out, overflow))
}

/// Conjugate-linear map `χ^α ↦ χ^ᾱ`.
pub fn conjugate_character(g: &QuantumGroupData, x: &CharacterRingElement) -> Result<CharacterRingElement> {
    let mut out = CharacterRingElement::zero();
    for (a, c) in x.terms() {
        out.add_term(g.irrep(a)?.conjugate.clone(), c.conj());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(s: &str) -> IrrepLabel {
        IrrepLabel::from(s)
    }

    fn trivial_only() -> QuantumGroupData {
        let mut fusion = FusionTable::new();
        fusion.insert(
            label("1"),
            label("1"),
            FusionEntry {
                decomp: [(label("1"), 1)].into(),
                complete: true,
            },
        );
        QuantumGroupData::new(
            "trivial",
            vec![(
                label("1"),
                IrrepInfo {
                    dim: 1,
                    f_eigenvalues: vec![1.0],
                    conjugate: label("1"),
                    conj_index_map: vec![0],
                },
            )],
            fusion,
            DEFAULT_TOLERANCE,
        )
        .unwrap()
    }

    #[test]
    fn trivial_only_instance_is_valid() {
        let g = trivial_only();
        assert!(validate(&g).is_valid(), "{}", validate(&g));
        assert_eq!(quantum_dimension(&g, &label("1")).unwrap(), 1.0);
        assert!(g.is_kac());
    }

    #[test]
    fn structural_errors_are_rejected() {
        let err = QuantumGroupData::new("empty", vec![], FusionTable::new(), 1e-9);
        assert!(matches!(err, Err(Error::Malformed(_))));

        let bad_map = IrrepInfo {
            dim: 2,
            f_eigenvalues: vec![1.0, 1.0],
            conjugate: label("a"),
            conj_index_map: vec![0, 0],
        };
        let err = QuantumGroupData::new("x", vec![(label("a"), bad_map)], FusionTable::new(), 1e-9);
        assert!(matches!(err, Err(Error::Malformed(_))));

        let g = trivial_only();
        assert!(matches!(g.irrep(&label("zz")), Err(Error::UnknownLabel(_))));
        assert!(g.with_tolerance(0.0).is_err());
    }

    #[test]
    fn missing_unit_entries_are_reported() {
        let g = trivial_only().with_fusion(FusionTable::new()).unwrap();
        let report = validate(&g);
        assert!(!report.of(INV_FUSION_UNIT).is_empty());
    }

    #[test]
    fn json_round_trip() {
        let g = trivial_only();
        let back = QuantumGroupData::from_json_str(&g.to_json_string().unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_field_names_are_fixed() {
        let v: serde_json::Value = serde_json::from_str(&trivial_only().to_json_string().unwrap()).unwrap();
        for key in ["name", "irreps", "fusion", "tolerance"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let irrep = &v["irreps"][0];
        for key in ["label", "dim", "f_eigenvalues", "conjugate", "conj_index_map"] {
            assert!(irrep.get(key).is_some(), "missing {key}");
        }
        let entry = &v["fusion"][0];
        for key in ["a", "b", "decomp", "complete"] {
            assert!(entry.get(key).is_some(), "missing {key}");
        }
    }
}
