//! Finite groups as compact quantum groups, both as function algebras
//! `C(Γ)` (irreps given explicitly) and as duals `Γ̂` (one 1-dimensional
//! irrep per group element).

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::NormOracle;
use crate::element::{BasisKey, CoefficientElement, Element, L1Element, Space};
use crate::fusion_data::{FusionEntry, FusionTable, IrrepInfo, IrrepLabel, QuantumGroupData, DEFAULT_TOLERANCE};
use crate::{Error, Result};

const IRREP_TOLERANCE: f64 = 1e-9;

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGroupPresentation {
    name: String,
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroupPresentation {
    /// Checks the group axioms on the table (`table[a][b] = a·b`).
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        table: Vec<Vec<usize>>,
        identity: usize,
    ) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidGroup("no elements".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not a total binary operation".into()));
        }
        if identity >= n {
            return Err(Error::InvalidGroup("identity out of range".into()));
        }
        {
            let mut seen = std::collections::HashSet::new();
            if !elements.iter().all(|e| seen.insert(e.as_str())) {
                return Err(Error::InvalidGroup("duplicate element tokens".into()));
            }
        }
        for (a, row) in table.iter().enumerate() {
            if table[identity][a] != a || row[identity] != a {
                return Err(Error::InvalidGroup(format!(
                    "`{}` is not a two-sided identity",
                    elements[identity]
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails on ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverse.push(b),
                None => return Err(Error::InvalidGroup(format!("`{}` has no inverse", elements[a]))),
            }
        }
        Ok(Self {
            name: name.into(),
            elements,
            table,
            identity,
            inverse,
        })
    }

    /// The cyclic group ℤₙ with tokens `"0"…"n-1"`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let elements = (0..n).map(|k| k.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(format!("z{n}"), elements, table, 0)
    }

    /// The group generated by composing the given permutations, which must
    /// already be closed under composition. Products are `(pq)(x) = p(q(x))`;
    /// tokens are the one-line notation, e.g. `"021"`.
    pub fn from_permutations(name: impl Into<String>, perms: &[Vec<usize>]) -> Result<Self> {
        let index: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut table = vec![vec![0; perms.len()]; perms.len()];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                table[a][b] = *index
                    .get(pq.as_slice())
                    .ok_or_else(|| Error::InvalidGroup("permutation set not closed".into()))?;
            }
        }
        let m = perms.first().map_or(0, Vec::len);
        let id: Vec<usize> = (0..m).collect();
        let identity = *index
            .get(id.as_slice())
            .ok_or_else(|| Error::InvalidGroup("identity permutation missing".into()))?;
        let elements = perms
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        Self::new(name, elements, table, identity)
    }

    /// S₃ as all permutations of {0,1,2}.
    pub fn symmetric3() -> Self {
        Self::from_permutations("s3", &s3_permutations()).expect("S3 is a group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == token)
    }

    /// Element indices with the identity first.
    fn identity_first(&self) -> Vec<usize> {
        std::iter::once(self.identity)
            .chain((0..self.order()).filter(|&g| g != self.identity))
            .collect()
    }
}

fn s3_permutations() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1, 2],
        vec![1, 0, 2],
        vec![0, 2, 1],
        vec![2, 1, 0],
        vec![1, 2, 0],
        vec![2, 0, 1],
    ]
}

/// A unitary representation given by one matrix per group element
/// (indexed like the presentation's elements).
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitIrrep {
    pub label: IrrepLabel,
    pub matrices: Vec<DMatrix<Complex64>>,
}

impl ExplicitIrrep {
    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, DMatrix::nrows)
    }

    pub fn character(&self, g: usize) -> Complex64 {
        self.matrices[g].trace()
    }

    fn is_trivial(&self) -> bool {
        self.dim() == 1
            && self
                .matrices
                .iter()
                .all(|m| (m[(0, 0)] - Complex64::new(1.0, 0.0)).norm() <= IRREP_TOLERANCE)
    }

    fn check(&self, p: &FiniteGroupPresentation) -> Result<()> {
        let n = self.dim();
        if n == 0 || self.matrices.len() != p.order() {
            return Err(Error::InvalidIrreps(format!(
                "`{}`: need one matrix per element",
                self.label
            )));
        }
        if self.matrices.iter().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::InvalidIrreps(format!(
                "`{}`: matrices are not all {n}x{n}",
                self.label
            )));
        }
        let eye = DMatrix::<Complex64>::identity(n, n);
        for (g, m) in self.matrices.iter().enumerate() {
            if (m * m.adjoint() - &eye).camax() > IRREP_TOLERANCE {
                return Err(Error::InvalidIrreps(format!(
                    "`{}`: matrix of `{}` is not unitary",
                    self.label,
                    p.elements()[g]
                )));
            }
        }
        for a in 0..p.order() {
            for b in 0..p.order() {
                let lhs = &self.matrices[a] * &self.matrices[b];
                if (lhs - &self.matrices[p.mul(a, b)]).camax() > IRREP_TOLERANCE {
                    return Err(Error::InvalidIrreps(format!(
                        "`{}`: homomorphism property fails on ({}, {})",
                        self.label,
                        p.elements()[a],
                        p.elements()[b]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Trivial, sign and 2-dimensional standard irreps of S₃ (labels `t`, `s`,
/// `v`). The standard one is the permutation action restricted to the
/// sum-zero plane in the orthonormal basis `(1,−1,0)/√2, (1,1,−2)/√6`.
pub fn symmetric3_irreps(p: &FiniteGroupPresentation) -> Result<Vec<ExplicitIrrep>> {
    let mut perms = Vec::with_capacity(p.order());
    for token in p.elements() {
        let perm: Vec<usize> = token
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidGroup(format!("`{token}` is not a permutation of 012")))?;
        perms.push(perm);
    }
    if perms.len() != 6 || perms.iter().any(|q| q.len() != 3) {
        return Err(Error::InvalidGroup("expected the six permutations of {0,1,2}".into()));
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let basis = [[1.0 / s2, -1.0 / s2, 0.0], [1.0 / s6, 1.0 / s6, -2.0 / s6]];

    let mut trivial = Vec::new();
    let mut sign = Vec::new();
    let mut standard = Vec::new();
    for perm in &perms {
        let inversions = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        trivial.push(DMatrix::from_element(1, 1, re(1.0)));
        sign.push(DMatrix::from_element(
            1,
            1,
            re(if inversions % 2 == 0 { 1.0 } else { -1.0 }),
        ));
        // P e_x = e_{perm(x)}, so (P v)_{perm(x)} = v_x.
        let apply = |v: &[f64; 3]| {
            let mut out = [0.0; 3];
            for x in 0..3 {
                out[perm[x]] = v[x];
            }
            out
        };
        let mut m = DMatrix::zeros(2, 2);
        for (j, bj) in basis.iter().enumerate() {
            let image = apply(bj);
            for (i, bi) in basis.iter().enumerate() {
                m[(i, j)] = re(bi.iter().zip(&image).map(|(a, b)| a * b).sum());
            }
        }
        standard.push(m);
    }
    Ok(vec![
        ExplicitIrrep {
            label: "t".into(),
            matrices: trivial,
        },
        ExplicitIrrep {
            label: "s".into(),
            matrices: sign,
        },
        ExplicitIrrep {
            label: "v".into(),
            matrices: standard,
        },
    ])
}

/// The characters `k ↦ e^{2πi jk/n}` of ℤₙ, labelled `"j"`.
pub fn cyclic_irreps(p: &FiniteGroupPresentation) -> Result<Vec<ExplicitIrrep>> {
    let n = p.order();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut matrices = Vec::with_capacity(n);
        for token in p.elements() {
            let k: usize = token
                .parse()
                .map_err(|_| Error::InvalidGroup(format!("`{token}` is not a residue")))?;
            let theta = 2.0 * PI * ((j * k) % n) as f64 / n as f64;
            matrices.push(DMatrix::from_element(1, 1, Complex64::from_polar(1.0, theta)));
        }
        out.push(ExplicitIrrep {
            label: j.to_string().into(),
            matrices,
        });
    }
    Ok(out)
}

/// The dual `Γ̂`: one 1-dimensional irrep per element, fusion given by the
/// group law and conjugation by inversion. The identity becomes the
/// trivial irrep.
pub fn finite_group_dual(p: &FiniteGroupPresentation) -> QuantumGroupData {
    let label = |g: usize| IrrepLabel::from(p.elements()[g].as_str());
    let order = p.identity_first();
    let irreps = order
        .iter()
        .map(|&g| {
            (
                label(g),
                IrrepInfo {
                    dim: 1,
                    f_eigenvalues: vec![1.0],
                    conjugate: label(p.inverse(g)),
                    conj_index_map: vec![0],
                },
            )
        })
        .collect();
    let mut fusion = FusionTable::new();
    for a in 0..p.order() {
        for b in 0..p.order() {
            fusion.insert(
                label(a),
                label(b),
                FusionEntry {
                    decomp: [(label(p.mul(a, b)), 1)].into(),
                    complete: true,
                },
            );
        }
    }
    QuantumGroupData::new(format!("dual:{}", p.name()), irreps, fusion, DEFAULT_TOLERANCE)
        .expect("dual data is structurally sound")
}

/// `C(Γ)` realised from an explicit complete set of irreps, with its norm
/// oracle and a brute-force oracle working on honest functions on `Γ`.
#[derive(Clone, Debug)]
pub struct FunctionAlgebra {
    pub data: QuantumGroupData,
    pub norm_oracle: FunctionNormOracle,
    pub brute_force: BruteForceOracle,
}

pub fn finite_group_function_algebra(
    p: &FiniteGroupPresentation,
    irreps: Vec<ExplicitIrrep>,
) -> Result<FunctionAlgebra> {
    for irrep in &irreps {
        irrep.check(p)?;
    }
    let order = p.order();
    let sum_sq: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
    if sum_sq != order {
        return Err(Error::InvalidIrreps(format!("Σ n_α² = {sum_sq} but |Γ| = {order}")));
    }
    let mut irreps = irreps;
    let triv = irreps
        .iter()
        .position(ExplicitIrrep::is_trivial)
        .ok_or_else(|| Error::InvalidIrreps("no trivial representation".into()))?;
    let t = irreps.remove(triv);
    irreps.insert(0, t);

    let n = order as f64;
    let chars: Vec<Vec<Complex64>> = irreps
        .iter()
        .map(|r| (0..order).map(|g| r.character(g)).collect())
        .collect();
    let pair = |x: &[Complex64], y: &[Complex64]| -> Complex64 {
        x.iter().zip(y).map(|(a, b)| a * b.conj()).sum::<Complex64>() / n
    };
    for (a, ca) in chars.iter().enumerate() {
        for (b, cb) in chars.iter().enumerate() {
            let expected = if a == b { 1.0 } else { 0.0 };
            if (pair(ca, cb) - expected).norm() > 1e-6 {
                return Err(Error::InvalidIrreps(format!(
                    "`{}` and `{}` fail character orthogonality",
                    irreps[a].label, irreps[b].label
                )));
            }
        }
    }

    let mut conjugates = Vec::with_capacity(irreps.len());
    for ca in &chars {
        let bar: Vec<Complex64> = ca.iter().map(|c| c.conj()).collect();
        let b = chars
            .iter()
            .position(|cb| cb.iter().zip(&bar).all(|(x, y)| (x - y).norm() <= 1e-6))
            .ok_or_else(|| Error::InvalidIrreps("set is not closed under conjugation".into()))?;
        conjugates.push(irreps[b].label.clone());
    }

    let mut fusion = FusionTable::new();
    for (a, ca) in chars.iter().enumerate() {
        for (b, cb) in chars.iter().enumerate() {
            let product: Vec<Complex64> = ca.iter().zip(cb).map(|(x, y)| x * y).collect();
            let mut decomp = BTreeMap::new();
            for (c, cc) in chars.iter().enumerate() {
                let m = pair(&product, cc);
                let rounded = m.re.round();
                if (m - Complex64::new(rounded, 0.0)).norm() > 1e-6 || rounded < 0.0 {
                    return Err(Error::InvalidIrreps(format!("non-integral multiplicity {m}")));
                }
                if rounded > 0.0 {
                    decomp.insert(irreps[c].label.clone(), rounded as u32);
                }
            }
            fusion.insert(
                irreps[a].label.clone(),
                irreps[b].label.clone(),
                FusionEntry { decomp, complete: true },
            );
        }
    }

    let infos = irreps
        .iter()
        .zip(conjugates)
        .map(|(r, conjugate)| {
            let dim = r.dim();
            (
                r.label.clone(),
                IrrepInfo {
                    dim,
                    f_eigenvalues: vec![1.0; dim],
                    conjugate,
                    conj_index_map: (0..dim).collect(),
                },
            )
        })
        .collect();
    let data = QuantumGroupData::new(p.name(), infos, fusion, DEFAULT_TOLERANCE)?;
    let brute_force = BruteForceOracle::new(p.clone(), irreps);
    Ok(FunctionAlgebra {
        data,
        norm_oracle: FunctionNormOracle {
            brute_force: brute_force.clone(),
        },
        brute_force,
    })
}

/// Works with elements of `C(Γ)` and `L¹(Γ)` as honest functions on the
/// group: `x(γ) = Σ c^α_{ij} π^α_{ij}(γ)`, where `f = x·φ` has density `x`
/// against the normalised counting measure.
#[derive(Clone, Debug)]
pub struct BruteForceOracle {
    group: FiniteGroupPresentation,
    irreps: Vec<ExplicitIrrep>,
    index: HashMap<IrrepLabel, usize>,
}

impl BruteForceOracle {
    fn new(group: FiniteGroupPresentation, irreps: Vec<ExplicitIrrep>) -> Self {
        let index = irreps.iter().enumerate().map(|(i, r)| (r.label.clone(), i)).collect();
        Self { group, irreps, index }
    }

    pub fn group(&self) -> &FiniteGroupPresentation {
        &self.group
    }

    pub fn to_function<S: Space>(&self, f: &Element<S>) -> Result<Vec<Complex64>> {
        let mut x = vec![Complex64::new(0.0, 0.0); self.group.order()];
        for (k, c) in f.terms() {
            let r = &self.irreps[*self
                .index
                .get(&k.irrep)
                .ok_or_else(|| Error::UnknownLabel(k.irrep.to_string()))?];
            for (g, m) in r.matrices.iter().enumerate() {
                x[g] += c * m[(k.row, k.col)];
            }
        }
        Ok(x)
    }

    /// Coefficients by orthogonality: `c^α_{ij} = n_α · mean_γ conj(π^α_{ij}(γ)) x(γ)`.
    pub fn from_function(&self, x: &[Complex64]) -> L1Element {
        let n = self.group.order() as f64;
        let mut out = L1Element::zero();
        for r in &self.irreps {
            let dim = r.dim();
            for i in 0..dim {
                for j in 0..dim {
                    let c: Complex64 = r
                        .matrices
                        .iter()
                        .zip(x)
                        .map(|(m, v)| m[(i, j)].conj() * v)
                        .sum::<Complex64>()
                        * (dim as f64 / n);
                    out.add_term(BasisKey::new(r.label.clone(), i, j), c);
                }
            }
        }
        out
    }

    /// `(x ⋆ z)(r) = mean_s x(s) z(s⁻¹ r)`.
    pub fn convolve_functions(&self, x: &[Complex64], z: &[Complex64]) -> Vec<Complex64> {
        let g = &self.group;
        let n = g.order();
        (0..n)
            .map(|r| (0..n).map(|s| x[s] * z[g.mul(g.inverse(s), r)]).sum::<Complex64>() / n as f64)
            .collect()
    }

    /// Conjugation average `r ↦ mean_s x(s r s⁻¹)`.
    pub fn class_average(&self, x: &[Complex64]) -> Vec<Complex64> {
        let g = &self.group;
        let n = g.order();
        (0..n)
            .map(|r| (0..n).map(|s| x[g.mul(g.mul(s, r), g.inverse(s))]).sum::<Complex64>() / n as f64)
            .collect()
    }

    /// `x^o(γ) = conj(x(γ⁻¹))`.
    pub fn involute_function(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.group.order())
            .map(|g| x[self.group.inverse(g)].conj())
            .collect()
    }

    pub fn convolve(&self, f: &L1Element, h: &L1Element) -> Result<L1Element> {
        let w = self.convolve_functions(&self.to_function(f)?, &self.to_function(h)?);
        Ok(self.from_function(&w))
    }

    pub fn beta1(&self, f: &L1Element) -> Result<L1Element> {
        Ok(self.from_function(&self.class_average(&self.to_function(f)?)))
    }
}

/// `‖x·φ‖₁ = mean_γ |x(γ)|`, `‖x‖_∞ = max_γ |x(γ)|`.
#[derive(Clone, Debug)]
pub struct FunctionNormOracle {
    brute_force: BruteForceOracle,
}

impl NormOracle for FunctionNormOracle {
    fn l1_norm(&self, f: &L1Element) -> Result<f64> {
        let x = self.brute_force.to_function(f)?;
        Ok(x.iter().map(|c| c.norm()).sum::<f64>() / x.len() as f64)
    }

    fn linf_norm(&self, x: &CoefficientElement) -> Result<f64> {
        Ok(self
            .brute_force
            .to_function(x)?
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max))
    }
}

/// Norms on the dual of a finite group, where `u^g` acts on `ℓ²(Γ)` as the
/// left translation `λ_g` and the Haar state is the normalised trace:
/// `‖x·φ‖₁ = tr|X| / |Γ|` and `‖x‖_∞ = ‖X‖_op` for `X = Σ c_g λ_g`.
#[derive(Clone, Debug)]
pub struct DualGroupNormOracle {
    group: FiniteGroupPresentation,
}

impl DualGroupNormOracle {
    pub fn new(group: FiniteGroupPresentation) -> Self {
        Self { group }
    }

    fn regular_operator<S: Space>(&self, x: &Element<S>) -> Result<DMatrix<Complex64>> {
        let n = self.group.order();
        let mut m = DMatrix::zeros(n, n);
        for (k, c) in x.terms() {
            let g = self
                .group
                .index_of(k.irrep.as_str())
                .ok_or_else(|| Error::UnknownLabel(k.irrep.to_string()))?;
            if k.row != 0 || k.col != 0 {
                return Err(Error::IndexOutOfRange {
                    irrep: k.irrep.to_string(),
                    row: k.row,
                    col: k.col,
                    dim: 1,
                });
            }
            for h in 0..n {
                m[(self.group.mul(g, h), h)] += *c;
            }
        }
        Ok(m)
    }
}

impl NormOracle for DualGroupNormOracle {
    fn l1_norm(&self, f: &L1Element) -> Result<f64> {
        let m = self.regular_operator(f)?;
        let n = m.nrows() as f64;
        Ok(m.singular_values().iter().sum::<f64>() / n)
    }

    fn linf_norm(&self, x: &CoefficientElement) -> Result<f64> {
        let m = self.regular_operator(x)?;
        Ok(m.singular_values().iter().copied().fold(0.0, f64::max))
    }
}
