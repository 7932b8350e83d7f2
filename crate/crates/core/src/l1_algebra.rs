//! The convolution algebra L¹(𝔾) on the basis `φ^α_{ij} = u^α_{ij}·φ`.
//!
//! Convolution is block diagonal with structure constants
//!
//! ```text
//! φ^α_{ij} ⋆ φ^β_{kl} = δ_{αβ} δ_{jk} / (λ^α_j d_α) · φ^α_{il}
//! ```
//!
//! so on each block it is `F · D_α · H` with `D_α = diag(1/(λ^α_j d_α))`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::element::{BasisKey, L1Element};
use crate::fusion_data::{IrrepInfo, IrrepLabel, QuantumGroupData};
use crate::instances::NormOracle;
use crate::{Error, Result};

fn structure_weights(info: &IrrepInfo) -> Vec<f64> {
    let d = info.quantum_dimension();
    info.f_eigenvalues.iter().map(|l| 1.0 / (l * d)).collect()
}

/// Below this many term pairs, products are formed termwise.
const SPARSE_PAIRS: usize = 256;

pub fn convolve(g: &QuantumGroupData, f: &L1Element, h: &L1Element) -> Result<L1Element> {
    if f.len() * h.len() <= SPARSE_PAIRS {
        f.check(g)?;
        h.check(g)?;
        let mut out = L1Element::zero();
        for (a, x) in f.terms() {
            for (b, y) in h.terms() {
                if a.irrep == b.irrep && a.col == b.row {
                    let info = g.irrep(&a.irrep)?;
                    let w = 1.0 / (info.f_eigenvalues[a.col] * info.quantum_dimension());
                    out.add_term(BasisKey::new(a.irrep.clone(), a.row, b.col), x * y * w);
                }
            }
        }
        return Ok(out);
    }
    let fb = f.blocks(g)?;
    let hb = h.blocks(g)?;
    let mut out = BTreeMap::new();
    for (label, fm) in &fb {
        let Some(hm) = hb.get(label) else { continue };
        let w = structure_weights(g.irrep(label)?);
        let mut scaled = fm.clone();
        for (j, wj) in w.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*wj);
        }
        out.insert(label.clone(), scaled * hm);
    }
    Ok(L1Element::from_blocks(&out))
}

/// `(c·φ^α_{ij})^o = c̄·φ^α_{ji}`.
pub fn involute(g: &QuantumGroupData, f: &L1Element) -> Result<L1Element> {
    f.check(g)?;
    Ok(L1Element::from_terms(f.terms().map(|(k, c)| {
        (BasisKey::new(k.irrep.clone(), k.col, k.row), c.conj())
    })))
}

/// `φ^α = Σ_i φ^α_{ii}`.
pub fn character_l1(g: &QuantumGroupData, alpha: &IrrepLabel) -> Result<L1Element> {
    let info = g.irrep(alpha)?;
    Ok(L1Element::from_terms((0..info.dim).map(|i| {
        (BasisKey::new(alpha.clone(), i, i), Complex64::new(1.0, 0.0))
    })))
}

/// `φ_q^α = Σ_i λ^α_i φ^α_{ii}`.
pub fn quantum_character_l1(g: &QuantumGroupData, alpha: &IrrepLabel) -> Result<L1Element> {
    let info = g.irrep(alpha)?;
    Ok(L1Element::from_terms(info.f_eigenvalues.iter().enumerate().map(
        |(i, l)| (BasisKey::new(alpha.clone(), i, i), Complex64::new(*l, 0.0)),
    )))
}

/// Element of `⊕_α M_{n_α}(ℂ)`; absent blocks are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BlockMatrixFamily {
    pub blocks: BTreeMap<IrrepLabel, DMatrix<Complex64>>,
}

impl BlockMatrixFamily {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn block(&self, alpha: &IrrepLabel) -> Option<&DMatrix<Complex64>> {
        self.blocks.get(alpha)
    }

    /// Blockwise product.
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut blocks = BTreeMap::new();
        for (label, a) in &self.blocks {
            let Some(b) = rhs.blocks.get(label) else { continue };
            blocks.insert(label.clone(), sparse_left_product(a, b));
        }
        Self { blocks }
    }

    /// Blockwise adjoint.
    pub fn adjoint(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(|(l, m)| (l.clone(), m.adjoint())).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|(l, m)| (l.clone(), m * c)).collect(),
        }
    }

    /// Largest entrywise distance, absent blocks counting as zero.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (label, a) in &self.blocks {
            worst = worst.max(match other.blocks.get(label) {
                Some(b) => (a - b).camax(),
                None => a.camax(),
            });
        }
        for (label, b) in &other.blocks {
            if !self.blocks.contains_key(label) {
                worst = worst.max(b.camax());
            }
        }
        worst
    }
}

// Skips zero entries of the left factor; matrix-unit sweeps multiply
// single-entry matrices.
fn sparse_left_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = DMatrix::zeros(a.nrows(), b.ncols());
    for m in 0..a.ncols() {
        for i in 0..a.nrows() {
            let x = a[(i, m)];
            if x == zero {
                continue;
            }
            for l in 0..b.ncols() {
                out[(i, l)] += x * b[(m, l)];
            }
        }
    }
    out
}

/// The left regular representation in block form: `φ^α_{ij}` maps to
/// `E_{ij} / (d_α √(λ_i λ_j))` in block `α`.
pub fn lambda_hat(g: &QuantumGroupData, f: &L1Element) -> Result<BlockMatrixFamily> {
    let mut blocks = f.blocks(g)?;
    for (label, m) in blocks.iter_mut() {
        let info = g.irrep(label)?;
        let d = info.quantum_dimension();
        let lam = &info.f_eigenvalues;
        for i in 0..info.dim {
            for j in 0..info.dim {
                m[(i, j)] /= d * (lam[i] * lam[j]).sqrt();
            }
        }
    }
    Ok(BlockMatrixFamily { blocks })
}

/// Matrix unit `e^α_{ij} = d_α √(λ_i λ_j) λ̂(φ^α_{ij})`.
pub fn matrix_unit(g: &QuantumGroupData, alpha: &IrrepLabel, i: usize, j: usize) -> Result<BlockMatrixFamily> {
    let info = g.irrep(alpha)?;
    let scale = info.quantum_dimension() * (info.f_eigenvalues[i] * info.f_eigenvalues[j]).sqrt();
    Ok(lambda_hat(g, &L1Element::basis(alpha.clone(), i, j))?.scale(Complex64::new(scale, 0.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralityMode {
    /// `f ⋆ φ^α_{ij} = φ^α_{ij} ⋆ f` over the support closure of `f`.
    Commutator,
    /// Every block of `λ̂(f)` is a scalar matrix.
    ScalarBlocks,
}

impl FromStr for CentralityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "commutator" => Ok(CentralityMode::Commutator),
            "scalar-blocks" => Ok(CentralityMode::ScalarBlocks),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for CentralityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CentralityMode::Commutator => "commutator",
            CentralityMode::ScalarBlocks => "scalar-blocks",
        })
    }
}

/// First violation found by a centrality test. In commutator mode `at` is
/// the basis functional that fails to commute; in scalar-blocks mode it is
/// the offending block entry.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralityWitness {
    pub mode: CentralityMode,
    pub at: BasisKey,
    pub residual: f64,
}

impl fmt::Display for CentralityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated at {} (residual {:.3e})",
            self.mode, self.at, self.residual
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Centrality {
    pub central: bool,
    pub witness: Option<CentralityWitness>,
}

/// Nonzero entries of `f ⋆ φ_{ij} − φ_{ij} ⋆ f` within one block, where `m`
/// is the block of `f`. Only column `j` and row `i` can be nonzero:
/// `(f ⋆ φ_{ij})_{kj} = m_{ki} w_i` and `(φ_{ij} ⋆ f)_{il} = w_j m_{jl}`.
pub(crate) fn unit_commutator<'a>(
    info: &IrrepInfo,
    m: &'a DMatrix<Complex64>,
    i: usize,
    j: usize,
) -> impl Iterator<Item = (usize, usize, Complex64)> + 'a {
    let w = structure_weights(info);
    let (wi, wj) = (w[i], w[j]);
    let n = info.dim;
    let column = (0..n).filter(move |&k| k != i).map(move |k| (k, j, m[(k, i)] * wi));
    let row = (0..n).filter(move |&l| l != j).map(move |l| (i, l, -m[(j, l)] * wj));
    let corner = std::iter::once((i, j, m[(i, i)] * wi - m[(j, j)] * wj));
    column.chain(row).chain(corner)
}

pub fn is_central(g: &QuantumGroupData, f: &L1Element, mode: CentralityMode) -> Result<Centrality> {
    let tol = g.tolerance();
    let witness = match mode {
        CentralityMode::Commutator => {
            let mut found = None;
            'outer: for (label, m) in f.blocks(g)? {
                let info = g.irrep(&label)?;
                for i in 0..info.dim {
                    for j in 0..info.dim {
                        let r = unit_commutator(info, &m, i, j)
                            .map(|(_, _, c)| c.norm())
                            .fold(0.0, f64::max);
                        if r > tol {
                            found = Some(CentralityWitness {
                                mode,
                                at: BasisKey::new(label.clone(), i, j),
                                residual: r,
                            });
                            break 'outer;
                        }
                    }
                }
            }
            found
        }
        CentralityMode::ScalarBlocks => {
            let lam = lambda_hat(g, f)?;
            let mut found = None;
            'blocks: for (label, m) in &lam.blocks {
                let diag = m[(0, 0)];
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        let target = if i == j { diag } else { Complex64::new(0.0, 0.0) };
                        let r = (m[(i, j)] - target).norm();
                        if r > tol {
                            found = Some(CentralityWitness {
                                mode,
                                at: BasisKey::new(label.clone(), i, j),
                                residual: r,
                            });
                            break 'blocks;
                        }
                    }
                }
            }
            found
        }
    };
    Ok(Centrality {
        central: witness.is_none(),
        witness,
    })
}

/// Runs both modes and insists they agree.
pub fn is_central_cross_checked(g: &QuantumGroupData, f: &L1Element) -> Result<Centrality> {
    let comm = is_central(g, f, CentralityMode::Commutator)?;
    let blocks = is_central(g, f, CentralityMode::ScalarBlocks)?;
    if comm.central != blocks.central {
        let describe = |c: &Centrality| c.witness.as_ref().map_or("central".to_string(), |w| w.to_string());
        return Err(Error::ModeDisagreement(format!(
            "commutator: {}; scalar-blocks: {}",
            describe(&comm),
            describe(&blocks)
        )));
    }
    Ok(comm)
}

/// Kac-case central projection: `φ^α_{ij} ↦ (δ_{ij}/n_α) φ^α`.
pub fn beta1(g: &QuantumGroupData, f: &L1Element) -> Result<L1Element> {
    if !g.is_kac() {
        return Err(Error::NonKacInstance(g.name().to_string()));
    }
    let mut out = L1Element::zero();
    for (label, m) in f.blocks(g)? {
        let n = m.nrows();
        let avg = m.trace() / n as f64;
        for i in 0..n {
            out.add_term(BasisKey::new(label.clone(), i, i), avg);
        }
    }
    Ok(out)
}

pub fn l1_norm(g: &QuantumGroupData, f: &L1Element, oracle: Option<&dyn NormOracle>) -> Result<f64> {
    f.check(g)?;
    oracle.ok_or(Error::NoNormOracle)?.l1_norm(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{finite_group_dual, s3_function_algebra, suq2_truncated, FiniteGroupPresentation};

    fn l(s: &str) -> IrrepLabel {
        IrrepLabel::from(s)
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn suq2_structure_constant() {
        let g = suq2_truncated(0.5, 2).unwrap();
        let out = convolve(&g, &L1Element::basis("1", 0, 1), &L1Element::basis("1", 1, 0)).unwrap();
        let expected = L1Element::basis("1", 0, 0).scale(c(0.8));
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn different_blocks_annihilate() {
        let g = suq2_truncated(0.5, 2).unwrap();
        let out = convolve(&g, &L1Element::basis("1", 0, 1), &L1Element::basis("2", 1, 0)).unwrap();
        assert!(out.is_empty());
        let out = convolve(&g, &L1Element::basis("1", 0, 1), &L1Element::basis("1", 0, 1)).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn haar_functional_is_idempotent() {
        let g = suq2_truncated(0.5, 2).unwrap();
        let t = L1Element::basis("0", 0, 0);
        assert_eq!(convolve(&g, &t, &t).unwrap(), t);
        let f = &L1Element::basis("0", 0, 0).scale(c(3.0)) + &L1Element::basis("2", 1, 2);
        assert_eq!(convolve(&g, &t, &f).unwrap(), L1Element::basis("0", 0, 0).scale(c(3.0)));
    }

    #[test]
    fn involution_examples() {
        let g = suq2_truncated(0.5, 2).unwrap();
        assert_eq!(
            involute(&g, &L1Element::basis("1", 0, 1)).unwrap(),
            L1Element::basis("1", 1, 0)
        );
        let x = L1Element::basis("1", 0, 0).scale(Complex64::new(0.0, 1.0));
        let y = L1Element::basis("1", 0, 0).scale(Complex64::new(0.0, -1.0));
        assert_eq!(involute(&g, &x).unwrap(), y);
    }

    #[test]
    fn quantum_character_at_half() {
        let g = suq2_truncated(0.5, 2).unwrap();
        let phi_q = quantum_character_l1(&g, &l("1")).unwrap();
        let expected = &L1Element::basis("1", 0, 0).scale(c(2.0)) + &L1Element::basis("1", 1, 1).scale(c(0.5));
        assert_eq!(phi_q, expected);
        assert_eq!(
            quantum_character_l1(&g, &l("0")).unwrap(),
            character_l1(&g, &l("0")).unwrap()
        );
    }

    #[test]
    fn lambda_hat_of_quantum_character_is_scaled_identity() {
        let g = suq2_truncated(0.5, 3).unwrap();
        for alpha in g.labels() {
            let info = g.irrep(alpha).unwrap();
            let lam = lambda_hat(&g, &quantum_character_l1(&g, alpha).unwrap()).unwrap();
            let expected = DMatrix::<Complex64>::identity(info.dim, info.dim) / c(info.quantum_dimension());
            assert!((lam.block(alpha).unwrap() - expected).camax() < 1e-14);
            assert_eq!(lam.blocks.len(), 1);
        }
        assert_eq!(lambda_hat(&g, &L1Element::zero()).unwrap(), BlockMatrixFamily::zero());
    }

    #[test]
    fn unit_commutator_matches_convolution() {
        let g = suq2_truncated(0.5, 3).unwrap();
        let alpha = l("3");
        let info = g.irrep(&alpha).unwrap();
        let f = L1Element::from_terms((0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| {
            (
                BasisKey::new(alpha.clone(), i, j),
                Complex64::new(1.0 + i as f64, 0.5 * j as f64 - 0.7),
            )
        }));
        let m = f.blocks(&g).unwrap().remove(&alpha).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e = L1Element::basis(alpha.clone(), i, j);
                let direct = &convolve(&g, &f, &e).unwrap() - &convolve(&g, &e, &f).unwrap();
                let closed = L1Element::from_terms(
                    unit_commutator(info, &m, i, j).map(|(r, s, v)| (BasisKey::new(alpha.clone(), r, s), v)),
                );
                assert!(direct.max_abs_diff(&closed) < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn plain_character_is_not_central_for_q_half() {
        let g = suq2_truncated(0.5, 2).unwrap();
        let chi = character_l1(&g, &l("1")).unwrap();
        let comm = is_central(&g, &chi, CentralityMode::Commutator).unwrap();
        assert!(!comm.central);
        assert_eq!(comm.witness.unwrap().at, BasisKey::new(l("1"), 0, 1));
        assert!(!is_central(&g, &chi, CentralityMode::ScalarBlocks).unwrap().central);
        for alpha in g.labels() {
            let q = quantum_character_l1(&g, alpha).unwrap();
            assert!(is_central_cross_checked(&g, &q).unwrap().central);
        }
    }

    #[test]
    fn unknown_mode_is_an_error() {
        assert!(matches!(
            "sampling".parse::<CentralityMode>(),
            Err(Error::UnknownMode(_))
        ));
        assert_eq!(
            "scalar-blocks".parse::<CentralityMode>().unwrap(),
            CentralityMode::ScalarBlocks
        );
    }

    #[test]
    fn abelian_dual_elements_are_central() {
        let g = finite_group_dual(&FiniteGroupPresentation::cyclic(4).unwrap());
        let f = L1Element::from_terms(g.basis().into_iter().enumerate().map(|(i, k)| (k, c(i as f64 + 0.5))));
        assert!(is_central_cross_checked(&g, &f).unwrap().central);
    }

    #[test]
    fn beta1_examples_on_s3() {
        let g = s3_function_algebra().data;
        let half_chi = character_l1(&g, &l("v")).unwrap().scale(c(0.5));
        assert!(beta1(&g, &L1Element::basis("v", 0, 0)).unwrap().max_abs_diff(&half_chi) < 1e-15);
        assert!(beta1(&g, &L1Element::basis("v", 0, 1)).unwrap().is_empty());
        let t = L1Element::basis("t", 0, 0);
        assert_eq!(beta1(&g, &t).unwrap(), t);
    }

    #[test]
    fn beta1_rejects_non_kac() {
        let g = suq2_truncated(0.5, 2).unwrap();
        assert!(matches!(
            beta1(&g, &L1Element::basis("1", 0, 0)),
            Err(Error::NonKacInstance(_))
        ));
    }

    #[test]
    fn l1_norm_needs_an_oracle() {
        let fa = s3_function_algebra();
        let t = L1Element::basis("t", 0, 0);
        assert!((l1_norm(&fa.data, &t, Some(&fa.norm_oracle)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            l1_norm(&fa.data, &L1Element::zero(), Some(&fa.norm_oracle)).unwrap(),
            0.0
        );
        assert!(matches!(l1_norm(&fa.data, &t, None), Err(Error::NoNormOracle)));
    }
}
