//! L²(𝔾) on the basis `Λ(u^α_{ij})`.
//!
//! The inner product is linear in the first slot and conjugate-linear in
//! the second, `⟨Λ(x), Λ(y)⟩ = φ(y* x)`, so that
//! `⟨Λ(u^α_{ij}), Λ(u^β_{kl})⟩ = δ_{αβ} δ_{ik} δ_{jl} / (λ^α_i d_α)`.

use num_complex::Complex64;

use crate::element::{BasisKey, CoefficientElement, L1Element, L2Vector};
use crate::fusion_data::{CharacterRingElement, IrrepLabel, QuantumGroupData};
use crate::l1_algebra::{self, Centrality, CentralityMode, CentralityWitness};
use crate::Result;

/// `‖Λ(u^α_{ij})‖² = 1/(λ^α_i d_α)`.
pub fn basis_weight(g: &QuantumGroupData, key: &BasisKey) -> Result<f64> {
    let info = g.irrep(&key.irrep)?;
    Ok(1.0 / (info.f_eigenvalues[key.row] * info.quantum_dimension()))
}

pub fn inner(g: &QuantumGroupData, xi: &L2Vector, eta: &L2Vector) -> Result<Complex64> {
    xi.check(g)?;
    eta.check(g)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, a) in xi.terms() {
        let b = eta.coeff(k);
        if b != Complex64::new(0.0, 0.0) {
            acc += a * b.conj() * basis_weight(g, k)?;
        }
    }
    Ok(acc)
}

pub fn norm(g: &QuantumGroupData, xi: &L2Vector) -> Result<f64> {
    Ok(inner(g, xi, xi)?.re.max(0.0).sqrt())
}

/// `a(x·φ) = Λ(x)`: same coefficients, read in L².
pub fn a_map(g: &QuantumGroupData, f: &L1Element) -> Result<L2Vector> {
    f.check(g)?;
    Ok(f.clone().reinterpret())
}

/// Inverse of [`a_map`] on the finite span.
pub fn b_map(g: &QuantumGroupData, xi: &L2Vector) -> Result<L1Element> {
    xi.check(g)?;
    Ok(xi.clone().reinterpret())
}

/// `Λ(1)`.
pub fn unit_vector(g: &QuantumGroupData) -> L2Vector {
    L2Vector::basis(g.trivial().clone(), 0, 0)
}

/// `Λ(χ^α)`.
pub fn character_l2(g: &QuantumGroupData, alpha: &IrrepLabel) -> Result<L2Vector> {
    a_map(g, &l1_algebra::character_l1(g, alpha)?)
}

/// `Λ(χ_q^α)`.
pub fn quantum_character_l2(g: &QuantumGroupData, alpha: &IrrepLabel) -> Result<L2Vector> {
    a_map(g, &l1_algebra::quantum_character_l1(g, alpha)?)
}

/// `ξ ⋆ η = a(b(ξ) ⋆ b(η))`.
pub fn convolve_l2(g: &QuantumGroupData, xi: &L2Vector, eta: &L2Vector) -> Result<L2Vector> {
    a_map(g, &l1_algebra::convolve(g, &b_map(g, xi)?, &b_map(g, eta)?)?)
}

/// Closed form `β₂(φ)Λ(u^α_{kl}) = δ_{kl}/(λ^α_k d_α) · Λ(χ^α)`.
pub fn beta2_haar(g: &QuantumGroupData, xi: &L2Vector) -> Result<L2Vector> {
    xi.check(g)?;
    let mut out = L2Vector::zero();
    for (k, c) in xi.terms() {
        if k.row != k.col {
            continue;
        }
        let info = g.irrep(&k.irrep)?;
        let w = 1.0 / (info.f_eigenvalues[k.row] * info.quantum_dimension());
        for i in 0..info.dim {
            out.add_term(BasisKey::new(k.irrep.clone(), i, i), c * w);
        }
    }
    Ok(out)
}

/// `β₂(φ)Λ(x) = Σ λ(y_r·φ)Λ(x_r)` for `Γ(x) = Σ x_r ⊗ y_r`, evaluated with
/// `Γ(u^α_{ij}) = Σ_m u^α_{im} ⊗ u^α_{mj}` and `λ(f)Λ(z) = a(f ⋆ (z·φ))`.
pub fn beta2_haar_via_coproduct(g: &QuantumGroupData, xi: &L2Vector) -> Result<L2Vector> {
    xi.check(g)?;
    let mut out = L2Vector::zero();
    for (k, c) in xi.terms() {
        let n = g.irrep(&k.irrep)?.dim;
        for m in 0..n {
            let x_part = L1Element::basis(k.irrep.clone(), k.row, m);
            let y_part = L1Element::basis(k.irrep.clone(), m, k.col);
            let term = a_map(g, &l1_algebra::convolve(g, &y_part, &x_part)?)?;
            for (key, v) in term.terms() {
                out.add_term(key.clone(), c * v);
            }
        }
    }
    Ok(out)
}

/// Orthogonal projection onto `span{Λ(χ_q^α)}`:
/// `P_q Λ(u^α_{kl}) = δ_{kl}/d_α · Λ(χ_q^α)`.
pub fn pq_projection(g: &QuantumGroupData, xi: &L2Vector) -> Result<L2Vector> {
    xi.check(g)?;
    let mut out = L2Vector::zero();
    for (k, c) in xi.terms() {
        if k.row != k.col {
            continue;
        }
        let info = g.irrep(&k.irrep)?;
        let d = info.quantum_dimension();
        for (i, lam) in info.f_eigenvalues.iter().enumerate() {
            out.add_term(BasisKey::new(k.irrep.clone(), i, i), c * (lam / d));
        }
    }
    Ok(out)
}

/// `Λ(x) ↦ Λ(x*)`, conjugate-linear, with
/// `Λ(u^α_{ij})* = √(λ^α_j/λ^α_i) Λ(u^ᾱ_{σ(i)σ(j)})`.
pub fn star(g: &QuantumGroupData, xi: &L2Vector) -> Result<L2Vector> {
    xi.check(g)?;
    let mut out = L2Vector::zero();
    for (k, c) in xi.terms() {
        let info = g.irrep(&k.irrep)?;
        let lam = &info.f_eigenvalues;
        let sigma = &info.conj_index_map;
        let factor = (lam[k.col] / lam[k.row]).sqrt();
        out.add_term(
            BasisKey::new(info.conjugate.clone(), sigma[k.row], sigma[k.col]),
            c.conj() * factor,
        );
    }
    Ok(out)
}

/// `Σ_α d_α Λ(χ_q^α) ⋆ ξ` over the whole window; reproduces `ξ`.
pub fn expand_quantum_characters(g: &QuantumGroupData, xi: &L2Vector) -> Result<L2Vector> {
    xi.check(g)?;
    let mut out = L2Vector::zero();
    for (alpha, info) in g.irreps() {
        let piece = convolve_l2(g, &quantum_character_l2(g, alpha)?, xi)?;
        let d = info.quantum_dimension();
        for (k, v) in piece.terms() {
            out.add_term(k.clone(), v * d);
        }
    }
    Ok(out)
}

/// Restriction to the span of characters:
/// `r(u^α_{ij}) = δ_{ij} λ^α_i / d_α · χ^α`.
pub fn restrict_r(g: &QuantumGroupData, x: &CoefficientElement) -> Result<CharacterRingElement> {
    x.check(g)?;
    let mut out = CharacterRingElement::zero();
    for (k, c) in x.terms() {
        if k.row != k.col {
            continue;
        }
        let info = g.irrep(&k.irrep)?;
        out.add_term(
            k.irrep.clone(),
            c * (info.f_eigenvalues[k.row] / info.quantum_dimension()),
        );
    }
    Ok(out)
}

/// Centrality in the Banach algebra L²(𝔾): `ξ` must commute with every
/// `Λ(u^α_{ij})` in its support closure. Residuals are L² norms.
pub fn is_central_l2(g: &QuantumGroupData, xi: &L2Vector) -> Result<Centrality> {
    let tol = g.tolerance();
    for (label, m) in xi.blocks(g)? {
        let info = g.irrep(&label)?;
        let d = info.quantum_dimension();
        for i in 0..info.dim {
            for j in 0..info.dim {
                let r = l1_algebra::unit_commutator(info, &m, i, j)
                    .map(|(k, _, c)| c.norm_sqr() / (info.f_eigenvalues[k] * d))
                    .sum::<f64>()
                    .sqrt();
                if r > tol {
                    return Ok(Centrality {
                        central: false,
                        witness: Some(CentralityWitness {
                            mode: CentralityMode::Commutator,
                            at: BasisKey::new(label, i, j),
                            residual: r,
                        }),
                    });
                }
            }
        }
    }
    Ok(Centrality {
        central: true,
        witness: None,
    })
}
