//! Seeded random elements for randomized checks.
//!
//! Coefficients are uniform in the complex unit square `[0,1) + i[0,1)` and
//! every basis element of the window is populated.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::element::{BasisKey, Element, L1Element, L2Vector, Space};
use crate::fusion_data::{CharacterRingElement, QuantumGroupData};
use crate::l1_algebra::{character_l1, quantum_character_l1};
use crate::l2_space::character_l2;
use crate::Result;

/// Independent deterministic stream `stream` derived from `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_scalar<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random::<f64>(), rng.random::<f64>())
}

/// Full-support element of any space.
pub fn random_element<S: Space, R: Rng>(g: &QuantumGroupData, rng: &mut R) -> Element<S> {
    Element::from_terms(g.basis().into_iter().map(|k: BasisKey| (k, random_scalar(rng))))
}

/// Random combination of quantum characters `Σ c_α φ_q^α`, central in L¹.
pub fn random_central<R: Rng>(g: &QuantumGroupData, rng: &mut R) -> Result<L1Element> {
    let mut out = L1Element::zero();
    for alpha in g.labels() {
        out = &out + &quantum_character_l1(g, alpha)?.scale(random_scalar(rng));
    }
    Ok(out)
}

/// Random combination of plain characters `Σ c_α φ^α`.
pub fn random_character_functional<R: Rng>(g: &QuantumGroupData, rng: &mut R) -> Result<L1Element> {
    let mut out = L1Element::zero();
    for alpha in g.labels() {
        out = &out + &character_l1(g, alpha)?.scale(random_scalar(rng));
    }
    Ok(out)
}

/// Random vector in `span{Λ(χ^α)}`.
pub fn random_character_vector<R: Rng>(g: &QuantumGroupData, rng: &mut R) -> Result<L2Vector> {
    let mut out = L2Vector::zero();
    for alpha in g.labels() {
        out = &out + &character_l2(g, alpha)?.scale(random_scalar(rng));
    }
    Ok(out)
}

pub fn random_character_ring_element<R: Rng>(g: &QuantumGroupData, rng: &mut R) -> CharacterRingElement {
    CharacterRingElement::from_terms(g.labels().map(|l| (l.clone(), random_scalar(rng))))
}
