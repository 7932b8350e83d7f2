//! Convolution, involution and β₁ on C(S₃) against a function-level oracle
//! written here from scratch: S₃ as permutations of {0,1,2}, the 2-dim irrep
//! realized on the plane x+y+z = 0 in a basis of our own choosing.
//!
//! Structure constants do not depend on the unitary realization of an
//! irrep, so coefficients computed this way must match the library.

use cqg_core::element::BasisKey;
use cqg_core::instances::s3_function_algebra;
use cqg_core::l1_algebra::{beta1, convolve, involute, l1_norm};
use cqg_core::random::{random_element, rng_for};
use cqg_core::{Instance, L1Element, QuantumGroupData};
use nalgebra::{DMatrix, Matrix3, Matrix3x2};
use num_complex::Complex64;

const TOL: f64 = 1e-9;

type Perm = [usize; 3];

struct Oracle {
    elements: Vec<Perm>,
    /// `(label, matrices per element)`
    irreps: Vec<(&'static str, Vec<DMatrix<Complex64>>)>,
}

fn compose(p: &Perm, q: &Perm) -> Perm {
    [p[q[0]], p[q[1]], p[q[2]]]
}

fn inverse(p: &Perm) -> Perm {
    let mut out = [0; 3];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn sign(p: &Perm) -> f64 {
    let mut s = 1.0;
    for i in 0..3 {
        for j in i + 1..3 {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

impl Oracle {
    fn new() -> Self {
        let elements: Vec<Perm> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        // orthonormal basis of the sum-zero plane, deliberately not the
        // library's
        let s2 = 2f64.sqrt();
        let s6 = 6f64.sqrt();
        let basis = Matrix3x2::new(0.0, 2.0 / s6, 1.0 / s2, -1.0 / s6, -1.0 / s2, -1.0 / s6);
        let perm_matrix = |p: &Perm| {
            let mut m = Matrix3::zeros();
            for (i, &j) in p.iter().enumerate() {
                m[(j, i)] = 1.0;
            }
            m
        };
        let one = |x: f64| DMatrix::from_element(1, 1, Complex64::new(x, 0.0));
        let t = elements.iter().map(|_| one(1.0)).collect();
        let s = elements.iter().map(|p| one(sign(p))).collect();
        let v = elements
            .iter()
            .map(|p| {
                let m = basis.transpose() * perm_matrix(p) * basis;
                DMatrix::from_fn(2, 2, |i, j| Complex64::new(m[(i, j)], 0.0))
            })
            .collect();
        Self {
            elements,
            irreps: vec![("t", t), ("s", s), ("v", v)],
        }
    }

    fn index(&self, p: &Perm) -> usize {
        self.elements.iter().position(|q| q == p).unwrap()
    }

    fn to_function(&self, f: &L1Element) -> Vec<Complex64> {
        let mut x = vec![Complex64::new(0.0, 0.0); 6];
        for (k, c) in f.terms() {
            let (_, ms) = self.irreps.iter().find(|(l, _)| *l == k.irrep.as_str()).unwrap();
            for (g, m) in ms.iter().enumerate() {
                x[g] += c * m[(k.row, k.col)];
            }
        }
        x
    }

    fn decompose(&self, x: &[Complex64]) -> L1Element {
        let mut out = L1Element::zero();
        for (label, ms) in &self.irreps {
            let n = ms[0].nrows();
            for i in 0..n {
                for j in 0..n {
                    let c: Complex64 = ms.iter().zip(x).map(|(m, v)| m[(i, j)].conj() * v).sum();
                    out.add_term(BasisKey::new((*label).into(), i, j), c * (n as f64 / 6.0));
                }
            }
        }
        out
    }

    fn convolve(&self, f: &L1Element, h: &L1Element) -> L1Element {
        let (x, z) = (self.to_function(f), self.to_function(h));
        let w: Vec<Complex64> = self
            .elements
            .iter()
            .map(|r| {
                self.elements
                    .iter()
                    .map(|s| x[self.index(s)] * z[self.index(&compose(&inverse(s), r))])
                    .sum::<Complex64>()
                    / 6.0
            })
            .collect();
        self.decompose(&w)
    }

    fn involute(&self, f: &L1Element) -> L1Element {
        let x = self.to_function(f);
        let w: Vec<Complex64> = self
            .elements
            .iter()
            .map(|r| x[self.index(&inverse(r))].conj())
            .collect();
        self.decompose(&w)
    }

    fn class_average(&self, f: &L1Element) -> L1Element {
        let x = self.to_function(f);
        let w: Vec<Complex64> = self
            .elements
            .iter()
            .map(|r| {
                self.elements
                    .iter()
                    .map(|s| x[self.index(&compose(&compose(s, r), &inverse(s)))])
                    .sum::<Complex64>()
                    / 6.0
            })
            .collect();
        self.decompose(&w)
    }
}

fn s3() -> (Instance, QuantumGroupData) {
    let inst: Instance = s3_function_algebra().into();
    let g = inst.data.clone();
    (inst, g)
}

fn basis_elements(g: &QuantumGroupData) -> Vec<L1Element> {
    g.basis()
        .into_iter()
        .map(|k| L1Element::basis(k.irrep, k.row, k.col))
        .collect()
}

#[test]
fn oracle_round_trips_coefficients() {
    let (_, g) = s3();
    let oracle = Oracle::new();
    let mut rng = rng_for(7, 0);
    for _ in 0..20 {
        let f: L1Element = random_element(&g, &mut rng);
        assert!(oracle.decompose(&oracle.to_function(&f)).max_abs_diff(&f) < TOL);
    }
}

#[test]
fn convolution_matches_group_summation() {
    let (_, g) = s3();
    let oracle = Oracle::new();
    let basis = basis_elements(&g);
    for f in &basis {
        for h in &basis {
            let r = convolve(&g, f, h).unwrap().max_abs_diff(&oracle.convolve(f, h));
            assert!(r < TOL, "{f:?} * {h:?}: {r:e}");
        }
    }
    let mut rng = rng_for(42, 1);
    for _ in 0..100 {
        let f: L1Element = random_element(&g, &mut rng);
        let h: L1Element = random_element(&g, &mut rng);
        assert!(convolve(&g, &f, &h).unwrap().max_abs_diff(&oracle.convolve(&f, &h)) < TOL);
        assert!(involute(&g, &f).unwrap().max_abs_diff(&oracle.involute(&f)) < TOL);
    }
}

#[test]
fn v_block_example() {
    let (_, g) = s3();
    let oracle = Oracle::new();
    let f = L1Element::basis("v", 0, 0);
    let h = L1Element::basis("v", 0, 1);
    let expected = oracle.convolve(&f, &h);
    assert!(expected.max_abs_diff(&L1Element::basis("v", 0, 1).scale(Complex64::new(0.5, 0.0))) < TOL);
    assert!(convolve(&g, &f, &h).unwrap().max_abs_diff(&expected) < TOL);
}

#[test]
fn beta1_matches_class_averaging() {
    let (_, g) = s3();
    let oracle = Oracle::new();
    for f in basis_elements(&g) {
        assert!(beta1(&g, &f).unwrap().max_abs_diff(&oracle.class_average(&f)) < TOL);
    }
    let mut rng = rng_for(42, 2);
    for _ in 0..100 {
        let f: L1Element = random_element(&g, &mut rng);
        assert!(beta1(&g, &f).unwrap().max_abs_diff(&oracle.class_average(&f)) < TOL);
    }
    let half = Complex64::new(0.5, 0.0);
    let v = &L1Element::basis("v", 0, 0) + &L1Element::basis("v", 1, 1);
    assert!(
        beta1(&g, &L1Element::basis("v", 0, 0))
            .unwrap()
            .max_abs_diff(&v.scale(half))
            < TOL
    );
    assert!(beta1(&g, &L1Element::basis("v", 0, 1)).unwrap().is_empty());
    let triv = L1Element::basis("t", 0, 0);
    assert_eq!(beta1(&g, &triv).unwrap(), triv);
}

#[test]
fn norms_and_contractivity() {
    let (inst, g) = s3();
    let oracle = inst.norm_oracle();
    assert!((l1_norm(&g, &L1Element::basis("t", 0, 0), oracle).unwrap() - 1.0).abs() < TOL);
    assert_eq!(l1_norm(&g, &L1Element::zero(), oracle).unwrap(), 0.0);
    let mut rng = rng_for(42, 3);
    for _ in 0..100 {
        let f: L1Element = random_element(&g, &mut rng);
        let before = l1_norm(&g, &f, oracle).unwrap();
        let after = l1_norm(&g, &beta1(&g, &f).unwrap(), oracle).unwrap();
        assert!(after <= before + TOL, "{after} > {before}");
    }
    assert!(l1_norm(&g, &L1Element::zero(), None).is_err());
}
