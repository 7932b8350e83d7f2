//! Sparse coefficient vectors over the matrix-coefficient basis.
//!
//! The same index set `(α, i, j)` labels three different spaces: the
//! functionals `φ^α_{ij}` of L¹, the vectors `Λ(u^α_{ij})` of L², and the
//! coefficients `u^α_{ij}` themselves. [`Element`] carries a zero-sized
//! space marker so the three cannot be mixed up by accident.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fusion_data::{IrrepLabel, QuantumGroupData};
use crate::{Error, Result};

/// Index of one basis element: irrep label plus 0-based row and column.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKey {
    pub irrep: IrrepLabel,
    pub row: usize,
    pub col: usize,
}

impl BasisKey {
    pub fn new(irrep: IrrepLabel, row: usize, col: usize) -> Self {
        Self { irrep, row, col }
    }
}

impl fmt::Display for BasisKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.irrep, self.row, self.col)
    }
}

pub trait Space: Clone + fmt::Debug + Default + PartialEq + Send + Sync + 'static {
    /// Tag written to the `"space"` field of element files.
    const TAG: &'static str;
}

/// The predual L¹(𝔾), basis `φ^α_{ij} = u^α_{ij}·φ`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct L1;

/// The GNS space L²(𝔾), basis `Λ(u^α_{ij})`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct L2;

/// The dense coefficient algebra inside L∞(𝔾), basis `u^α_{ij}`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Linf;

impl Space for L1 {
    const TAG: &'static str = "L1";
}
impl Space for L2 {
    const TAG: &'static str = "L2";
}
impl Space for Linf {
    const TAG: &'static str = "Linf";
}

/// Finite complex combination of basis elements of the space `S`.
///
/// Exact zeros are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Element<S: Space> {
    terms: BTreeMap<BasisKey, Complex64>,
    _space: PhantomData<S>,
}

pub type L1Element = Element<L1>;
pub type L2Vector = Element<L2>;
pub type CoefficientElement = Element<Linf>;

impl<S: Space> Element<S> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
            _space: PhantomData,
        }
    }

    pub fn basis(irrep: impl Into<IrrepLabel>, row: usize, col: usize) -> Self {
        let mut e = Self::zero();
        e.add_term(BasisKey::new(irrep.into(), row, col), Complex64::new(1.0, 0.0));
        e
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (BasisKey, Complex64)>,
    {
        let mut e = Self::zero();
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    /// Adds `c` to the coefficient at `key`.
    pub fn add_term(&mut self, key: BasisKey, c: Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if c != zero {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == zero {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, key: &BasisKey) -> Complex64 {
        self.terms.get(key).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Irrep labels carrying at least one nonzero coefficient, in label order.
    pub fn support_irreps(&self) -> Vec<IrrepLabel> {
        let mut out: Vec<IrrepLabel> = Vec::new();
        for k in self.terms.keys() {
            if out.last() != Some(&k.irrep) {
                out.push(k.irrep.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sup-distance between coefficient vectors.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    /// Checks that every label exists in `g` and every index is in range.
    pub fn check(&self, g: &QuantumGroupData) -> Result<()> {
        for k in self.terms.keys() {
            let dim = g.irrep(&k.irrep)?.dim;
            if k.row >= dim || k.col >= dim {
                return Err(Error::IndexOutOfRange {
                    irrep: k.irrep.to_string(),
                    row: k.row,
                    col: k.col,
                    dim,
                });
            }
        }
        Ok(())
    }

    /// Dense `n_α × n_α` coefficient blocks, one per irrep in the support.
    pub fn blocks(&self, g: &QuantumGroupData) -> Result<BTreeMap<IrrepLabel, DMatrix<Complex64>>> {
        self.check(g)?;
        let mut out: BTreeMap<IrrepLabel, DMatrix<Complex64>> = BTreeMap::new();
        for (k, c) in &self.terms {
            let block = match out.get_mut(&k.irrep) {
                Some(b) => b,
                None => {
                    let n = g.irrep(&k.irrep)?.dim;
                    out.entry(k.irrep.clone()).or_insert_with(|| DMatrix::zeros(n, n))
                }
            };
            block[(k.row, k.col)] += *c;
        }
        Ok(out)
    }

    pub fn from_blocks<'a, I>(blocks: I) -> Self
    where
        I: IntoIterator<Item = (&'a IrrepLabel, &'a DMatrix<Complex64>)>,
    {
        let mut e = Self::zero();
        for (label, m) in blocks {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let c = m[(i, j)];
                    if c != Complex64::new(0.0, 0.0) {
                        e.terms.insert(BasisKey::new(label.clone(), i, j), c);
                    }
                }
            }
        }
        e
    }

    /// Same coefficients, read in another space.
    pub(crate) fn reinterpret<T: Space>(self) -> Element<T> {
        Element {
            terms: self.terms,
            _space: PhantomData,
        }
    }

    pub fn to_file(&self) -> ElementFile {
        ElementFile {
            space: S::TAG.to_string(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermRecord {
                    irrep: k.irrep.to_string(),
                    row: k.row,
                    col: k.col,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn from_file(file: &ElementFile) -> Result<Self> {
        if file.space != S::TAG {
            return Err(Error::SpaceMismatch {
                expected: S::TAG.to_string(),
                found: file.space.clone(),
            });
        }
        Ok(Self::from_terms(file.terms.iter().map(|t| {
            (
                BasisKey::new(IrrepLabel::from(t.irrep.as_str()), t.row, t.col),
                Complex64::new(t.re, t.im),
            )
        })))
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }
}

impl<S: Space> Add for &Element<S> {
    type Output = Element<S>;

    fn add(self, rhs: Self) -> Element<S> {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), *c);
        }
        out
    }
}

impl<S: Space> Sub for &Element<S> {
    type Output = Element<S>;

    fn sub(self, rhs: Self) -> Element<S> {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -*c);
        }
        out
    }
}

impl<S: Space> Neg for &Element<S> {
    type Output = Element<S>;

    fn neg(self) -> Element<S> {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl<S: Space> Mul<&Element<S>> for Complex64 {
    type Output = Element<S>;

    fn mul(self, rhs: &Element<S>) -> Element<S> {
        rhs.scale(self)
    }
}

impl<S: Space> Mul<&Element<S>> for f64 {
    type Output = Element<S>;

    fn mul(self, rhs: &Element<S>) -> Element<S> {
        rhs.scale(Complex64::new(self, 0.0))
    }
}

/// On-disk element representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementFile {
    pub space: String,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub irrep: String,
    pub row: usize,
    pub col: usize,
    pub re: f64,
    pub im: f64,
}

/// An element file whose space is only known after reading it.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyElement {
    L1(L1Element),
    L2(L2Vector),
    Linf(CoefficientElement),
}

impl AnyElement {
    pub fn space(&self) -> &'static str {
        match self {
            AnyElement::L1(_) => L1::TAG,
            AnyElement::L2(_) => L2::TAG,
            AnyElement::Linf(_) => Linf::TAG,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: ElementFile = serde_json::from_str(s)?;
        match file.space.as_str() {
            "L1" => Ok(AnyElement::L1(Element::from_file(&file)?)),
            "L2" => Ok(AnyElement::L2(Element::from_file(&file)?)),
            "Linf" => Ok(AnyElement::Linf(Element::from_file(&file)?)),
            other => Err(Error::SpaceMismatch {
                expected: "L1, L2 or Linf".to_string(),
                found: other.to_string(),
            }),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        match self {
            AnyElement::L1(e) => e.to_json_string(),
            AnyElement::L2(e) => e.to_json_string(),
            AnyElement::Linf(e) => e.to_json_string(),
        }
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }

    pub fn check(&self, g: &QuantumGroupData) -> Result<()> {
        match self {
            AnyElement::L1(e) => e.check(g),
            AnyElement::L2(e) => e.check(g),
            AnyElement::Linf(e) => e.check(g),
        }
    }

    pub fn terms(&self) -> Vec<(BasisKey, Complex64)> {
        let collect = |it: &mut dyn Iterator<Item = (&BasisKey, &Complex64)>| {
            it.map(|(k, c)| (k.clone(), *c)).collect::<Vec<_>>()
        };
        match self {
            AnyElement::L1(e) => collect(&mut e.terms()),
            AnyElement::L2(e) => collect(&mut e.terms()),
            AnyElement::Linf(e) => collect(&mut e.terms()),
        }
    }
}
