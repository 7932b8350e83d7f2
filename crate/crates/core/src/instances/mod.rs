//! Built-in quantum groups, instance files, and the oracles that come with
//! classical instances.

mod finite;
mod free;

use std::fmt;
use std::path::Path;
use std::sync::Arc;

pub use finite::{
    cyclic_irreps, finite_group_dual, finite_group_function_algebra, symmetric3_irreps, BruteForceOracle,
    DualGroupNormOracle, ExplicitIrrep, FiniteGroupPresentation, FunctionAlgebra, FunctionNormOracle,
};
pub use free::{on_plus_dimensions, on_plus_truncated, q_integer, suq2_eigenvalues, suq2_truncated};

use crate::element::{CoefficientElement, L1Element};
use crate::fusion_data::{validate, QuantumGroupData};
use crate::{Error, Result};

/// Norms an instance can evaluate exactly.
pub trait NormOracle: Send + Sync + fmt::Debug {
    /// `‖f‖` in L¹(𝔾).
    fn l1_norm(&self, f: &L1Element) -> Result<f64>;
    /// `‖x‖` in L∞(𝔾) for a finite combination of coefficients.
    fn linf_norm(&self, x: &CoefficientElement) -> Result<f64>;
}

/// Instance data plus whatever oracles its construction provides.
#[derive(Clone, Debug)]
pub struct Instance {
    pub data: QuantumGroupData,
    pub norm_oracle: Option<Arc<dyn NormOracle>>,
    pub brute_force: Option<BruteForceOracle>,
}

impl Instance {
    pub fn bare(data: QuantumGroupData) -> Self {
        Self {
            data,
            norm_oracle: None,
            brute_force: None,
        }
    }

    pub fn norm_oracle(&self) -> Option<&dyn NormOracle> {
        self.norm_oracle.as_deref()
    }
}

impl From<FunctionAlgebra> for Instance {
    fn from(fa: FunctionAlgebra) -> Self {
        Self {
            data: fa.data,
            norm_oracle: Some(Arc::new(fa.norm_oracle)),
            brute_force: Some(fa.brute_force),
        }
    }
}

/// `C(S₃)` with irreps `t`, `s`, `v`.
pub fn s3_function_algebra() -> FunctionAlgebra {
    let p = FiniteGroupPresentation::symmetric3();
    let irreps = symmetric3_irreps(&p).expect("standard S3 irreps");
    finite_group_function_algebra(&p, irreps).expect("S3 irreps are complete")
}

/// Dual of a finite group together with its norm oracle.
pub fn dual_instance(p: &FiniteGroupPresentation) -> Instance {
    Instance {
        data: finite_group_dual(p),
        norm_oracle: Some(Arc::new(DualGroupNormOracle::new(p.clone()))),
        brute_force: None,
    }
}

/// Built-in instance selectors: `s3`, `dual:<group>` (`z<n>` or `s3`),
/// `suq2`, `onplus`.
#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    S3,
    Dual(String),
    SuQ2 { q: f64, level: usize },
    OnPlus { n: usize, level: usize },
}

impl Builtin {
    /// Resolves a selector name; parameters only matter for `suq2`/`onplus`.
    /// Returns `None` for names that are not built-in.
    pub fn parse(name: &str, q: f64, level: usize, n: usize) -> Option<Self> {
        match name {
            "s3" => Some(Builtin::S3),
            "suq2" => Some(Builtin::SuQ2 { q, level }),
            "onplus" => Some(Builtin::OnPlus { n, level }),
            _ => name.strip_prefix("dual:").map(|g| Builtin::Dual(g.to_string())),
        }
    }

    pub fn build(&self) -> Result<Instance> {
        match self {
            Builtin::S3 => Ok(s3_function_algebra().into()),
            Builtin::Dual(group) => Ok(dual_instance(&named_group(group)?)),
            Builtin::SuQ2 { q, level } => Ok(Instance::bare(suq2_truncated(*q, *level)?)),
            Builtin::OnPlus { n, level } => Ok(Instance::bare(on_plus_truncated(*n, *level)?)),
        }
    }
}

/// `s3` or `z<n>`.
pub fn named_group(name: &str) -> Result<FiniteGroupPresentation> {
    if name == "s3" {
        return Ok(FiniteGroupPresentation::symmetric3());
    }
    let n = name
        .strip_prefix('z')
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown group `{name}` (expected s3 or z<n>)")))?;
    FiniteGroupPresentation::cyclic(n)
}

/// Reads an instance file and runs [`validate`]; violations become
/// [`Error::Validation`].
pub fn load_instance(path: impl AsRef<Path>) -> Result<QuantumGroupData> {
    let g = load_instance_unchecked(path)?;
    let report = validate(&g);
    if report.is_valid() {
        Ok(g)
    } else {
        Err(Error::Validation(report))
    }
}

/// Reads an instance file with structural checks only.
pub fn load_instance_unchecked(path: impl AsRef<Path>) -> Result<QuantumGroupData> {
    QuantumGroupData::from_json_str(&std::fs::read_to_string(path)?)
}

pub fn save_instance(g: &QuantumGroupData, path: impl AsRef<Path>) -> Result<()> {
    g.save(path)
}
