//! Shared vocabulary: the program model built by the analyzer, emitted by the
//! code generator and consumed by the runtime.

use std::fmt;
use std::str::FromStr;

use crate::diagnostics::SourceLocation;

/// Programming model a variant is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TargetModel {
    Cuda,
    OpenMp,
    Seq,
    OpenCl,
    Blas,
    Cublas,
}

impl TargetModel {
    pub const ALL: [TargetModel; 6] = [
        TargetModel::Cuda,
        TargetModel::OpenMp,
        TargetModel::Seq,
        TargetModel::OpenCl,
        TargetModel::Blas,
        TargetModel::Cublas,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TargetModel::Cuda => "CUDA",
            TargetModel::OpenMp => "OPENMP",
            TargetModel::Seq => "SEQ",
            TargetModel::OpenCl => "OPENCL",
            TargetModel::Blas => "BLAS",
            TargetModel::Cublas => "CUBLAS",
        }
    }
}

impl fmt::Display for TargetModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TargetModel {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        TargetModel::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AccessMode {
    Read,
    Write,
    ReadWrite,
}

impl AccessMode {
    pub const ALL: [AccessMode; 3] = [AccessMode::Read, AccessMode::Write, AccessMode::ReadWrite];

    pub fn as_str(self) -> &'static str {
        match self {
            AccessMode::Read => "read",
            AccessMode::Write => "write",
            AccessMode::ReadWrite => "readwrite",
        }
    }

    pub fn writes(self) -> bool {
        !matches!(self, AccessMode::Read)
    }

    pub fn reads(self) -> bool {
        !matches!(self, AccessMode::Write)
    }
}

impl fmt::Display for AccessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AccessMode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        AccessMode::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or(())
    }
}

/// Element types accepted by the `type` clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElemType {
    Int,
    Float,
    Double,
    Char,
    WChar,
    Long,
    Short,
    Unsigned,
}

impl ElemType {
    pub const ALL: [ElemType; 8] = [
        ElemType::Int,
        ElemType::Float,
        ElemType::Double,
        ElemType::Char,
        ElemType::WChar,
        ElemType::Long,
        ElemType::Short,
        ElemType::Unsigned,
    ];

    /// C spelling of the type.
    pub fn as_str(self) -> &'static str {
        match self {
            ElemType::Int => "int",
            ElemType::Float => "float",
            ElemType::Double => "double",
            ElemType::Char => "char",
            ElemType::WChar => "wchar_t",
            ElemType::Long => "long",
            ElemType::Short => "short",
            ElemType::Unsigned => "unsigned",
        }
    }

    /// Size in bytes on an LP64 host.
    pub fn size_bytes(self) -> usize {
        match self {
            ElemType::Char => 1,
            ElemType::Short => 2,
            ElemType::Int | ElemType::Float | ElemType::WChar | ElemType::Unsigned => 4,
            ElemType::Double | ElemType::Long => 8,
        }
    }
}

impl fmt::Display for ElemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ElemType {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        ElemType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or(())
    }
}

/// One extent of a `size` clause: a variable name or an integer literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SizeExpr {
    Var(String),
    Lit(u64),
}

impl fmt::Display for SizeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeExpr::Var(v) => f.write_str(v),
            SizeExpr::Lit(n) => write!(f, "{n}"),
        }
    }
}

pub const MAX_DIMS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSpec {
    pub name: String,
    pub elem_type: ElemType,
    /// Empty for scalars.
    pub dims: Vec<SizeExpr>,
    pub access: AccessMode,
    pub position: usize,
    pub location: Option<SourceLocation>,
}

impl ParameterSpec {
    pub fn is_scalar(&self) -> bool {
        self.dims.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantSpec {
    pub function_name: String,
    pub target: TargetModel,
    pub location: Option<SourceLocation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfaceSpec {
    pub name: String,
    pub parameters: Vec<ParameterSpec>,
    pub variants: Vec<VariantSpec>,
    /// Location of the first `method_declare`.
    pub location: Option<SourceLocation>,
}

impl InterfaceSpec {
    pub fn new(name: impl Into<String>) -> Self {
        InterfaceSpec {
            name: name.into(),
            parameters: Vec::new(),
            variants: Vec::new(),
            location: None,
        }
    }

    /// Appends a data parameter. Numeric dimension strings become literals.
    pub fn with_buffer(
        mut self,
        name: &str,
        elem_type: ElemType,
        dims: &[&str],
        access: AccessMode,
    ) -> Self {
        let dims = dims
            .iter()
            .map(|d| match d.parse::<u64>() {
                Ok(n) => SizeExpr::Lit(n),
                Err(_) => SizeExpr::Var(d.to_string()),
            })
            .collect();
        self.push_parameter(name, elem_type, dims, access);
        self
    }

    pub fn with_scalar(mut self, name: &str, elem_type: ElemType) -> Self {
        self.push_parameter(name, elem_type, Vec::new(), AccessMode::Read);
        self
    }

    pub fn with_variant(mut self, function_name: &str, target: TargetModel) -> Self {
        self.variants.push(VariantSpec {
            function_name: function_name.to_string(),
            target,
            location: None,
        });
        self
    }

    fn push_parameter(
        &mut self,
        name: &str,
        elem_type: ElemType,
        dims: Vec<SizeExpr>,
        access: AccessMode,
    ) {
        let position = self.parameters.len();
        self.parameters.push(ParameterSpec {
            name: name.to_string(),
            elem_type,
            dims,
            access,
            position,
            location: None,
        });
    }

    pub fn parameter(&self, name: &str) -> Option<&ParameterSpec> {
        self.parameters.iter().find(|p| p.name == name)
    }

    /// Parameters registered as data handles (dims >= 1).
    pub fn buffer_parameters(&self) -> impl Iterator<Item = &ParameterSpec> {
        self.parameters.iter().filter(|p| !p.is_scalar())
    }

    pub fn scalar_parameters(&self) -> impl Iterator<Item = &ParameterSpec> {
        self.parameters.iter().filter(|p| p.is_scalar())
    }

    /// Copy with every source location cleared; the manifest carries none.
    pub fn without_locations(&self) -> InterfaceSpec {
        InterfaceSpec {
            name: self.name.clone(),
            parameters: self
                .parameters
                .iter()
                .map(|p| ParameterSpec {
                    location: None,
                    ..p.clone()
                })
                .collect(),
            variants: self
                .variants
                .iter()
                .map(|v| VariantSpec {
                    location: None,
                    ..v.clone()
                })
                .collect(),
            location: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lifecycle {
    pub include: Option<SourceLocation>,
    pub initialize: Option<SourceLocation>,
    pub terminate: Option<SourceLocation>,
}

/// A statement-level call of an interface in host code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallSite {
    pub interface: String,
    /// Points at the first character of the interface name.
    pub location: SourceLocation,
    pub args: Vec<String>,
}

/// A `size` identifier that is not a parameter of its interface and is
/// therefore assumed to exist in the enclosing scope of the call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeAssumption {
    pub interface: String,
    pub parameter: String,
    pub identifier: String,
    pub location: Option<SourceLocation>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProgramModel {
    /// Declaration order.
    pub interfaces: Vec<InterfaceSpec>,
    pub lifecycle: Lifecycle,
    pub call_sites: Vec<CallSite>,
    pub assumptions: Vec<ScopeAssumption>,
}

impl ProgramModel {
    pub fn from_interfaces(interfaces: Vec<InterfaceSpec>) -> Self {
        ProgramModel {
            interfaces,
            ..Default::default()
        }
    }

    pub fn interface(&self, name: &str) -> Option<&InterfaceSpec> {
        self.interfaces.iter().find(|i| i.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.interfaces.is_empty()
    }
}
