//! The interface manifest: a line-oriented text projection of the program
//! model that links the pre-compiler output to the runtime.
//!
//! ```text
//! compar-manifest v1
//! interface sort
//! param arr float n readwrite
//! param n int scalar read
//! variant sort_cuda CUDA
//! variant sort_omp OPENMP
//! digest 3f2a...
//! ```
//!
//! Records are separated by single spaces. `param` extents are joined with
//! `,` and no spaces; scalars use the literal `scalar`. The `digest` record
//! is the SHA-256 of the annotated source and is always last.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::model::{
    AccessMode, ElemType, InterfaceSpec, ParameterSpec, ProgramModel, SizeExpr, TargetModel,
    VariantSpec, MAX_DIMS,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Dimension field of a scalar `param` record. Reserved as a size name.
pub const SCALAR_MARKER: &str = "scalar";

const HEADER: &str = "compar-manifest v";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("manifest line {line}: {message} (expected {expected})")]
pub struct ManifestError {
    pub line: usize,
    pub message: String,
    pub expected: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterfaceManifest {
    pub schema_version: u32,
    pub interfaces: Vec<InterfaceSpec>,
    pub source_digest: String,
}

impl InterfaceManifest {
    pub fn from_model(model: &ProgramModel, source_digest: impl Into<String>) -> Self {
        InterfaceManifest {
            schema_version: SCHEMA_VERSION,
            interfaces: model
                .interfaces
                .iter()
                .map(InterfaceSpec::without_locations)
                .collect(),
            source_digest: source_digest.into(),
        }
    }

    /// A program model holding only the manifest's interfaces.
    pub fn to_model(&self) -> ProgramModel {
        ProgramModel {
            interfaces: self.interfaces.clone(),
            ..ProgramModel::default()
        }
    }

    pub fn interface(&self, name: &str) -> Option<&InterfaceSpec> {
        self.interfaces.iter().find(|i| i.name == name)
    }
}

/// Hex SHA-256 of the source text.
pub fn source_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn manifest_serialize(manifest: &InterfaceManifest) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}{}", manifest.schema_version).unwrap();
    for iface in &manifest.interfaces {
        writeln!(out, "interface {}", iface.name).unwrap();
        for p in &iface.parameters {
            let dims = if p.is_scalar() {
                SCALAR_MARKER.to_string()
            } else {
                p.dims
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            };
            writeln!(
                out,
                "param {} {} {} {}",
                p.name, p.elem_type, dims, p.access
            )
            .unwrap();
        }
        for v in &iface.variants {
            writeln!(out, "variant {} {}", v.function_name, v.target).unwrap();
        }
    }
    writeln!(out, "digest {}", manifest.source_digest).unwrap();
    out
}

pub fn manifest_parse(text: &str) -> Result<InterfaceManifest, ManifestError> {
    let lines: Vec<&str> = text
        .strip_suffix('\n')
        .unwrap_or(text)
        .split('\n')
        .collect();
    let err = |line: usize, message: String, expected: &'static str| ManifestError {
        line,
        message,
        expected,
    };

    let header = lines.first().copied().unwrap_or("");
    let version = header
        .strip_prefix(HEADER)
        .and_then(|v| v.parse::<u32>().ok())
        .ok_or_else(|| err(1, format!("bad header '{header}'"), "'compar-manifest v1'"))?;
    if version != SCHEMA_VERSION {
        return Err(err(
            1,
            format!("unsupported schema version {version}"),
            "'compar-manifest v1'",
        ));
    }

    let mut interfaces: Vec<InterfaceSpec> = Vec::new();
    let mut digest = None;
    for (index, line) in lines.iter().enumerate().skip(1) {
        let n = index + 1;
        if digest.is_some() {
            return Err(err(n, "record after digest".into(), "end of manifest"));
        }
        let fields: Vec<&str> = line.split(' ').collect();
        if fields.iter().any(|f| f.is_empty()) {
            return Err(err(
                n,
                format!("malformed record '{line}'"),
                "single-space separated fields",
            ));
        }
        match fields.as_slice() {
            ["interface", name] => {
                check_ident(name).map_err(|m| err(n, m, "an identifier"))?;
                if interfaces.iter().any(|i| i.name == *name) {
                    return Err(err(
                        n,
                        format!("duplicate interface '{name}'"),
                        "a new interface name",
                    ));
                }
                if let Some(prev) = interfaces.last() {
                    if prev.variants.is_empty() {
                        return Err(err(
                            n,
                            format!("interface '{}' has no variants", prev.name),
                            "a 'variant' record",
                        ));
                    }
                }
                interfaces.push(InterfaceSpec {
                    name: name.to_string(),
                    parameters: Vec::new(),
                    variants: Vec::new(),
                    location: None,
                });
            }
            ["param", name, ty, dims, access] => {
                let iface = interfaces.last_mut().ok_or_else(|| {
                    err(
                        n,
                        "param before any interface".into(),
                        "an 'interface' record",
                    )
                })?;
                check_ident(name).map_err(|m| err(n, m, "an identifier"))?;
                if iface.parameter(name).is_some() {
                    return Err(err(
                        n,
                        format!("duplicate parameter '{name}'"),
                        "a new parameter name",
                    ));
                }
                let elem_type: ElemType = ty
                    .parse()
                    .map_err(|_| err(n, format!("unknown type '{ty}'"), "a known element type"))?;
                let dims = parse_dims(dims)
                    .map_err(|m| err(n, m, "'scalar' or 1 to 4 comma-separated extents"))?;
                let access = match *access {
                    "read" => AccessMode::Read,
                    "write" => AccessMode::Write,
                    "readwrite" => AccessMode::ReadWrite,
                    other => {
                        return Err(err(
                            n,
                            format!("unknown access mode '{other}'"),
                            "read, write or readwrite",
                        ))
                    }
                };
                let position = iface.parameters.len();
                iface.parameters.push(ParameterSpec {
                    name: name.to_string(),
                    elem_type,
                    dims,
                    access,
                    position,
                    location: None,
                });
            }
            ["variant", name, target] => {
                let iface = interfaces.last_mut().ok_or_else(|| {
                    err(
                        n,
                        "variant before any interface".into(),
                        "an 'interface' record",
                    )
                })?;
                check_ident(name).map_err(|m| err(n, m, "an identifier"))?;
                if iface.variants.iter().any(|v| v.function_name == *name) {
                    return Err(err(
                        n,
                        format!("duplicate variant '{name}'"),
                        "a new variant name",
                    ));
                }
                let target = TargetModel::ALL
                    .into_iter()
                    .find(|t| t.as_str() == *target)
                    .ok_or_else(|| {
                        err(
                            n,
                            format!("unknown target '{target}'"),
                            "an upper-case target model",
                        )
                    })?;
                iface.variants.push(VariantSpec {
                    function_name: name.to_string(),
                    target,
                    location: None,
                });
            }
            ["digest", hex] => {
                if !hex
                    .chars()
                    .all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase())
                {
                    return Err(err(n, format!("bad digest '{hex}'"), "lower-case hex"));
                }
                if let Some(prev) = interfaces.last() {
                    if prev.variants.is_empty() {
                        return Err(err(
                            n,
                            format!("interface '{}' has no variants", prev.name),
                            "a 'variant' record",
                        ));
                    }
                }
                digest = Some(hex.to_string());
            }
            _ => {
                return Err(err(
                    n,
                    format!("unknown record '{line}'"),
                    "interface, param, variant or digest",
                ))
            }
        }
    }
    let source_digest = digest.ok_or_else(|| {
        err(
            lines.len() + 1,
            "missing digest".into(),
            "a 'digest' record",
        )
    })?;
    Ok(InterfaceManifest {
        schema_version: version,
        interfaces,
        source_digest,
    })
}

fn check_ident(s: &str) -> Result<(), String> {
    let mut chars = s.chars();
    let ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(format!("'{s}' is not an identifier"))
    }
}

fn parse_dims(field: &str) -> Result<Vec<SizeExpr>, String> {
    if field == SCALAR_MARKER {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = field.split(',').collect();
    if parts.len() > MAX_DIMS {
        return Err(format!(
            "{} extents exceed the maximum of {MAX_DIMS}",
            parts.len()
        ));
    }
    parts
        .into_iter()
        .map(|p| {
            if p.chars().all(|c| c.is_ascii_digit()) && !p.is_empty() {
                p.parse()
                    .map(SizeExpr::Lit)
                    .map_err(|_| format!("extent '{p}' out of range"))
            } else {
                check_ident(p)?;
                Ok(SizeExpr::Var(p.to_string()))
            }
        })
        .collect()
}
