//! Template back end. From a clean program model it emits the transformed
//! host source, one glue file per interface, the `compar.h` support header
//! and the interface manifest.

mod glue;
mod header;
mod transform;

use std::path::Path;

use thiserror::Error;

use crate::frontend::SourceUnit;
use crate::manifest::{manifest_serialize, source_digest, InterfaceManifest};
use crate::model::ProgramModel;

pub use transform::{rewrite_call_site, strip_directives, transform_source, translate_lifecycle};

pub const MAX_BUFFERS: usize = 16;
pub const MAX_VARIANTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ArtifactKind {
    TransformedSource,
    SupportHeader,
    InterfaceGlue,
    Manifest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedArtifact {
    pub kind: ArtifactKind,
    pub relative_path: String,
    pub content: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("interface '{0}' has no variants")]
    NoVariants(String),
    #[error("interface '{0}' has {1} buffer parameters; at most {MAX_BUFFERS} are supported")]
    TooManyBuffers(String, usize),
    #[error("interface '{0}' has {1} variants; at most {MAX_VARIANTS} are supported")]
    TooManyVariants(String, usize),
    #[error(
        "call site at line {line} targets unknown interface '{interface}' or has the wrong arity"
    )]
    BadCallSite { interface: String, line: usize },
}

pub fn entry_name(interface: &str) -> String {
    format!("compar_submit_{interface}")
}

pub fn wrapper_name(interface: &str, function_name: &str) -> String {
    format!("compar_wrap_{interface}_{function_name}")
}

pub fn codelet_name(interface: &str) -> String {
    format!("compar_codelet_{interface}")
}

pub fn glue_file_name(interface: &str) -> String {
    format!("compar_{interface}.gen.c")
}

fn args_struct_name(interface: &str) -> String {
    format!("compar_args_{interface}")
}

/// Output stem of an input path: the file name up to its first `.`, so both
/// `hotspot.c` and `hotspot.compar.c` map to `hotspot`.
pub fn output_stem(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    match name.split('.').next() {
        Some(stem) if !stem.is_empty() => stem.to_string(),
        _ => "out".to_string(),
    }
}

/// Generates every artifact for one translation unit. Output order is
/// fixed: transformed source, header, glue files in declaration order,
/// manifest.
pub fn generate(
    model: &ProgramModel,
    unit: &SourceUnit,
) -> Result<Vec<GeneratedArtifact>, GenError> {
    for site in &model.call_sites {
        let ok = model
            .interface(&site.interface)
            .is_some_and(|i| i.parameters.len() == site.args.len());
        if !ok {
            return Err(GenError::BadCallSite {
                interface: site.interface.clone(),
                line: site.location.line,
            });
        }
    }
    let stem = output_stem(&unit.path);
    let source_name = unit
        .path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();

    let mut artifacts = vec![
        GeneratedArtifact {
            kind: ArtifactKind::TransformedSource,
            relative_path: format!("{stem}.compar.c"),
            content: transform_source(unit, model),
        },
        GeneratedArtifact {
            kind: ArtifactKind::SupportHeader,
            relative_path: "compar.h".to_string(),
            content: header::support_header(model),
        },
    ];
    for iface in &model.interfaces {
        artifacts.push(GeneratedArtifact {
            kind: ArtifactKind::InterfaceGlue,
            relative_path: glue_file_name(&iface.name),
            content: glue::interface_glue(iface, &source_name)?,
        });
    }
    let manifest = InterfaceManifest::from_model(model, source_digest(&unit.reconstruct()));
    artifacts.push(GeneratedArtifact {
        kind: ArtifactKind::Manifest,
        relative_path: format!("{stem}.manifest"),
        content: manifest_serialize(&manifest),
    });
    Ok(artifacts)
}
