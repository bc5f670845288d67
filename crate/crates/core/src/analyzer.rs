//! Semantic analysis: builds the program model from the directive stream
//! and locates interface call sites in host code.

use crate::diagnostics::{Code, Diagnostic};
use crate::frontend::{ArgValue, ClauseKey, Directive, DirectiveKind, SourceUnit};
use crate::manifest::SCALAR_MARKER;
use crate::model::{
    AccessMode, CallSite, ElemType, InterfaceSpec, ParameterSpec, ProgramModel, ScopeAssumption,
    SizeExpr, TargetModel, VariantSpec,
};

/// The declaration block that `parameter` directives currently attach to.
struct Block {
    interface: usize,
    /// Only the first `method_declare` of an interface may carry parameters.
    first: bool,
}

pub fn analyze(directives: &[Directive], unit: &SourceUnit) -> (ProgramModel, Vec<Diagnostic>) {
    let mut model = ProgramModel::default();
    let mut diags = Vec::new();
    let mut block: Option<Block> = None;

    for d in directives {
        match d.kind {
            DirectiveKind::Include => {
                model.lifecycle.include.get_or_insert(d.location.clone());
                block = None;
            }
            DirectiveKind::Initialize => {
                model.lifecycle.initialize.get_or_insert(d.location.clone());
                block = None;
            }
            DirectiveKind::Terminate => {
                model.lifecycle.terminate.get_or_insert(d.location.clone());
                block = None;
            }
            DirectiveKind::MethodDeclare => {
                block = Some(declare_variant(&mut model, d, &mut diags));
            }
            DirectiveKind::Parameter => match &block {
                None => diags.push(Diagnostic::error(
                    Code::OrphanParameter,
                    d.location.clone(),
                    "'parameter' must directly follow the first 'method_declare' of its interface",
                )),
                Some(b) if !b.first => {
                    let name = &model.interfaces[b.interface].name;
                    diags.push(Diagnostic::error(
                        Code::RedeclaredParameters,
                        d.location.clone(),
                        format!(
                            "interface '{name}' already has a parameter list; later variants share it and must not declare parameters"
                        ),
                    ));
                }
                Some(b) => {
                    let iface = &mut model.interfaces[b.interface];
                    if let Some(p) = parameter_from(d, iface, &mut diags) {
                        iface.parameters.push(p);
                    }
                }
            },
        }
    }

    model.assumptions = scope_assumptions(&model.interfaces);

    if let Some(first) = model.interfaces.first() {
        let at = first
            .location
            .clone()
            .unwrap_or_else(|| unit.location(1, 1))
            .at_column(1);
        if model.lifecycle.initialize.is_none() {
            diags.push(Diagnostic::warning(
                Code::MissingInitialize,
                at.clone(),
                "interfaces are declared but no '#pragma compar initialize' was found",
            ));
        }
        if model.lifecycle.terminate.is_none() {
            diags.push(Diagnostic::warning(
                Code::MissingTerminate,
                at,
                "interfaces are declared but no '#pragma compar terminate' was found",
            ));
        }
    }

    let (sites, mut site_diags) = find_call_sites(unit, &model);
    diags.append(&mut site_diags);
    for iface in &model.interfaces {
        if !sites.iter().any(|s| s.interface == iface.name) {
            if let Some(at) = &iface.location {
                diags.push(Diagnostic::warning(
                    Code::UnusedInterface,
                    at.clone(),
                    format!("interface '{}' is declared but never called", iface.name),
                ));
            }
        }
    }
    model.call_sites = sites;
    (model, diags)
}

fn clause_ident(d: &Directive, key: ClauseKey) -> (&str, usize) {
    let clause = d.clause(key).expect("parser guarantees required clauses");
    (
        clause.ident().expect("parser guarantees identifier"),
        clause.args[0].column,
    )
}

fn declare_variant(model: &mut ProgramModel, d: &Directive, diags: &mut Vec<Diagnostic>) -> Block {
    let (iface_name, _) = clause_ident(d, ClauseKey::Interface);
    let (target_text, target_col) = clause_ident(d, ClauseKey::Target);
    let (fn_name, fn_col) = clause_ident(d, ClauseKey::Name);

    let (index, first) = match model.interfaces.iter().position(|i| i.name == iface_name) {
        Some(i) => (i, false),
        None => {
            model.interfaces.push(InterfaceSpec {
                name: iface_name.to_string(),
                parameters: Vec::new(),
                variants: Vec::new(),
                location: Some(d.location.at_column(1)),
            });
            (model.interfaces.len() - 1, true)
        }
    };
    let iface = &mut model.interfaces[index];

    let target = target_text.parse::<TargetModel>();
    if target.is_err() {
        diags.push(Diagnostic::error(
            Code::UnknownTarget,
            d.location.at_column(target_col),
            format!(
                "unknown target '{target_text}' (expected one of {})",
                TargetModel::ALL.map(|t| t.as_str()).join(", ")
            ),
        ));
    }
    let duplicate = iface.variants.iter().any(|v| v.function_name == fn_name);
    if duplicate {
        diags.push(Diagnostic::error(
            Code::DuplicateVariant,
            d.location.at_column(fn_col),
            format!("variant '{fn_name}' is already declared for interface '{iface_name}'"),
        ));
    }
    if let (Ok(target), false) = (target, duplicate) {
        iface.variants.push(VariantSpec {
            function_name: fn_name.to_string(),
            target,
            location: Some(d.location.at_column(1)),
        });
    }
    Block {
        interface: index,
        first,
    }
}

fn parameter_from(
    d: &Directive,
    iface: &InterfaceSpec,
    diags: &mut Vec<Diagnostic>,
) -> Option<ParameterSpec> {
    let (name, name_col) = clause_ident(d, ClauseKey::Name);
    let (ty, ty_col) = clause_ident(d, ClauseKey::Type);
    let (access, access_col) = clause_ident(d, ClauseKey::AccessMode);
    let before = diags.len();

    if iface.parameter(name).is_some() {
        diags.push(Diagnostic::error(
            Code::DuplicateParameter,
            d.location.at_column(name_col),
            format!(
                "parameter '{name}' is already declared for interface '{}'",
                iface.name
            ),
        ));
    }
    let elem_type = ty.parse::<ElemType>().ok();
    if elem_type.is_none() {
        diags.push(Diagnostic::error(
            Code::UnknownType,
            d.location.at_column(ty_col),
            format!(
                "unknown type '{ty}' (expected one of {})",
                ElemType::ALL.map(|t| t.as_str()).join(", ")
            ),
        ));
    }
    let access_mode = access.parse::<AccessMode>().ok();
    if access_mode.is_none() {
        diags.push(Diagnostic::error(
            Code::UnknownAccessMode,
            d.location.at_column(access_col),
            format!("unknown access mode '{access}' (expected read, write or readwrite)"),
        ));
    }
    if let Some(size) = d.clause(ClauseKey::Size) {
        for a in &size.args {
            if a.value == ArgValue::Ident(SCALAR_MARKER.to_string()) {
                diags.push(Diagnostic::error(
                    Code::ReservedSizeName,
                    d.location.at_column(a.column),
                    format!("'{SCALAR_MARKER}' is reserved and cannot name a dimension"),
                ));
            }
        }
    }
    if diags.len() != before {
        return None;
    }
    let dims = d
        .clause(ClauseKey::Size)
        .map(|c| {
            c.args
                .iter()
                .map(|a| match &a.value {
                    ArgValue::Ident(s) => SizeExpr::Var(s.clone()),
                    ArgValue::Int(v) => SizeExpr::Lit(*v),
                })
                .collect()
        })
        .unwrap_or_default();
    Some(ParameterSpec {
        name: name.to_string(),
        elem_type: elem_type?,
        dims,
        access: access_mode?,
        position: iface.parameters.len(),
        location: Some(d.location.at_column(1)),
    })
}

fn scope_assumptions(interfaces: &[InterfaceSpec]) -> Vec<ScopeAssumption> {
    let mut out = Vec::new();
    for iface in interfaces {
        for p in &iface.parameters {
            for dim in &p.dims {
                if let SizeExpr::Var(v) = dim {
                    let known = iface.parameter(v).is_some();
                    let seen = out
                        .iter()
                        .any(|a: &ScopeAssumption| a.interface == iface.name && &a.identifier == v);
                    if !known && !seen {
                        out.push(ScopeAssumption {
                            interface: iface.name.clone(),
                            parameter: p.name.clone(),
                            identifier: v.clone(),
                            location: p.location.clone(),
                        });
                    }
                }
            }
        }
    }
    out
}

/// A statement-level call `name ( args ) ;` found on one line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct StatementCall {
    pub name: String,
    /// Byte offset of the name within the line.
    pub name_offset: usize,
    pub args: Vec<String>,
}

/// Recognizes a call statement, optionally followed by a `//` or `/*` comment.
pub(crate) fn statement_call(line: &str) -> Option<StatementCall> {
    let trimmed = line.trim_start();
    let name_offset = line.len() - trimmed.len();
    if ["//", "/*", "*", "#"]
        .iter()
        .any(|p| trimmed.starts_with(p))
    {
        return None;
    }
    let name_len = trimmed
        .char_indices()
        .take_while(|&(i, c)| c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit()))
        .count();
    if name_len == 0 {
        return None;
    }
    let name = &trimmed[..name_len];
    let rest = trimmed[name_len..].trim_start();
    let inner_and_tail = rest.strip_prefix('(')?;

    let mut depth = 0usize;
    let mut close = None;
    for (i, c) in inner_and_tail.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' if depth > 0 => depth -= 1,
            ')' => {
                close = Some(i);
                break;
            }
            _ => {}
        }
    }
    let close = close?;
    let inner = &inner_and_tail[..close];
    let tail = inner_and_tail[close + 1..].trim_start();
    let after_semi = tail.strip_prefix(';')?.trim_start();
    if !(after_semi.is_empty() || after_semi.starts_with("//") || after_semi.starts_with("/*")) {
        return None;
    }

    let args = if inner.trim().is_empty() {
        Vec::new()
    } else {
        let mut args = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        for (i, c) in inner.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    args.push(inner[start..i].trim().to_string());
                    start = i + 1;
                }
                _ => {}
            }
        }
        args.push(inner[start..].trim().to_string());
        args
    };
    Some(StatementCall {
        name: name.to_string(),
        name_offset,
        args,
    })
}

/// Finds interface calls in passthrough lines. Calls whose argument count
/// differs from the interface's parameter count are reported and skipped.
pub fn find_call_sites(
    unit: &SourceUnit,
    model: &ProgramModel,
) -> (Vec<CallSite>, Vec<Diagnostic>) {
    let mut sites = Vec::new();
    let mut diags = Vec::new();
    if model.interfaces.is_empty() {
        return (sites, diags);
    }
    for line in unit.passthrough_lines() {
        let Some(call) = statement_call(&line.text) else {
            continue;
        };
        let Some(iface) = model.interface(&call.name) else {
            continue;
        };
        let column = line.text[..call.name_offset].chars().count() + 1;
        let location = unit.location(line.number, column);
        if call.args.len() != iface.parameters.len() {
            diags.push(Diagnostic::warning(
                Code::CallArity,
                location,
                format!(
                    "call of '{}' has {} argument(s) but the interface declares {}; call left unchanged",
                    iface.name,
                    call.args.len(),
                    iface.parameters.len()
                ),
            ));
            continue;
        }
        sites.push(CallSite {
            interface: iface.name.clone(),
            location,
            args: call.args,
        });
    }
    (sites, diags)
}
