use std::fmt::Write as _;

use crate::model::{AccessMode, InterfaceSpec, ParameterSpec, TargetModel};

use super::{
    args_struct_name, codelet_name, entry_name, wrapper_name, GenError, MAX_BUFFERS, MAX_VARIANTS,
};

pub(super) fn access_macro(mode: AccessMode) -> &'static str {
    match mode {
        AccessMode::Read => "COMPAR_R",
        AccessMode::Write => "COMPAR_W",
        AccessMode::ReadWrite => "COMPAR_RW",
    }
}

pub(super) fn target_macro(target: TargetModel) -> String {
    format!("COMPAR_TARGET_{}", target.as_str())
}

/// C declarator for a parameter: pointers for buffers, values for scalars.
pub(super) fn c_param(p: &ParameterSpec) -> String {
    if p.is_scalar() {
        format!("{} {}", p.elem_type, p.name)
    } else {
        format!("{} *{}", p.elem_type, p.name)
    }
}

pub(super) fn c_signature(iface: &InterfaceSpec) -> String {
    if iface.parameters.is_empty() {
        "void".to_string()
    } else {
        iface
            .parameters
            .iter()
            .map(c_param)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Emits the glue file of one interface: extern variant declarations,
/// wrappers, the codelet and the submitting entry function.
pub(super) fn interface_glue(iface: &InterfaceSpec, source_name: &str) -> Result<String, GenError> {
    if iface.variants.is_empty() {
        return Err(GenError::NoVariants(iface.name.clone()));
    }
    let buffers: Vec<&ParameterSpec> = iface.buffer_parameters().collect();
    let scalars: Vec<&ParameterSpec> = iface.scalar_parameters().collect();
    if buffers.len() > MAX_BUFFERS {
        return Err(GenError::TooManyBuffers(iface.name.clone(), buffers.len()));
    }
    if iface.variants.len() > MAX_VARIANTS {
        return Err(GenError::TooManyVariants(
            iface.name.clone(),
            iface.variants.len(),
        ));
    }
    let signature = c_signature(iface);
    let args_struct = args_struct_name(&iface.name);

    let mut out = String::new();
    writeln!(
        out,
        "/* Generated by compar from {source_name}. Do not edit. */"
    )
    .unwrap();
    writeln!(out, "/* Interface: {}({signature}) */", iface.name).unwrap();
    writeln!(out, "#include \"compar.h\"").unwrap();
    out.push('\n');

    for v in &iface.variants {
        writeln!(out, "extern void {}({signature});", v.function_name).unwrap();
    }
    out.push('\n');

    if !scalars.is_empty() {
        writeln!(out, "struct {args_struct} {{").unwrap();
        for s in &scalars {
            writeln!(out, "    {};", c_param(s)).unwrap();
        }
        writeln!(out, "}};").unwrap();
        out.push('\n');
    }

    for v in &iface.variants {
        writeln!(
            out,
            "static void {}(void *buffers[], void *cl_arg)",
            wrapper_name(&iface.name, &v.function_name)
        )
        .unwrap();
        writeln!(out, "{{").unwrap();
        for (i, b) in buffers.iter().enumerate() {
            writeln!(
                out,
                "    {ty} *{name} = ({ty} *)COMPAR_BUFFER_PTR(buffers[{i}]);",
                ty = b.elem_type,
                name = b.name
            )
            .unwrap();
        }
        if buffers.is_empty() {
            writeln!(out, "    (void)buffers;").unwrap();
        }
        if scalars.is_empty() {
            writeln!(out, "    (void)cl_arg;").unwrap();
        } else {
            writeln!(
                out,
                "    const struct {args_struct} *args = (const struct {args_struct} *)cl_arg;"
            )
            .unwrap();
        }
        let call_args: Vec<String> = iface
            .parameters
            .iter()
            .map(|p| {
                if p.is_scalar() {
                    format!("args->{}", p.name)
                } else {
                    p.name.clone()
                }
            })
            .collect();
        writeln!(out, "    {}({});", v.function_name, call_args.join(", ")).unwrap();
        writeln!(out, "}}").unwrap();
        out.push('\n');
    }

    let codelet = codelet_name(&iface.name);
    writeln!(out, "static struct compar_codelet {codelet} = {{").unwrap();
    writeln!(out, "    .interface = \"{}\",", iface.name).unwrap();
    writeln!(out, "    .nbuffers = {},", buffers.len()).unwrap();
    if !buffers.is_empty() {
        let modes: Vec<&str> = buffers.iter().map(|b| access_macro(b.access)).collect();
        writeln!(out, "    .modes = {{ {} }},", modes.join(", ")).unwrap();
    }
    writeln!(out, "    .nvariants = {},", iface.variants.len()).unwrap();
    writeln!(out, "    .variants = {{").unwrap();
    for v in &iface.variants {
        writeln!(
            out,
            "        {{ {}, \"{}\", {} }},",
            target_macro(v.target),
            v.function_name,
            wrapper_name(&iface.name, &v.function_name)
        )
        .unwrap();
    }
    writeln!(out, "    }},").unwrap();
    writeln!(out, "}};").unwrap();
    out.push('\n');

    writeln!(out, "void {}({signature})", entry_name(&iface.name)).unwrap();
    writeln!(out, "{{").unwrap();
    for b in &buffers {
        writeln!(out, "    compar_data_handle_t {}_handle;", b.name).unwrap();
    }
    if !scalars.is_empty() {
        let inits: Vec<String> = scalars
            .iter()
            .map(|s| format!(".{0} = {0}", s.name))
            .collect();
        writeln!(
            out,
            "    struct {args_struct} args = {{ {} }};",
            inits.join(", ")
        )
        .unwrap();
    }
    writeln!(out, "    struct compar_task *task;").unwrap();
    out.push('\n');
    for b in &buffers {
        let extents: Vec<String> = b.dims.iter().map(|d| format!("(size_t)({d})")).collect();
        writeln!(
            out,
            "    compar_data_register(&{name}_handle, {mode}, {name}, sizeof({ty}), {nd}, {extents});",
            name = b.name,
            mode = access_macro(b.access),
            ty = b.elem_type,
            nd = b.dims.len(),
            extents = extents.join(", ")
        )
        .unwrap();
    }
    writeln!(out, "    task = compar_task_create(&{codelet});").unwrap();
    for (i, b) in buffers.iter().enumerate() {
        writeln!(out, "    task->handles[{i}] = {}_handle;", b.name).unwrap();
    }
    if !scalars.is_empty() {
        writeln!(out, "    task->cl_arg = &args;").unwrap();
        writeln!(out, "    task->cl_arg_size = sizeof(args);").unwrap();
    }
    writeln!(out, "    compar_task_submit(task);").unwrap();
    writeln!(out, "    compar_task_wait(task);").unwrap();
    for b in &buffers {
        writeln!(out, "    compar_data_unregister({}_handle);", b.name).unwrap();
    }
    writeln!(out, "}}").unwrap();
    Ok(out)
}
