use std::fmt::Write as _;

use crate::model::{ProgramModel, TargetModel};

use super::glue::{c_signature, target_macro};
use super::{entry_name, MAX_BUFFERS, MAX_VARIANTS};

/// The `compar.h` support header: runtime API declarations plus one
/// prototype per interface entry function.
pub(super) fn support_header(model: &ProgramModel) -> String {
    let mut out = String::new();
    out.push_str(
        "/* Generated by compar. Do not edit. */\n\
         #ifndef COMPAR_H\n\
         #define COMPAR_H\n\
         \n\
         #include <stddef.h>\n\
         \n",
    );
    writeln!(out, "#define COMPAR_MAX_BUFFERS {MAX_BUFFERS}").unwrap();
    writeln!(out, "#define COMPAR_MAX_VARIANTS {MAX_VARIANTS}").unwrap();
    out.push_str("#define COMPAR_BUFFER_PTR(buffer) compar_buffer_ptr(buffer)\n\n");

    out.push_str("enum compar_access { COMPAR_R, COMPAR_W, COMPAR_RW };\n\n");
    out.push_str("enum compar_target {\n");
    for t in TargetModel::ALL {
        writeln!(out, "    {},", target_macro(t)).unwrap();
    }
    out.push_str("};\n\n");

    out.push_str(
        "typedef struct compar_data *compar_data_handle_t;\n\
         typedef void (*compar_kernel_fn)(void *buffers[], void *cl_arg);\n\
         \n\
         struct compar_variant {\n\
         \x20   enum compar_target target;\n\
         \x20   const char *function_name;\n\
         \x20   compar_kernel_fn fn;\n\
         };\n\
         \n\
         struct compar_codelet {\n\
         \x20   const char *interface;\n\
         \x20   int nbuffers;\n\
         \x20   enum compar_access modes[COMPAR_MAX_BUFFERS];\n\
         \x20   int nvariants;\n\
         \x20   struct compar_variant variants[COMPAR_MAX_VARIANTS];\n\
         };\n\
         \n\
         struct compar_task {\n\
         \x20   struct compar_codelet *codelet;\n\
         \x20   compar_data_handle_t handles[COMPAR_MAX_BUFFERS];\n\
         \x20   void *cl_arg;\n\
         \x20   size_t cl_arg_size;\n\
         };\n\
         \n\
         void compar_init(void);\n\
         void compar_terminate(void);\n\
         void *compar_buffer_ptr(void *buffer);\n\
         void compar_data_register(compar_data_handle_t *handle, enum compar_access mode, void *ptr,\n\
         \x20                         size_t elem_size, int ndims, ...);\n\
         void compar_data_unregister(compar_data_handle_t handle);\n\
         struct compar_task *compar_task_create(struct compar_codelet *codelet);\n\
         int compar_task_submit(struct compar_task *task);\n\
         int compar_task_wait(struct compar_task *task);\n",
    );

    if !model.interfaces.is_empty() {
        out.push_str("\n/* Interface entry points */\n");
        for iface in &model.interfaces {
            writeln!(
                out,
                "void {}({});",
                entry_name(&iface.name),
                c_signature(iface)
            )
            .unwrap();
        }
    }
    out.push_str("\n#endif /* COMPAR_H */\n");
    out
}
