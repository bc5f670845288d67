/* Generated by compar. Do not edit. */
#ifndef COMPAR_H
#define COMPAR_H

#include <stddef.h>

#define COMPAR_MAX_BUFFERS 16
#define COMPAR_MAX_VARIANTS 16
#define COMPAR_BUFFER_PTR(buffer) compar_buffer_ptr(buffer)

enum compar_access { COMPAR_R, COMPAR_W, COMPAR_RW };

enum compar_target {
    COMPAR_TARGET_CUDA,
    COMPAR_TARGET_OPENMP,
    COMPAR_TARGET_SEQ,
    COMPAR_TARGET_OPENCL,
    COMPAR_TARGET_BLAS,
    COMPAR_TARGET_CUBLAS,
};

typedef struct compar_data *compar_data_handle_t;
typedef void (*compar_kernel_fn)(void *buffers[], void *cl_arg);

struct compar_variant {
    enum compar_target target;
    const char *function_name;
    compar_kernel_fn fn;
};

struct compar_codelet {
    const char *interface;
    int nbuffers;
    enum compar_access modes[COMPAR_MAX_BUFFERS];
    int nvariants;
    struct compar_variant variants[COMPAR_MAX_VARIANTS];
};

struct compar_task {
    struct compar_codelet *codelet;
    compar_data_handle_t handles[COMPAR_MAX_BUFFERS];
    void *cl_arg;
    size_t cl_arg_size;
};

void compar_init(void);
void compar_terminate(void);
void *compar_buffer_ptr(void *buffer);
void compar_data_register(compar_data_handle_t *handle, enum compar_access mode, void *ptr,
                          size_t elem_size, int ndims, ...);
void compar_data_unregister(compar_data_handle_t handle);
struct compar_task *compar_task_create(struct compar_codelet *codelet);
int compar_task_submit(struct compar_task *task);
int compar_task_wait(struct compar_task *task);

/* Interface entry points */
void compar_submit_sort(float *arr, int n);
void compar_submit_mmul(float *A, float *B, int N, int M);

#endif /* COMPAR_H */
