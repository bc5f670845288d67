#pragma compar include
#include <stdio.h>
#include <stdlib.h>

/* In-place LU decomposition of a dense square matrix. */

#pragma compar method_declare interface(lud) target(CUDA) name(lud_cuda)
#pragma compar parameter name(m) type(float) size(matrix_dim, matrix_dim) access_mode(readwrite)
#pragma compar parameter name(matrix_dim) type(int) access_mode(read)
void lud_cuda(float *m, int matrix_dim);
#pragma compar method_declare interface(lud) target(OPENMP) name(lud_omp)
void lud_omp(float *m, int matrix_dim);

static void create_matrix(float *m, int size)
{
    int i, j;
    for (i = 0; i < size; i++)
        for (j = 0; j < size; j++)
            m[i * size + j] = (i == j) ? (float)size : 1.0f / (float)(1 + i + j);
}

int main(int argc, char **argv)
{
    int matrix_dim;
    float *m;

    if (argc != 2) {
        fprintf(stderr, "usage: %s <matrix_dim>\n", argv[0]);
        return 1;
    }
    matrix_dim = atoi(argv[1]);
    m = malloc(sizeof(float) * matrix_dim * matrix_dim);
    create_matrix(m, matrix_dim);

#pragma compar initialize
    lud(m, matrix_dim);
#pragma compar terminate

    printf("%f\n", m[0]);
    free(m);
    return 0;
}
