#include <stdio.h>
#include <stdlib.h>

/* C = alpha * A * B for an M x K by K x N product. */

void mmul_blas(float *A, float *B, float *C, int M, int N, int K, float alpha);
void mmul_omp(float *A, float *B, float *C, int M, int N, int K, float alpha);
void mmul_cuda(float *A, float *B, float *C, int M, int N, int K, float alpha);
void mmul_cublas(float *A, float *B, float *C, int M, int N, int K, float alpha);

static float *random_matrix(int rows, int cols)
{
    float *m = malloc(sizeof(float) * rows * cols);
    int i;
    for (i = 0; i < rows * cols; i++)
        m[i] = (float)rand() / (float)RAND_MAX;
    return m;
}

int main(int argc, char **argv)
{
    int M, N, K;
    float alpha = 1.0f;
    float *A, *B, *C;

    if (argc != 2) {
        fprintf(stderr, "usage: %s <matrix_size>\n", argv[0]);
        return 1;
    }
    M = N = K = atoi(argv[1]);
    A = random_matrix(M, K);
    B = random_matrix(K, N);
    C = malloc(sizeof(float) * M * N);

    mmul(A, B, C, M, N, K, alpha);

    printf("%f\n", C[0]);
    free(A);
    free(B);
    free(C);
    return 0;
}
