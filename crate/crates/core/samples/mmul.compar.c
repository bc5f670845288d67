#pragma compar include
#include <stdio.h>
#include <stdlib.h>

/* C = alpha * A * B for an M x K by K x N product. */

#pragma compar method_declare interface(mmul) target(BLAS) name(mmul_blas)
#pragma compar parameter name(A) type(float) size(M, K) access_mode(read)
#pragma compar parameter name(B) type(float) size(K, N) access_mode(read)
#pragma compar parameter name(C) type(float) size(M, N) access_mode(write)
#pragma compar parameter name(M) type(int) access_mode(read)
#pragma compar parameter name(N) type(int) access_mode(read)
#pragma compar parameter name(K) type(int) access_mode(read)
#pragma compar parameter name(alpha) type(float) access_mode(read)
void mmul_blas(float *A, float *B, float *C, int M, int N, int K, float alpha);
#pragma compar method_declare interface(mmul) target(OPENMP) name(mmul_omp)
void mmul_omp(float *A, float *B, float *C, int M, int N, int K, float alpha);
#pragma compar method_declare interface(mmul) target(CUDA) name(mmul_cuda)
void mmul_cuda(float *A, float *B, float *C, int M, int N, int K, float alpha);
#pragma compar method_declare interface(mmul) target(CUBLAS) name(mmul_cublas)
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

#pragma compar initialize
    mmul(A, B, C, M, N, K, alpha);
#pragma compar terminate

    printf("%f\n", C[0]);
    free(A);
    free(B);
    free(C);
    return 0;
}
