#pragma compar include
#include <stdio.h>

#pragma compar method_declare interface(sort) target(CUDA) name(sort_cuda)
#pragma compar parameter name(arr) type(float) size(n) access_mode(readwrite)
#pragma compar parameter name(n) type(int) access_mode(read)
void sort_cuda(float *arr, int n);
#pragma compar method_declare interface(sort) target(OPENMP) name(sort_omp)
void sort_omp(float *arr, int n);

#pragma compar method_declare interface(mmul) target(CUDA) name(mmul_cuda)
#pragma compar parameter name(A) type(float) size(N, M) access_mode(read)
#pragma compar parameter name(B) type(float) size(N, M) access_mode(readwrite)
#pragma compar parameter name(N) type(int) access_mode(read)
#pragma compar parameter name(M) type(int) access_mode(read)
void mmul_cuda(float *A, float *B, int N, int M);
#pragma compar method_declare interface(mmul) target(OPENMP) name(mmul_omp)
void mmul_omp(float *A, float *B, int N, int M);

int main(void) {
    static float arr[1024], A[64 * 64], B[64 * 64]; int n = 1024, N = 64, M = 64;
#pragma compar initialize
    sort(arr, n);
    mmul(A, B, N, M);
#pragma compar terminate
    return 0; }
