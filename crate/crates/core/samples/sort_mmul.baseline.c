#include <stdio.h>

void sort_cuda(float *arr, int n);
void sort_omp(float *arr, int n);

void mmul_cuda(float *A, float *B, int N, int M);
void mmul_omp(float *A, float *B, int N, int M);

int main(void) {
    static float arr[1024], A[64 * 64], B[64 * 64]; int n = 1024, N = 64, M = 64;
    sort(arr, n);
    mmul(A, B, N, M);
    return 0; }
