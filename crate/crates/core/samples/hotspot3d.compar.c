#pragma compar include
#include <stdio.h>
#include <stdlib.h>

/* 3D thermal simulation over a stack of nz layers of nx by ny cells. */

#pragma compar method_declare interface(hotspot_opt) target(CUDA) name(hotspot_opt_cuda)
#pragma compar parameter name(power) type(float) size(nx, ny, nz) access_mode(read)
#pragma compar parameter name(temp_in) type(float) size(nx, ny, nz) access_mode(read)
#pragma compar parameter name(temp_out) type(float) size(nx, ny, nz) access_mode(write)
#pragma compar parameter name(iterations) type(int) access_mode(read)
void hotspot_opt_cuda(float *power, float *temp_in, float *temp_out, int iterations);
#pragma compar method_declare interface(hotspot_opt) target(OPENMP) name(hotspot_opt_omp)
void hotspot_opt_omp(float *power, float *temp_in, float *temp_out, int iterations);

static void fill(float *v, int count, float value)
{
    int i;
    for (i = 0; i < count; i++)
        v[i] = value;
}

int main(int argc, char **argv)
{
    int nx, ny, nz, iterations, size;
    float *power, *temp_in, *temp_out;

    if (argc != 4) {
        fprintf(stderr, "usage: %s <rows/cols> <layers> <iterations>\n", argv[0]);
        return 1;
    }
    nx = ny = atoi(argv[1]);
    nz = atoi(argv[2]);
    iterations = atoi(argv[3]);
    size = nx * ny * nz;
    power = malloc(sizeof(float) * size);
    temp_in = malloc(sizeof(float) * size);
    temp_out = malloc(sizeof(float) * size);
    fill(power, size, 0.5f);
    fill(temp_in, size, 323.0f);

#pragma compar initialize
    hotspot_opt(power, temp_in, temp_out, iterations);
#pragma compar terminate

    printf("%f\n", temp_out[size / 2]);
    free(power);
    free(temp_in);
    free(temp_out);
    return 0;
}
