#include <stdio.h>
#include <stdlib.h>

/* 3D thermal simulation over a stack of nz layers of nx by ny cells. */

void hotspot_opt_cuda(float *power, float *temp_in, float *temp_out, int iterations);
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

    hotspot_opt(power, temp_in, temp_out, iterations);

    printf("%f\n", temp_out[size / 2]);
    free(power);
    free(temp_in);
    free(temp_out);
    return 0;
}
