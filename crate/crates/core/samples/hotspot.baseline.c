#include <stdio.h>
#include <stdlib.h>

/* Transient thermal simulation of a chip floorplan on a square grid. */
#define MAX_ITERATIONS 60

void compute_tran_temp_cuda(float *temp, float *power);
void compute_tran_temp_omp(float *temp, float *power);

static void read_input(float *vect, int grid_rows, int grid_cols, const char *file)
{
    FILE *fp = fopen(file, "r");
    int i;
    if (!fp) {
        fprintf(stderr, "cannot open %s\n", file);
        exit(1);
    }
    for (i = 0; i < grid_rows * grid_cols; i++) {
        if (fscanf(fp, "%f", &vect[i]) != 1) {
            fprintf(stderr, "short input in %s\n", file);
            exit(1);
        }
    }
    fclose(fp);
}

int main(int argc, char **argv)
{
    int grid_rows, grid_cols, i;
    float *temp, *power;

    if (argc != 4) {
        fprintf(stderr, "usage: %s <grid_size> <temp_file> <power_file>\n", argv[0]);
        return 1;
    }
    grid_rows = grid_cols = atoi(argv[1]);
    temp = malloc(sizeof(float) * grid_rows * grid_cols);
    power = malloc(sizeof(float) * grid_rows * grid_cols);
    read_input(temp, grid_rows, grid_cols, argv[2]);
    read_input(power, grid_rows, grid_cols, argv[3]);

    for (i = 0; i < MAX_ITERATIONS; i++) {
        compute_tran_temp(temp, power);
    }

    printf("%f\n", temp[0]);
    free(temp);
    free(power);
    return 0;
}
