#include <stdio.h>
#include <stdlib.h>

/* Needleman-Wunsch global alignment of two random sequences. */

void nw_align_cuda(int *reference, int *input_itemsets, int penalty);
void nw_align_omp(int *reference, int *input_itemsets, int penalty);

extern int blosum62[24][24];

int main(int argc, char **argv)
{
    int max_rows, max_cols, penalty, i, j;
    int *reference, *input_itemsets;

    if (argc != 3) {
        fprintf(stderr, "usage: %s <max_rows/max_cols> <penalty>\n", argv[0]);
        return 1;
    }
    max_rows = max_cols = atoi(argv[1]) + 1;
    penalty = atoi(argv[2]);
    reference = calloc((size_t)max_rows * max_cols, sizeof(int));
    input_itemsets = calloc((size_t)max_rows * max_cols, sizeof(int));
    srand(7);
    for (i = 1; i < max_rows; i++)
        input_itemsets[i * max_cols] = rand() % 10 + 1;
    for (j = 1; j < max_cols; j++)
        input_itemsets[j] = rand() % 10 + 1;
    for (i = 1; i < max_rows; i++)
        for (j = 1; j < max_cols; j++)
            reference[i * max_cols + j] = blosum62[input_itemsets[i * max_cols]][input_itemsets[j]];

    nw_align(reference, input_itemsets, penalty);

    printf("%d\n", input_itemsets[max_rows * max_cols - 1]);
    free(reference);
    free(input_itemsets);
    return 0;
}
