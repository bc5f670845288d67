#pragma compar include
#include <stdio.h>
#include <stdlib.h>

/* Needleman-Wunsch global alignment of two random sequences. */

#pragma compar method_declare interface(nw_align) target(CUDA) name(nw_align_cuda)
#pragma compar parameter name(reference) type(int) size(max_rows, max_cols) access_mode(read)
#pragma compar parameter name(input_itemsets) type(int) size(max_rows, max_cols) access_mode(readwrite)
#pragma compar parameter name(penalty) type(int) access_mode(read)
void nw_align_cuda(int *reference, int *input_itemsets, int penalty);
#pragma compar method_declare interface(nw_align) target(OPENMP) name(nw_align_omp)
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

#pragma compar initialize
    nw_align(reference, input_itemsets, penalty);
#pragma compar terminate

    printf("%d\n", input_itemsets[max_rows * max_cols - 1]);
    free(reference);
    free(input_itemsets);
    return 0;
}
