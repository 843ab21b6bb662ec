#include <stdio.h>

int main(void) {
    if (fputs("string", stdout) < 0)
        printf("fputs failed!\n");
    return 0;
}
