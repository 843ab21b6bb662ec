#include <stdio.h>

int main(void) {
    char *data;
    printf("%s", data);
    return 0;
}
