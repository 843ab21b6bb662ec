#include <stdio.h>

int main(void) {
    char *data = "hello";
    printf("%s", data);
    return 0;
}
