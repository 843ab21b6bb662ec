#include <stdio.h>
#include <stdlib.h>

int main(void) {
    printf("%s", getenv("PATH"));
    return 0;
}
