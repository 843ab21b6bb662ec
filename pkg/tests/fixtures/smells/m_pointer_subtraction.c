#include <stdio.h>
#include <string.h>

int main(void) {
    char string1[] = "a/b";
    char string2[] = "a/b";
    char *slash = strchr(string1, '/');
    printf("%d\n", slash - string2);
    return 0;
}
