#include <stdio.h>
#include <string.h>

int main(void) {
    char string1[] = "a/b";
    char *slash = strchr(string1, '/');
    if (slash != NULL) {
        printf("%s\n", slash);
    }
    return 0;
}
