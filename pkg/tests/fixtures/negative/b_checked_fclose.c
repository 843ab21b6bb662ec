#include <stdio.h>

int main(void) {
    FILE *f = fopen("file.txt", "w+");
    if (f != NULL) {
        fclose(f);
    }
    return 0;
}
