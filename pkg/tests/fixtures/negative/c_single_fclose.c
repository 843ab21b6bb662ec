#include <stdio.h>

int main(void) {
    FILE *data = freopen("f.txt", "w+", stdin);
    if (data != NULL) {
        fclose(data);
    }
    return 0;
}
