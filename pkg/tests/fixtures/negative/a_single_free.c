#include <stdlib.h>

int main(void) {
    char *data = (char *)malloc(100*sizeof(char));
    if (data != NULL) {
        free(data);
    }
    return 0;
}
