#include <stdlib.h>

int main(void) {
    char *data =
      (char *)malloc(100*sizeof(char));
    free(data);
    free(data);
    return 0;
}
