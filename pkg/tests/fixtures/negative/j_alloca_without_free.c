#include <alloca.h>

int main(void) {
    char *data = (char *)alloca(100*sizeof(char));
    data[0] = 'x';
    return 0;
}
