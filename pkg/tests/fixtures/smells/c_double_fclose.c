#include <stdio.h>

int main(void) {
    FILE *data =
      freopen("f.txt", "w+", stdin);
    fclose(data);
    fclose(data);
    return 0;
}
