#include <fcntl.h>
#include <unistd.h>

int main(void) {
    int f = open("file.txt", O_RDWR);
    if (f >= 0) {
        close(f);
    }
    return 0;
}
