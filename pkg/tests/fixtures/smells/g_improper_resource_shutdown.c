#include <stdio.h>
#include <fcntl.h>
#include <sys/stat.h>

int main(void) {
    int f = open("file.txt",
                 O_RDWR | O_CREAT,
                 S_IREAD | S_IWRITE);
    fclose((FILE *)f);
    return 0;
}
