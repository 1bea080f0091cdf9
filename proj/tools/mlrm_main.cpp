#include <cstdio>

int main() {
    std::puts("mlrm: command-line interface under construction");
    return 0;
}
