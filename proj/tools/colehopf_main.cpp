#include <cstdio>

int main() {
    std::puts("colehopf: not wired up yet");
    return 0;
}
