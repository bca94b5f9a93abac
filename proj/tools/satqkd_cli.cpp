#include <cstdio>

int main() {
  std::puts("satqkd: placeholder");
  return 0;
}
