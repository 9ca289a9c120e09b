#include <cstdio>

int main()
{
  std::puts("pec-sim: not wired up yet");
  return 1;
}
