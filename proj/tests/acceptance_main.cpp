#include <iostream>

#include "cornerlab/acceptance.hpp"

int main() {
  int failures = cornerlab::run_acceptance(std::cout);
  return failures == 0 ? 0 : 1;
}
