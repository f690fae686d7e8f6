#include <string>
#include <vector>

#include "qrl/harness.hpp"

int main(int argc, char** argv) {
  return qrl::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
