#include <string>
#include <vector>

#include "dgd/cli.hpp"

int main(int argc, char** argv) {
  return dgd::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
