#include <string>
#include <vector>

#include "pertalg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return pertalg::run_command(args);
}
