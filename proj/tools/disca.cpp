// DISCA simulator command-line entry point.
#include <string>
#include <vector>

#include "disca/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return disca::cli::run(std::move(args));
}
