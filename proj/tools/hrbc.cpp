#include <string>
#include <vector>

#include "hrbc/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hrbc::cli::run(args);
}
