#include <string>
#include <vector>

#include "topochain/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return topochain::cli::run(std::move(args));
}
