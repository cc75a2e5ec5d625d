#include <string>
#include <vector>

#include "riesz_cli/commands.hpp"

int main(int argc, char** argv) {
  return riesz::cli::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
