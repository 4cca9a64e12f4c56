#include <iostream>

#include "ebsched/cli/commands.hpp"

int main(int argc, char** argv) {
  return ebsched::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
