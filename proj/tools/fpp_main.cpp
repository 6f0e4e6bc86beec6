#include <vector>
#include <string>

#include "fpp/cli_io.hpp"

int main(int argc, char** argv) {
  return fpp::run_command(std::vector<std::string>(argv + 1, argv + argc));
}
