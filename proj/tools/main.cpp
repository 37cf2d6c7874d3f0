#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto result = nestfold::cli::run(args);
  std::cout << nestfold::cli::render(result);
  if (!result.error.empty()) std::cerr << "nestfold: " << result.error << "\n";
  return result.exit_code;
}
