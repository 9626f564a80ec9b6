#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  specpredict::cli::RunConfig config;
  if (auto code = specpredict::cli::parse_args(argc, argv, config, std::cout, std::cerr)) return *code;
  return specpredict::cli::run(config, std::cout, std::cerr);
}
