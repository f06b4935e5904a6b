#include "bec/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return bec::cli::run(argc, argv, std::cout, std::cerr);
}
