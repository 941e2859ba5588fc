#include <iostream>

#include "mlel/cli.h"

int main(int argc, char** argv) { return mlel::cli::run(argc, argv, std::cout, std::cerr); }
