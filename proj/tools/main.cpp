#include "tumorseg/cli.hpp"

int main(int argc, char** argv) { return tumorseg::cli::run(argc, argv); }
