#include "cli.hpp"

int main(int argc, char** argv) { return fmmi::cli::run(argc, argv); }
