#include "cli.hpp"

int main(int argc, char** argv) { return laxfactor::cli::run(argc, argv); }
