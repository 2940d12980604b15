#include "lmbs/cli.hpp"

int main(int argc, char** argv) { return lmbs::cli::run(argc, argv); }
