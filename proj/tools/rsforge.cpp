#include "rsforge/cli.hpp"

int main(int argc, char** argv) { return rsforge::cli::run(argc, argv); }
