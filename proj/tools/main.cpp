#include "lazyoco/cli.hpp"

int main(int argc, char** argv) { return lazyoco::run_cli(argc, argv); }
