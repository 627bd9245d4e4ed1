#include "dendrolearn/cli.hpp"

int main(int argc, char** argv) { return dendrolearn::run_cli(argc, argv); }
