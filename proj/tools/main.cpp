#include "cli.hpp"

int main(int argc, char** argv) { return dicke::run_cli(argc, argv); }
