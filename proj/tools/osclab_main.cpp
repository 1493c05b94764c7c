#include "osclab/cli.hpp"

int main(int argc, char** argv) { return osclab::cli_run(argc, argv); }
