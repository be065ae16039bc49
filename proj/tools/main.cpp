#include "cli.hpp"
int main(int argc, char** argv) { return qnls::cli_main(argc, argv); }
