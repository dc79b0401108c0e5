#include "gbem/cli.hpp"

int main(int argc, char** argv) { return gbem::run_cli(argc, argv); }
