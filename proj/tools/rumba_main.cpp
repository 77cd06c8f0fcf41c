#include "rumba/cli.hpp"

int main(int argc, char** argv) { return rumba::cli::main(argc, argv); }
