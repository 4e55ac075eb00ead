#include "qbus/cli/commands.hpp"

int main(int argc, char** argv) { return qbus::cli::main_entry(argc, argv); }
