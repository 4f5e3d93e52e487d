#include "commands.hpp"

int main(int argc, char** argv) { return pdbayes::cli::main_entry(argc, argv); }
