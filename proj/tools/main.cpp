#include "commands.hpp"

int main(int argc, char** argv) { return sda::cli::run(argc, argv); }
