#include "levyatm/cli.hpp"

int main(int argc, char** argv) { return levyatm::cli::run_command(argc, argv); }
