#include "mcx/cli.hpp"

int main(int argc, char** argv) { return mcx::cli::dispatch(argc, argv); }
