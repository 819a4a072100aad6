#include "minklab/harness.hpp"

int main(int argc, char** argv) { return minklab::cli_run(argc, argv); }
