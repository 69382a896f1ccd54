#include "edgejump/cli/app.hpp"

int main(int argc, char** argv) { return edgejump::cli::run(argc, argv); }
