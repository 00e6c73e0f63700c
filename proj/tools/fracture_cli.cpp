#include "fracture/cli.hpp"

int main(int argc, char** argv) { return fracture::cli::run(argc, argv); }
