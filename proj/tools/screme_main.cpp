#include "screme/experiments.hpp"

int main(int argc, char** argv) { return screme::cli::run(argc, argv); }
