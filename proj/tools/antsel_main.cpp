#include "antsel/runner.hpp"

int main(int argc, char** argv) { return antsel::run_cli(argc, argv); }
