#include "dynwalk/runner.hpp"

int main(int argc, char** argv) { return dynwalk::cli_main(argc, argv); }
