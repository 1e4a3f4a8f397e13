#include "nlss/cli.hpp"

int main(int argc, char** argv) { return nlss::run_cli(argc, argv); }
