#include "ocskit/cli.hpp"

int main(int argc, char** argv) { return ocskit::run_cli(argc, argv); }
