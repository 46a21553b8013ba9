#include "phm/cli_report.hpp"

int main(int argc, char** argv) { return phm::run_cli(argc, argv); }
