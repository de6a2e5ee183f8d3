#include "vbpw/commands.hpp"

int main(int argc, char** argv) { return vbpw::run_cli(argc, argv); }
