#include "deph/cli_app.hpp"

int main(int argc, char** argv) { return deph::cli::cli_main(argc, argv); }
