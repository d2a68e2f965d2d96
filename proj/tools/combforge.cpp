#include "combforge/cli_app.hpp"

int main(int argc, char** argv) { return combforge::cli::cli_main(argc, argv); }
