#include "commands.hpp"

int main(int argc, char** argv) { return moc::cli::cli_main(argc, argv); }
