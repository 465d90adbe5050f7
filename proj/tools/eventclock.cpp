#include "eventclock/cli/run.hpp"

int main(int argc, char** argv) { return eventclock::cli::main_entry(argc, argv); }
