#include "timersel/cli.hpp"

int main(int argc, char** argv) { return timersel::cli::run(argc, argv); }
