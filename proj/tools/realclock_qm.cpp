#include <iostream>

#include "realclock/cli/app.hpp"

int main(int argc, char** argv) { return realclock::cli::run_app(argc, argv, std::cerr); }
