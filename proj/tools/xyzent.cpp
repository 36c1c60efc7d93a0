#include <xyzent/cli.hpp>

int main(int argc, char** argv) { return xyzent::cli::run(argc, argv); }
