#include "suctionlab/cli.hpp"

int main(int argc, char** argv) { return suctionlab::cli_main(argc, argv); }
