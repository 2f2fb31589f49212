#include "geointerp/cli.hpp"

int main(int argc, char** argv) { return geointerp::cli::dispatch(argc, argv); }
