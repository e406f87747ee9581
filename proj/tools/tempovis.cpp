#include "tempovis/cli.hpp"

int main(int argc, char** argv) { return tempovis::cli::run(argc, argv); }
