#include "wordle/cli.hpp"

int main(int argc, char** argv) { return wordle::cli::dispatch(argc, argv); }
