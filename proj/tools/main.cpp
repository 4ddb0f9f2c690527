#include "eitgap/cli.hpp"

int main(int argc, char** argv) { return eitgap::dispatch(argc, argv); }
