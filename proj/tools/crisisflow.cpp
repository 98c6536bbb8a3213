#include "crisisflow/cli.hpp"

int main(int argc, char** argv) { return crisisflow::dispatch(argc, argv); }
