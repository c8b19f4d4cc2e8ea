#include "passchart/cli.hpp"

int main(int argc, char** argv) { return passchart::run(argc, argv); }
