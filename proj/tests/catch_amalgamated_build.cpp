// Builds the test framework (with its default main) once.
#include <catch2/catch_amalgamated.cpp>
