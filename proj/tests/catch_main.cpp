// Builds the Catch2 amalgamated runner (provides main) once for the suite.
#include <catch2/catch_amalgamated.cpp>
