// Catch2 amalgamated translation unit; provides the test runner main.
#include <catch2/catch_amalgamated.cpp>
