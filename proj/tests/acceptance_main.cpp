#include <iostream>

#include "gpach/selftest.hpp"

int main() { return gpach::run_selftest(std::cout) ? 0 : 1; }
