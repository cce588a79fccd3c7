#include <iostream>

#include "adaspec/selftest.hpp"

int main() { return adaspec::selftest::run_acceptance(std::cout) ? 0 : 1; }
