// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <cstring>
#include <iostream>

#include "hopflyap/acceptance.hpp"

int main(int argc, char** argv) {
    hopflyap::acceptance::Options opt;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
    const auto results = hopflyap::acceptance::run_all(opt);
    return hopflyap::acceptance::print_report(results, std::cout) ? 0 : 1;
}
