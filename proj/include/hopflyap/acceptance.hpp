#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hopflyap::acceptance {

// Reference value of the leading-order coefficient.
inline constexpr double kReferenceA0 = -0.04869322966;

struct Options {
    bool quick = false;            // skip the dynamics criterion
    double a0_perturbation = 0.0;  // negative-control hook, added to kReferenceA0
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    bool skipped = false;
    std::string detail;
    double runtime_ms = 0.0;
    double runtime_limit_ms = 0.0;
};

std::vector<CriterionResult> run_all(const Options& options = {});

// One "[PASS] ..." / "[FAIL] ..." / "[SKIP] ..." line per criterion. Returns
// true iff nothing failed.
bool print_report(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace hopflyap::acceptance
