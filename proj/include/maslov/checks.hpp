#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace maslov {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worst = 0.0; // largest measured defect, or mismatch count
    double tolerance = 0.0;
    int cases = 0;
    std::string detail;
};

SuiteResult check_unitarity(std::uint64_t seed, int cases = 200);
SuiteResult check_plane_invariance(std::uint64_t seed, int cases = 200);
SuiteResult check_lagrangian_residual(std::uint64_t seed);
SuiteResult check_renormalization(std::uint64_t seed);
SuiteResult check_path_additivity(std::uint64_t seed);
SuiteResult check_refinement_stability(std::uint64_t seed);

std::vector<SuiteResult> run_invariant_suites(std::uint64_t seed);

} // namespace maslov
