#pragma once

#include "maslov/evolution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace maslov {

PotentialSpec constant_potential(const Matrix& v, double s = 0.0);
PotentialSpec constant_potential(double v, double s = 0.0);

// 1 - 3 sech^2(x/2)
PotentialSpec ac_pulse(double s = 0.0);

// [[4 - 12 sech^2 x + c, -c], [-c, 4 - 12 sech^2 x + c]]
PotentialSpec ac_system(double c, double s = 0.0);

struct SechWell {
    double depth;  // subtracted: -depth sech^2((x - center)/width)
    double center;
    double width;
};

// background - sum_k depth_k sech^2((x - c_k)/w_k), scalar.
PotentialSpec sech_wells(double background, std::vector<SechWell> wells, double s = 0.0);

// Scalar family used by the randomized suites: 1-3 wells on a positive background.
PotentialSpec random_scalar_wells(std::uint64_t seed, double s = 0.0);

// 2x2 symmetric well: V0 - sech^2(x/w) * B with V0, B random symmetric, V0 > 0.
PotentialSpec random_symmetric_well(std::uint64_t seed, double s = 0.0);

// V + shift * I, same endstate structure.
PotentialSpec shifted_potential(const PotentialSpec& pot, double shift);

struct TableSample {
    double x;
    Matrix v;
};

// Monotone piecewise-cubic per entry inside the range, clamped outside.
PotentialSpec load_tabulated_potential(const std::vector<TableSample>& samples, double s = 0.0);

// Header x,v11,v12,...,vnn (full row-major) or x,v11,v12,..,v22,.. (upper triangle).
std::vector<TableSample> read_table_csv(const std::string& path);
PotentialSpec load_tabulated_csv(const std::string& path, double s = 0.0);

std::vector<TableSample> sample_potential(const PotentialSpec& pot, double x0, double x1, double step);
void write_table_csv(const std::vector<TableSample>& samples, const std::string& path);

} // namespace maslov
