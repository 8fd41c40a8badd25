#ifndef MSMFE_TESTS_REFERENCE_DATA_HPP
#define MSMFE_TESTS_REFERENCE_DATA_HPP

#include <array>
#include <limits>
#include <vector>

#include "msmfe/assembly.hpp"

namespace msmfe::reference_data {

inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

/// One refinement level: errors and rates for sigma, div sigma, u, Q u, gamma.
struct Row {
    int n;
    std::array<double, 5> error;
    std::array<double, 5> rate;  ///< NaN where no rate is reported
};

/// Published relative errors of a convergence experiment.
struct Table {
    int id;
    int example;
    Method method;
    int nu_exponent;  ///< example 3 only: nu = 1/2 - 10^-nu_exponent
    std::vector<Row> rows;
};

inline const std::vector<Table>& tables()
{
    static const std::vector<Table> t{
        {1, 1, Method::msmfe0, 0, {
            {2, {0.4397, 0.3457, 0.6031, 0.03838, 0.3213}, {nan, nan, nan, nan, nan}},
            {4, {0.2234, 0.1812, 0.3162, 0.008198, 0.163}, {0.98, 0.93, 0.93, 2.23, 0.98}},
            {8, {0.1121, 0.09208, 0.16, 0.001977, 0.0818}, {0.99, 0.98, 0.98, 2.05, 0.99}},
            {16, {0.0561, 0.04626, 0.08024, 0.0004899, 0.04094}, {1.0, 0.99, 1.0, 2.01, 1.0}},
        }},
        {2, 1, Method::msmfe1, 0, {
            {2, {0.7566, 0.3457, 0.6034, 0.04877, 0.3017}, {nan, nan, nan, nan, nan}},
            {4, {0.4037, 0.1812, 0.3162, 0.01064, 0.1139}, {0.91, 0.93, 0.93, 2.2, 1.4}},
            {8, {0.2072, 0.09208, 0.16, 0.002667, 0.04187}, {0.96, 0.98, 0.98, 2.0, 1.44}},
            {16, {0.1047, 0.04626, 0.08024, 0.0006829, 0.01511}, {0.98, 0.99, 1.0, 1.97, 1.47}},
        }},
        {3, 2, Method::msmfe0, 0, {
            {2, {1.0, 1.0, 1.0, 1.0, 1.0}, {nan, nan, nan, nan, nan}},
            {4, {0.7662, 0.7867, 0.7626, 0.6023, 0.7662}, {0.38, 0.35, 0.39, 0.73, 0.38}},
            {8, {0.3466, 0.4097, 0.3975, 0.1901, 0.3952}, {1.14, 0.94, 0.94, 1.66, 0.96}},
            {16, {0.1515, 0.203, 0.1974, 0.05088, 0.1969}, {1.19, 1.01, 1.01, 1.9, 1.0}},
        }},
        {4, 2, Method::msmfe1_scaled, 0, {
            {2, {1.0, 1.0, 1.0, 1.0, 1.0}, {nan, nan, nan, nan, nan}},
            {4, {0.7797, 0.7867, 0.7806, 0.6388, 0.8836}, {0.36, 0.35, 0.36, 0.65, 0.18}},
            {8, {0.3816, 0.4097, 0.4278, 0.2665, 0.5144}, {1.03, 0.94, 0.87, 1.26, 0.78}},
            {16, {0.1753, 0.203, 0.2067, 0.08675, 0.2012}, {1.12, 1.01, 1.05, 1.62, 1.35}},
            {32, {0.08371, 0.1011, 0.09993, 0.02404, 0.06594}, {1.07, 1.01, 1.05, 1.85, 1.61}},
        }},
        {5, 3, Method::msmfe1, 1, {
            {2, {0.4974, 0.2826, 0.6045, 0.06668, 0.3017}, {nan, nan, nan, nan, nan}},
            {4, {0.2634, 0.1464, 0.3164, 0.01429, 0.1139}, {0.92, 0.95, 0.93, 2.22, 1.4}},
            {8, {0.1349, 0.07405, 0.16, 0.003496, 0.04186}, {0.97, 0.98, 0.98, 2.03, 1.44}},
            {16, {0.06812, 0.03715, 0.08024, 0.0008803, 0.01511}, {0.99, 1.0, 1.0, 1.99, 1.47}},
        }},
        {6, 3, Method::msmfe1, 2, {
            {2, {0.06618, 0.1758, 0.6074, 0.1011, 0.3017}, {nan, nan, nan, nan, nan}},
            {4, {0.03039, 0.08874, 0.3167, 0.02171, 0.1139}, {1.12, 0.99, 0.94, 2.22, 1.4}},
            {8, {0.01497, 0.0445, 0.1601, 0.005317, 0.04187}, {1.02, 1.0, 0.98, 2.03, 1.44}},
            {16, {0.007418, 0.02227, 0.08025, 0.001335, 0.01511}, {1.0, 1.0, 1.0, 1.99, 1.47}},
        }},
        {7, 3, Method::msmfe1, 5, {
            {2, {0.0412, 0.1585, 0.608, 0.1072, 0.3017}, {nan, nan, nan, nan, nan}},
            {4, {0.01063, 0.07966, 0.3168, 0.02312, 0.1139}, {1.95, 0.99, 0.94, 2.21, 1.4}},
            {8, {0.002697, 0.03988, 0.1601, 0.005695, 0.04187}, {1.99, 1.0, 0.98, 2.02, 1.44}},
            {16, {0.0006712, 0.01995, 0.08025, 0.001434, 0.01511}, {2.0, 1.0, 1.0, 1.99, 1.47}},
        }},
        {8, 3, Method::msmfe1, 9, {
            {2, {0.0412, 0.1585, 0.608, 0.1072, 0.3017}, {nan, nan, nan, nan, nan}},
            {4, {0.01064, 0.07965, 0.3168, 0.02312, 0.1139}, {1.95, 0.99, 0.94, 2.21, 1.4}},
            {8, {0.00268, 0.03988, 0.1601, 0.005695, 0.04187}, {1.99, 1.0, 0.98, 2.02, 1.44}},
            {16, {0.0006713, 0.01994, 0.08025, 0.001435, 0.01511}, {2.0, 1.0, 1.0, 1.99, 1.47}},
        }},
    };
    return t;
}

inline const Table& table(int id) { return tables().at(static_cast<std::size_t>(id - 1)); }

}  // namespace msmfe::reference_data

#endif  // MSMFE_TESTS_REFERENCE_DATA_HPP
