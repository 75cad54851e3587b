#pragma once

#include <cstdint>
#include <vector>

namespace maxdyn {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
// series for x < a + 1 and continued fraction beyond.
double regularized_gamma_q(double a, double x);

// Survival function of the chi-square distribution with df degrees of
// freedom: P(X >= x).
double chi_square_sf(double x, double df);

struct TwoSampleChiSquare {
    double statistic = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    std::size_t bins = 0;
};

// Two-sample chi-square goodness-of-fit on non-negative integer samples.
// Bins are pooled from the right until each pooled bin holds at least
// min_count combined observations.
TwoSampleChiSquare two_sample_chi_square(const std::vector<std::uint64_t>& a,
                                         const std::vector<std::uint64_t>& b,
                                         std::uint64_t min_count = 10);

}  // namespace maxdyn
