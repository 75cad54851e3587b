#include "maxdyn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxdyn {

namespace {

double gamma_series_p(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 1; i < 1000; ++i) {
        term *= x / (a + i);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_cf_q(double a, double x) {
    // Lentz's continued fraction for Q(a, x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("regularized_gamma_q domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
    return gamma_cf_q(a, x);
}

double chi_square_sf(double x, double df) {
    return regularized_gamma_q(df / 2.0, x / 2.0);
}

TwoSampleChiSquare two_sample_chi_square(const std::vector<std::uint64_t>& a,
                                         const std::vector<std::uint64_t>& b,
                                         std::uint64_t min_count) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
    std::uint64_t max_value = 0;
    for (std::uint64_t v : a) max_value = std::max(max_value, v);
    for (std::uint64_t v : b) max_value = std::max(max_value, v);

    std::vector<std::uint64_t> count_a(max_value + 1, 0), count_b(max_value + 1, 0);
    for (std::uint64_t v : a) ++count_a[v];
    for (std::uint64_t v : b) ++count_b[v];

    // Pool sparse values from the right so every bin is populated enough for
    // the chi-square approximation.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> bins;
    std::uint64_t acc_a = 0, acc_b = 0;
    for (std::uint64_t v = 0; v <= max_value; ++v) {
        acc_a += count_a[v];
        acc_b += count_b[v];
        if (acc_a + acc_b >= min_count) {
            bins.emplace_back(acc_a, acc_b);
            acc_a = acc_b = 0;
        }
    }
    if (acc_a + acc_b > 0) {
        if (bins.empty()) {
            bins.emplace_back(acc_a, acc_b);
        } else {
            bins.back().first += acc_a;
            bins.back().second += acc_b;
        }
    }

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ra = std::sqrt(nb / na);
    const double rb = std::sqrt(na / nb);
    double statistic = 0.0;
    for (auto [ca, cb] : bins) {
        const double total = static_cast<double>(ca + cb);
        if (total == 0.0) continue;
        const double diff = ra * static_cast<double>(ca) - rb * static_cast<double>(cb);
        statistic += diff * diff / total;
    }

    TwoSampleChiSquare result;
    result.statistic = statistic;
    result.bins = bins.size();
    result.df = bins.size() > 1 ? static_cast<double>(bins.size() - 1) : 1.0;
    result.p_value = chi_square_sf(statistic, result.df);
    return result;
}

}  // namespace maxdyn
