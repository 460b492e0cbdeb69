#include "seoam/bessel.hpp"
#include "seoam/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace seoam::bessel {

namespace {

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

} // namespace

double log_bessel_i(int n, double x) {
    const int m = std::abs(n);
    if (x < 0.0) throw numeric_range_error("log_bessel_i: negative argument");
    if (x == 0.0) {
        return m == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    }

    // I_m(x) = sum_k (x/2)^(2k+m) / (k! (k+m)!), all terms positive.
    const double log_half_x = std::log(0.5 * x);
    double log_term = m * log_half_x - std::lgamma(m + 1.0);
    double log_sum = log_term;

    // Terms grow until k ~ (sqrt(m^2 + x^2) - m) / 2, then decay factorially.
    const double k_peak = 0.5 * (std::sqrt(static_cast<double>(m) * m + x * x) - m);
    const long k_max = static_cast<long>(k_peak) + 64 + static_cast<long>(4.0 * std::sqrt(k_peak + 1.0));

    for (long k = 0; k <= k_max + 100000; ++k) {
        log_term += 2.0 * log_half_x - std::log((k + 1.0) * (k + 1.0 + m));
        log_sum = log_add_exp(log_sum, log_term);
        if (k > static_cast<long>(k_peak) && log_term < log_sum - 45.0) break;
    }
    return log_sum;
}

double bessel_i(int n, double x) {
    const double lv = log_bessel_i(n, x);
    if (lv > 700.0) {
        throw numeric_range_error("bessel_i overflow: I_" + std::to_string(n) + "(" +
                                  std::to_string(x) + "), use log_bessel_i");
    }
    return std::exp(lv);
}

double bessel_j(int n, double x) {
    double sign = 1.0;
    if (n < 0) {
        n = -n;
        if (n % 2 != 0) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2 != 0) sign = -sign;
    }
    const double v = std::cyl_bessel_j(static_cast<double>(n), x);
    if (!std::isfinite(v)) {
        throw numeric_range_error("bessel_j: non-finite J_" + std::to_string(n) + "(" +
                                  std::to_string(x) + ")");
    }
    return sign * v;
}

} // namespace seoam::bessel
