#include "seoam/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace seoam::analysis {

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

double FitResult::sigma_epsilon() const { return std::sqrt(covariance[0][0]); }
double FitResult::sigma_a1() const { return std::sqrt(covariance[1][1]); }
double FitResult::sigma_a2() const { return std::sqrt(covariance[2][2]); }

double FitResult::evaluate(double lambda_ang) const {
    return epsilon + a1_per_ang * lambda_ang + a2_per_ang2 * lambda_ang * lambda_ang;
}

FitResult weighted_quadratic_fit(const signal::PolarizationSeries& series) {
    const auto n = static_cast<Eigen::Index>(series.points.size());
    if (n < 10) throw fit_error("weighted_quadratic_fit: need at least 10 points");
    series.validate();

    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& pt = series.points[static_cast<size_t>(i)];
        const double w = 1.0 / std::sqrt(pt.variance);
        design(i, 0) = w;
        design(i, 1) = w * pt.lambda_ang;
        design(i, 2) = w * pt.lambda_ang * pt.lambda_ang;
        rhs(i) = w * pt.value;
    }

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
    const Eigen::Matrix3d r_mat =
        qr.matrixQR().topRows(3).triangularView<Eigen::Upper>().toDenseMatrix().topLeftCorner(3, 3);
    for (int k = 0; k < 3; ++k)
        if (std::abs(r_mat(k, k)) < 1e-12 * std::abs(r_mat(0, 0)))
            throw fit_error("weighted_quadratic_fit: rank-deficient design matrix");

    const Eigen::Vector3d coef = qr.solve(rhs);
    const Eigen::Matrix3d r_inv =
        r_mat.triangularView<Eigen::Upper>().solve(Eigen::Matrix3d::Identity());
    const Eigen::Matrix3d cov = r_inv * r_inv.transpose();

    FitResult fit;
    fit.epsilon = coef(0);
    fit.a1_per_ang = coef(1);
    fit.a2_per_ang2 = coef(2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            fit.covariance[static_cast<size_t>(i)][static_cast<size_t>(j)] = cov(i, j);

    double chi2 = 0.0;
    fit.residuals.resize(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& pt = series.points[static_cast<size_t>(i)];
        const double r = pt.value - fit.evaluate(pt.lambda_ang);
        fit.residuals[static_cast<size_t>(i)] = r;
        chi2 += r * r / pt.variance;
    }
    fit.reduced_chi2 = chi2 / static_cast<double>(n - 3);
    return fit;
}

signal::PolarizationSeries isolate_oscillations(const signal::PolarizationSeries& series,
                                                const FitResult& fit) {
    if (fit.residuals.size() != series.points.size())
        throw fit_error("isolate_oscillations: fit does not match the series");
    signal::PolarizationSeries out;
    out.polarity = series.polarity;
    out.provenance = "residual";
    for (size_t i = 0; i < series.points.size(); ++i) {
        const auto& pt = series.points[i];
        if (pt.lambda_ang <= 0.0) continue; // excluded by band
        const double l2 = pt.lambda_ang * pt.lambda_ang;
        signal::PolarizationPoint rp;
        rp.lambda_ang = pt.lambda_ang;
        rp.value = fit.residuals[i] / l2;
        rp.variance = pt.variance / (l2 * l2);
        out.points.push_back(rp);
    }
    return out;
}

double WobbleFit::amplitude_sum_err() const { return std::hypot(amp1_err, amp2_err); }

namespace {

struct CosineTermData {
    std::vector<double> lambda, value, inv_sigma;
    double span = 0.0;

    // Nuisance columns 1, 1/lambda, 1/lambda^2: the image of any quadratic-fit
    // error after division by lambda^2, so the cosine fit is insensitive to
    // the leakage the first-pass fit left in the residual.
    static constexpr Eigen::Index kTrendCols = 3;

    // chi^2-optimal linear amplitudes at fixed angular frequencies
    // (variable projection); coef = (trend..., a_c, a_s per frequency).
    void solve_linear(const std::vector<double>& omegas, Eigen::VectorXd& coef, double& chi2,
                      Eigen::MatrixXd* cov = nullptr) const {
        const auto n = static_cast<Eigen::Index>(lambda.size());
        const auto cols = static_cast<Eigen::Index>(kTrendCols + 2 * omegas.size());
        Eigen::MatrixXd design(n, cols);
        Eigen::VectorXd rhs(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double w = inv_sigma[static_cast<size_t>(i)];
            const double l = lambda[static_cast<size_t>(i)];
            design(i, 0) = w;
            design(i, 1) = w / l;
            design(i, 2) = w / (l * l);
            for (size_t f = 0; f < omegas.size(); ++f) {
                const double arg = omegas[f] * l;
                design(i, static_cast<Eigen::Index>(kTrendCols + 2 * f)) = w * std::cos(arg);
                design(i, static_cast<Eigen::Index>(kTrendCols + 1 + 2 * f)) = w * std::sin(arg);
            }
            rhs(i) = w * value[static_cast<size_t>(i)];
        }
        const auto qr = design.colPivHouseholderQr();
        coef = qr.solve(rhs);
        chi2 = (design * coef - rhs).squaredNorm();
        if (cov) *cov = (design.transpose() * design).ldlt().solve(
                     Eigen::MatrixXd::Identity(cols, cols));
    }

    double chi2_at(const std::vector<double>& omegas) const {
        Eigen::VectorXd coef;
        double chi2 = 0.0;
        solve_linear(omegas, coef, chi2);
        return chi2;
    }
};

double golden_minimize(const std::function<double(double)>& f, double a, double b, int iters) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

// The chi^2 landscape against a frequency has sinc-like side lobes; a coarse
// scan locates the main lobe before the golden refinement.
double scan_then_golden(const std::function<double(double)>& f, double a, double b, int n_scan,
                        int iters) {
    double best_x = a, best_f = f(a);
    for (int i = 1; i <= n_scan; ++i) {
        const double x = a + (b - a) * i / n_scan;
        const double fx = f(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
        }
    }
    const double step = (b - a) / n_scan;
    return golden_minimize(f, std::max(a, best_x - step), std::min(b, best_x + step), iters);
}

struct PolarTerm {
    double amp = 0.0;
    double psi = 0.0; // model term: amp * cos(omega lambda + psi)
};

PolarTerm to_polar(double a_cos, double a_sin) {
    PolarTerm t;
    t.amp = std::hypot(a_cos, a_sin);
    t.psi = t.amp > 0.0 ? std::atan2(-a_sin, a_cos) : 0.0;
    return t;
}

} // namespace

WobbleFit fit_wobble(const signal::PolarizationSeries& residuals,
                     const WobbleFitOptions& options) {
    const size_t n = residuals.points.size();
    if (n < 16) throw fit_error("fit_wobble: need at least 16 residual points");

    CosineTermData data;
    data.lambda.resize(n);
    data.value.resize(n);
    data.inv_sigma.resize(n);
    for (size_t i = 0; i < n; ++i) {
        data.lambda[i] = residuals.points[i].lambda_ang;
        data.value[i] = residuals.points[i].value;
        data.inv_sigma[i] = 1.0 / std::sqrt(residuals.points[i].variance);
    }
    data.span = data.lambda.back() - data.lambda.front();
    const double step = data.span / static_cast<double>(n - 1);

    // Coarse periodogram over the oscillation (angular) frequency omega = 2 k.
    const double omega_lo = 2.0 * pi / data.span; // one cycle across the band
    const double omega_hi = 0.8 * pi / step;      // below Nyquist
    const int n_freq = options.oversampling * static_cast<int>(n);
    const double omega_bin = (omega_hi - omega_lo) / n_freq;

    double best_omega = omega_lo;
    double best_chi2 = std::numeric_limits<double>::infinity();
    for (int f = 0; f <= n_freq; ++f) {
        const double omega = omega_lo + f * omega_bin;
        const double chi2 = data.chi2_at({omega});
        if (chi2 < best_chi2) {
            best_chi2 = chi2;
            best_omega = omega;
        }
    }

    // The dominant line can be either oscillation; try it as 2k1 and as 2k2.
    double omega1 = best_omega;
    if (0.5 * best_omega > omega_lo &&
        data.chi2_at({0.5 * best_omega, best_omega}) < data.chi2_at({best_omega, 2.0 * best_omega}))
        omega1 = 0.5 * best_omega;

    // Bounded refinement of (omega1, omega2), omega2 constrained to the
    // configured multiple of omega1 and re-minimized inside the outer search.
    const double r_lo = options.k2_over_k1_min, r_hi = options.k2_over_k1_max;
    auto best_omega2 = [&](double w1) {
        return scan_then_golden([&](double w2) { return data.chi2_at({w1, w2}); }, r_lo * w1,
                                r_hi * w1, 48, 40);
    };
    auto nested_chi2 = [&](double w1) { return data.chi2_at({w1, best_omega2(w1)}); };
    omega1 = scan_then_golden(nested_chi2, std::max(omega_lo, omega1 - 2.0 * omega_bin),
                              omega1 + 2.0 * omega_bin, 16, 40);
    const double omega2 = best_omega2(omega1);

    Eigen::VectorXd coef;
    Eigen::MatrixXd lin_cov;
    double chi2 = 0.0;
    data.solve_linear({omega1, omega2}, coef, chi2, &lin_cov);
    const auto tc = CosineTermData::kTrendCols;
    const PolarTerm t1 = to_polar(coef(tc), coef(tc + 1));
    const PolarTerm t2 = to_polar(coef(tc + 2), coef(tc + 3));

    // Rayleigh-style amplitude significance from the linear covariance.
    const double proxy1 = std::sqrt(0.5 * (lin_cov(tc, tc) + lin_cov(tc + 1, tc + 1)));
    const double proxy2 = std::sqrt(0.5 * (lin_cov(tc + 2, tc + 2) + lin_cov(tc + 3, tc + 3)));

    WobbleFit fit;
    fit.dc_offset = coef(0);
    fit.chi2 = chi2;
    fit.k1_per_ang = 0.5 * omega1;
    fit.k2_per_ang = 0.5 * omega2;
    fit.significant = t1.amp >= 2.0 * proxy1;

    if (!fit.significant) {
        fit.amp1_err = proxy1;
        fit.amp2_err = proxy2;
        fit.k1_err = 0.25 * omega_bin;
        fit.k2_err = 0.5 * omega_bin;
        return fit;
    }

    fit.amp1_per_ang2 = t1.amp;
    fit.amp2_per_ang2 = t2.amp;
    fit.phi1_rad = 0.5 * t1.psi;
    fit.phi2_rad = 0.5 * t2.psi;

    // Reported errors from the Gauss-Newton covariance of the full model
    // (trend) + B1 cos(w1 l + psi1) + B2 cos(w2 l + psi2) in
    // (trend..., B1, psi1, w1, B2, psi2, w2).
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), tc + 6);
    for (size_t i = 0; i < n; ++i) {
        const double w = data.inv_sigma[i];
        const double l = data.lambda[i];
        const double arg1 = omega1 * l + t1.psi, arg2 = omega2 * l + t2.psi;
        const auto row = static_cast<Eigen::Index>(i);
        jac(row, 0) = w;
        jac(row, 1) = w / l;
        jac(row, 2) = w / (l * l);
        jac(row, tc + 0) = w * std::cos(arg1);
        jac(row, tc + 1) = -w * t1.amp * std::sin(arg1);
        jac(row, tc + 2) = -w * t1.amp * l * std::sin(arg1);
        jac(row, tc + 3) = w * std::cos(arg2);
        jac(row, tc + 4) = -w * t2.amp * std::sin(arg2);
        jac(row, tc + 5) = -w * t2.amp * l * std::sin(arg2);
    }
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::MatrixXd gn_cov =
        normal.ldlt().solve(Eigen::MatrixXd::Identity(tc + 6, tc + 6));
    const bool gn_ok = gn_cov.allFinite() && gn_cov(tc + 0, tc + 0) > 0.0 &&
                       gn_cov(tc + 3, tc + 3) > 0.0 && gn_cov(tc + 1, tc + 1) > 0.0 &&
                       gn_cov(tc + 4, tc + 4) > 0.0;
    if (gn_ok && t2.amp > 2.0 * proxy2) {
        fit.amp1_err = std::sqrt(gn_cov(tc + 0, tc + 0));
        fit.phi1_err = 0.5 * std::sqrt(gn_cov(tc + 1, tc + 1));
        fit.k1_err = 0.5 * std::sqrt(gn_cov(tc + 2, tc + 2));
        fit.amp2_err = std::sqrt(gn_cov(tc + 3, tc + 3));
        fit.phi2_err = 0.5 * std::sqrt(gn_cov(tc + 4, tc + 4));
        fit.k2_err = 0.5 * std::sqrt(gn_cov(tc + 5, tc + 5));
    } else {
        fit.amp1_err = proxy1;
        fit.amp2_err = proxy2;
        fit.k1_err = 0.25 * omega_bin;
        fit.k2_err = 0.5 * omega_bin;
    }

    const double ratio = fit.k2_per_ang / fit.k1_per_ang;
    if (ratio < options.accept_ratio_min || ratio > options.accept_ratio_max)
        throw fit_error("fit_wobble: frequency ratio " + std::to_string(ratio) +
                        " outside the acceptance band");
    return fit;
}

signal::PolarizationSeries subtract_wobble(const signal::PolarizationSeries& series,
                                           const WobbleFit& wobble) {
    signal::PolarizationSeries out = series;
    if (!wobble.significant) return out;
    for (auto& pt : out.points) {
        const double l2 = pt.lambda_ang * pt.lambda_ang;
        pt.value -= l2 * (wobble.amp1_per_ang2 *
                              std::cos(2.0 * wobble.k1_per_ang * pt.lambda_ang +
                                       2.0 * wobble.phi1_rad) +
                          wobble.amp2_per_ang2 *
                              std::cos(2.0 * wobble.k2_per_ang * pt.lambda_ang +
                                       2.0 * wobble.phi2_rad));
    }
    out.provenance = series.provenance + " (oscillation subtracted)";
    return out;
}

} // namespace seoam::analysis
