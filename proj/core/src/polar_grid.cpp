#include "seoam/polar_grid.hpp"
#include "seoam/constants.hpp"
#include "seoam/oam_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace seoam::oam {

namespace {

using constants::pi;

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
void legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<size_t>(n), 0.0);
    weights.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<size_t>(i)] = -x;
        nodes[static_cast<size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[static_cast<size_t>(i)] = w;
        weights[static_cast<size_t>(n - 1 - i)] = w;
    }
}

struct CartesianDerivatives {
    std::complex<double> f, fx, fy, fxx, fyy, fxy;
};

// Fourth-order central stencils on the analytic generator.
CartesianDerivatives derivatives(const FieldFunction& g, double x, double y, double h) {
    auto fx_at = [&](double yy) { // 4th-order d/dx at (x, yy)
        return (-g(x + 2 * h, yy) + 8.0 * g(x + h, yy) - 8.0 * g(x - h, yy) + g(x - 2 * h, yy)) /
               (12.0 * h);
    };
    CartesianDerivatives d;
    const std::complex<double> xp1 = g(x + h, y), xm1 = g(x - h, y);
    const std::complex<double> xp2 = g(x + 2 * h, y), xm2 = g(x - 2 * h, y);
    const std::complex<double> yp1 = g(x, y + h), ym1 = g(x, y - h);
    const std::complex<double> yp2 = g(x, y + 2 * h), ym2 = g(x, y - 2 * h);
    d.f = g(x, y);
    d.fx = (-xp2 + 8.0 * xp1 - 8.0 * xm1 + xm2) / (12.0 * h);
    d.fy = (-yp2 + 8.0 * yp1 - 8.0 * ym1 + ym2) / (12.0 * h);
    d.fxx = (-xp2 + 16.0 * xp1 - 30.0 * d.f + 16.0 * xm1 - xm2) / (12.0 * h * h);
    d.fyy = (-yp2 + 16.0 * yp1 - 30.0 * d.f + 16.0 * ym1 - ym2) / (12.0 * h * h);
    d.fxy = (-fx_at(y + 2 * h) + 8.0 * fx_at(y + h) - 8.0 * fx_at(y - h) + fx_at(y - 2 * h)) /
            (12.0 * h);
    return d;
}

// Lazily computed per-mode masses with window growth around the dominant mode.
class ModeMassTable {
public:
    explicit ModeMassTable(const PolarGridField& field)
        : field_(field), limit_(field.n_azimuthal() / 2 - 1) {}

    double mass(int ell) {
        auto it = cache_.find(ell);
        if (it != cache_.end()) return it->second;
        const double m = field_.mode_mass(ell);
        cache_.emplace(ell, m);
        return m;
    }

    int limit() const { return limit_; }

    // Coarse probe to locate the dominant mode.
    int locate_peak(int stride) {
        int best = 0;
        double best_mass = -1.0;
        for (int ell = -limit_; ell <= limit_; ell += stride) {
            const double m = mass(ell);
            if (m > best_mass) {
                best_mass = m;
                best = ell;
            }
        }
        for (int ell = std::max(-limit_, best - stride); ell <= std::min(limit_, best + stride);
             ++ell) {
            const double m = mass(ell);
            if (m > best_mass) {
                best_mass = m;
                best = ell;
            }
        }
        return best;
    }

private:
    const PolarGridField& field_;
    int limit_;
    std::map<int, double> cache_;
};

} // namespace

PolarGridField PolarGridField::from_function(const FieldFunction& f, const PolarGridSpec& spec) {
    if (!(spec.radius > 0.0)) throw config_error("PolarGridField: radius must be > 0");
    if (spec.n_radial < 8) throw config_error("PolarGridField: n_radial too small");
    if (spec.n_azimuthal < 8 || spec.n_azimuthal % 2 != 0)
        throw config_error("PolarGridField: n_azimuthal must be even and >= 8");

    PolarGridField out;
    out.radius_ = spec.radius;
    out.n_radial_ = spec.n_radial;
    out.n_azimuthal_ = spec.n_azimuthal;
    out.generator_ = f;

    std::vector<double> gl_nodes, gl_weights;
    legendre_rule(spec.n_radial, gl_nodes, gl_weights);
    out.r_.resize(static_cast<size_t>(spec.n_radial));
    out.w_.resize(static_cast<size_t>(spec.n_radial));
    for (int i = 0; i < spec.n_radial; ++i) {
        out.r_[static_cast<size_t>(i)] = 0.5 * spec.radius * (gl_nodes[static_cast<size_t>(i)] + 1.0);
        out.w_[static_cast<size_t>(i)] = 0.5 * spec.radius * gl_weights[static_cast<size_t>(i)];
    }

    out.samples_.resize(static_cast<size_t>(spec.n_radial) * spec.n_azimuthal);
    double max_mag = 0.0;
    for (int i = 0; i < spec.n_radial; ++i) {
        const double r = out.r_[static_cast<size_t>(i)];
        for (int j = 0; j < spec.n_azimuthal; ++j) {
            const double phi = 2.0 * pi * j / spec.n_azimuthal;
            const auto v = f(r * std::cos(phi), r * std::sin(phi));
            out.samples_[static_cast<size_t>(i) * spec.n_azimuthal + j] = v;
            max_mag = std::max(max_mag, std::abs(v));
        }
    }
    if (max_mag == 0.0) throw grid_extent_error("PolarGridField: field is identically zero");

    double boundary_mag = 0.0;
    for (int j = 0; j < spec.n_azimuthal; ++j) {
        const double phi = 2.0 * pi * j / spec.n_azimuthal;
        boundary_mag = std::max(boundary_mag,
                                std::abs(f(spec.radius * std::cos(phi), spec.radius * std::sin(phi))));
    }
    if (boundary_mag >= 1e-8 * max_mag)
        throw grid_extent_error("PolarGridField: |f| at r = R is " + std::to_string(boundary_mag) +
                                ", exceeds 1e-8 * max |f|; enlarge the radius");
    return out;
}

PolarGridField PolarGridField::from_wavepacket(const WavePacket& wp, PolarGridSpec spec) {
    wp.validate();
    if (spec.radius <= 0.0) spec.radius = std::abs(wp.offset) + 8.0 * wp.coherence_length;

    const double s2 = wp.coherence_length * wp.coherence_length;
    FieldFunction f;
    if (wp.kind == PacketKind::single_offset) {
        f = [wp, s2](double x, double y) {
            const double dx = x - wp.offset;
            const double mag = wp.amplitude * std::exp(-(dx * dx + y * y) / s2);
            return std::polar(mag, wp.transverse_momentum * y);
        };
    } else {
        f = [wp, s2](double x, double y) {
            const double dp = x + wp.offset, dm = x - wp.offset;
            const std::complex<double> lobe_plus =
                std::polar(std::exp(-(dp * dp + y * y) / s2), 0.5 * wp.relative_phase);
            const std::complex<double> lobe_minus =
                std::polar(std::exp(-(dm * dm + y * y) / s2), -0.5 * wp.relative_phase);
            return wp.amplitude / std::sqrt(2.0) * (lobe_plus + lobe_minus);
        };
    }
    return from_function(f, spec);
}

PolarGridField PolarGridField::from_superposition(
    const std::vector<std::pair<int, std::complex<double>>>& modes,
    const std::function<double(double)>& radial_profile, PolarGridSpec spec) {
    if (modes.empty()) throw config_error("from_superposition: empty mode list");
    if (spec.radius <= 0.0) throw config_error("from_superposition: radius must be set");
    FieldFunction f = [modes, radial_profile](double x, double y) {
        const double r = std::hypot(x, y);
        const double phi = std::atan2(y, x);
        std::complex<double> acc = 0.0;
        for (const auto& [ell, w] : modes) acc += w * std::polar(1.0, ell * phi);
        return acc * radial_profile(r);
    };
    return from_function(f, spec);
}

PolarGridField PolarGridField::translated(double x0, double y0) const {
    if (!generator_)
        throw config_error("PolarGridField::translated requires a generator-backed field");
    const FieldFunction g = generator_;
    PolarGridSpec spec;
    spec.radius = radius_ + std::hypot(x0, y0);
    spec.n_radial = n_radial_;
    spec.n_azimuthal = n_azimuthal_;
    return from_function([g, x0, y0](double x, double y) { return g(x - x0, y - y0); }, spec);
}

std::vector<std::complex<double>> PolarGridField::mode_radial(int ell) const {
    std::vector<std::complex<double>> out(static_cast<size_t>(n_radial_));
    const int n = n_azimuthal_;
    // Unit roots e^{-2 pi i k / n}; mode ell picks index (ell * j) mod n.
    std::vector<std::complex<double>> roots(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) roots[static_cast<size_t>(k)] = std::polar(1.0, -2.0 * pi * k / n);
    const long long step = ((static_cast<long long>(ell) % n) + n) % n;
    for (int i = 0; i < n_radial_; ++i) {
        std::complex<double> acc = 0.0;
        long long idx = 0;
        const std::complex<double>* row = &samples_[static_cast<size_t>(i) * n];
        for (int j = 0; j < n; ++j) {
            acc += row[j] * roots[static_cast<size_t>(idx)];
            idx += step;
            if (idx >= n) idx -= n;
        }
        out[static_cast<size_t>(i)] = acc / static_cast<double>(n);
    }
    return out;
}

double PolarGridField::mode_mass(int ell) const {
    const auto f_ell = mode_radial(ell);
    double acc = 0.0;
    for (int i = 0; i < n_radial_; ++i)
        acc += w_[static_cast<size_t>(i)] * r_[static_cast<size_t>(i)] *
               std::norm(f_ell[static_cast<size_t>(i)]);
    return acc;
}

double PolarGridField::total_mass() const {
    double acc = 0.0;
    for (int i = 0; i < n_radial_; ++i) {
        double row = 0.0;
        for (int j = 0; j < n_azimuthal_; ++j)
            row += std::norm(samples_[static_cast<size_t>(i) * n_azimuthal_ + j]);
        acc += w_[static_cast<size_t>(i)] * r_[static_cast<size_t>(i)] * row / n_azimuthal_;
    }
    return acc;
}

OamDistribution numeric_oam_spectrum(const PolarGridField& field,
                                     std::optional<ModeWindow> window,
                                     double captured_mass_threshold) {
    const double total = field.total_mass();
    if (total <= 0.0) throw grid_extent_error("numeric_oam_spectrum: zero total mass");
    ModeMassTable table(field);

    if (window) {
        std::vector<double> masses(static_cast<size_t>(window->size()));
        for (int ell = window->lo; ell <= window->hi; ++ell)
            masses[static_cast<size_t>(ell - window->lo)] = table.mass(ell);
        OamDistribution dist(*window, std::move(masses), total);
        if (dist.captured_mass() < captured_mass_threshold)
            throw truncation_error("numeric spectrum window captures " +
                                       std::to_string(dist.captured_mass()),
                                   window->lo - window->size() / 2,
                                   window->hi + window->size() / 2);
        return dist;
    }

    const int limit = table.limit();
    const int stride = std::max(1, 2 * limit / 128);
    int lo = table.locate_peak(stride);
    int hi = lo;
    double captured = table.mass(lo);
    while (captured < captured_mass_threshold * total) {
        const bool can_left = lo > -limit, can_right = hi < limit;
        if (!can_left && !can_right)
            throw grid_extent_error(
                "numeric_oam_spectrum: grid cannot resolve the requested mass fraction");
        const double left = can_left ? table.mass(lo - 1) : -1.0;
        const double right = can_right ? table.mass(hi + 1) : -1.0;
        if (can_left && left >= right) {
            captured += left;
            --lo;
        }
        if (can_right && right >= left) {
            captured += right;
            ++hi;
        }
    }
    ModeWindow win{lo, hi};
    std::vector<double> masses(static_cast<size_t>(win.size()));
    for (int ell = lo; ell <= hi; ++ell)
        masses[static_cast<size_t>(ell - lo)] = table.mass(ell);
    return OamDistribution(win, std::move(masses), total);
}

std::pair<double, double> transverse_momentum_expectation(
    const std::vector<std::pair<int, std::complex<double>>>& modes,
    const std::function<double(double)>& radial_profile, PolarGridSpec spec) {
    if (spec.radius <= 0.0) throw config_error("transverse_momentum_expectation: radius must be set");
    const PolarGridField field = PolarGridField::from_superposition(modes, radial_profile, spec);
    const FieldFunction& g = field.generator();
    const double h = 5e-4 * spec.radius;

    double norm = 0.0, kx = 0.0, ky = 0.0;
    const auto& r = field.radial_nodes();
    const auto& w = field.radial_weights();
    for (int i = 0; i < field.n_radial(); ++i) {
        for (int j = 0; j < field.n_azimuthal(); ++j) {
            const double phi = 2.0 * pi * j / field.n_azimuthal();
            const double x = r[static_cast<size_t>(i)] * std::cos(phi);
            const double y = r[static_cast<size_t>(i)] * std::sin(phi);
            const std::complex<double> f = field.sample(i, j);
            const std::complex<double> fx =
                (-g(x + 2 * h, y) + 8.0 * g(x + h, y) - 8.0 * g(x - h, y) + g(x - 2 * h, y)) /
                (12.0 * h);
            const std::complex<double> fy =
                (-g(x, y + 2 * h) + 8.0 * g(x, y + h) - 8.0 * g(x, y - h) + g(x, y - 2 * h)) /
                (12.0 * h);
            const double cell = w[static_cast<size_t>(i)] * r[static_cast<size_t>(i)];
            norm += cell * std::norm(f);
            // <k> = Im(f* grad f) integrated
            kx += cell * std::imag(std::conj(f) * fx);
            ky += cell * std::imag(std::conj(f) * fy);
        }
    }
    if (norm <= 0.0) throw grid_extent_error("transverse_momentum_expectation: zero norm");
    return {kx / norm, ky / norm};
}

namespace {

// sum_ell ell^n p[ell] of a grid field, expanded until the weighted tails stall.
double grid_moment(const PolarGridField& field, int n) {
    ModeMassTable table(field);
    const int limit = table.limit();
    const int stride = std::max(1, 2 * limit / 128);
    int lo = table.locate_peak(stride);
    int hi = lo;
    const double total = field.total_mass();
    double captured = table.mass(lo);
    double weighted = std::pow(lo, n) * table.mass(lo);
    auto done = [&](double left, double right) {
        const double scale = std::max(std::abs(weighted), total);
        const double edge = std::max(left * std::pow(std::abs(lo) + 1.0, n),
                                     right * std::pow(std::abs(hi) + 1.0, n));
        return captured >= (1.0 - 1e-11) * total && edge < 1e-13 * scale;
    };
    while (true) {
        const double left = lo > -limit ? table.mass(lo - 1) : 0.0;
        const double right = hi < limit ? table.mass(hi + 1) : 0.0;
        if (done(left, right)) break;
        bool extended = false;
        if (lo > -limit) {
            --lo;
            captured += left;
            weighted += std::pow(lo, n) * left;
            extended = true;
        }
        if (hi < limit) {
            ++hi;
            captured += right;
            weighted += std::pow(hi, n) * right;
            extended = true;
        }
        if (!extended)
            throw grid_extent_error("grid moment did not converge within resolvable modes");
    }
    return weighted / total;
}

} // namespace

double first_moment_translation_delta(const PolarGridField& field, double x0, double y0) {
    if (x0 == 0.0 && y0 == 0.0) return 0.0;
    return grid_moment(field.translated(x0, y0), 1) - grid_moment(field, 1);
}

double second_moment_translation_delta(const PolarGridField& field, double x0, double y0,
                                       double rel_tol) {
    if (x0 == 0.0 && y0 == 0.0) return 0.0;
    const double reference = grid_moment(field, 2);

    // Route 1: spectral second moment of the displaced field.
    const double spectral = grid_moment(field.translated(x0, y0), 2) - reference;

    // Route 2: quadrature of the conjugated difference operator
    //   -[(2 x x0 + x0^2) dyy + (2 y y0 + y0^2) dxx
    //     - 2 (x y0 + y x0 + x0 y0) dxy - x0 dx - y0 dy]
    // against the original field on a Cartesian Gauss-Legendre grid.
    const FieldFunction& g = field.generator();
    const double R = field.radius();
    const int n1d = 220;
    std::vector<double> nodes, weights;
    legendre_rule(n1d, nodes, weights);
    const double h = 5e-4 * R;

    double norm = 0.0, expect = 0.0;
    for (int ix = 0; ix < n1d; ++ix) {
        const double x = R * nodes[static_cast<size_t>(ix)];
        const double wx = R * weights[static_cast<size_t>(ix)];
        for (int iy = 0; iy < n1d; ++iy) {
            const double y = R * nodes[static_cast<size_t>(iy)];
            const double wy = R * weights[static_cast<size_t>(iy)];
            const auto d = derivatives(g, x, y, h);
            const std::complex<double> op =
                -((2.0 * x * x0 + x0 * x0) * d.fyy + (2.0 * y * y0 + y0 * y0) * d.fxx -
                  2.0 * (x * y0 + y * x0 + x0 * y0) * d.fxy - x0 * d.fx - y0 * d.fy);
            norm += wx * wy * std::norm(d.f);
            expect += wx * wy * std::real(std::conj(d.f) * op);
        }
    }
    if (norm <= 0.0) throw grid_extent_error("second moment route 2: zero norm");
    const double direct = expect / norm;

    const double denom = std::max(std::abs(spectral), std::abs(direct));
    if (denom > 1e-9 * std::max(1.0, reference) &&
        std::abs(spectral - direct) > rel_tol * denom) {
        throw consistency_error("second moment translation routes disagree: spectral " +
                                std::to_string(spectral) + " vs direct " + std::to_string(direct));
    }
    return spectral;
}

} // namespace seoam::oam
