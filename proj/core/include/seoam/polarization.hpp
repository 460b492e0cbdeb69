#pragma once

#include "seoam/instrument.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace seoam::signal {

enum class Polarity { plus, minus, off };

std::string to_string(Polarity p);
Polarity polarity_from_string(const std::string& s);
double polarity_sign(Polarity p); ///< +1, -1; throws for off

/// One cos^2 precession-plane oscillation term.
struct WobbleTerm {
    double amplitude_per_ang2 = 0.0; ///< |A_i| >= 0
    double frequency_per_ang = 0.0;  ///< k_i
    double phase_rad = 0.0;          ///< phi_i
};

/// Parameters of the measured normalized polarization
///   ratio(lambda) = eps + a1 lambda + a2 lambda^2
///                   + s * 2 lambda^2 sum_i |A_i| cos^2(k_i lambda + phi_i)
/// with s the pi/2-rotator polarity sign.
struct PolarizationModelParams {
    double p0 = 0.75; ///< overall polarization scale, in (0, 1]
    double epsilon = 0.0;
    double a1_per_ang = 0.0;
    double a2_per_ang2 = 0.0;
    std::vector<WobbleTerm> wobble;
    Polarity polarity = Polarity::plus;

    void validate() const;
};

struct PolarizationPoint {
    double lambda_ang = 0.0;
    double value = 0.0;
    double variance = 0.0;
    std::int64_t n_up = 0;
    std::int64_t n_down = 0;
};

/// Normalized polarization samples against wavelength.
struct PolarizationSeries {
    std::vector<PolarizationPoint> points;
    Polarity polarity = Polarity::off;
    std::string provenance; ///< "measured", "model", or "synthetic seed=N"
    std::vector<std::string> warnings;

    void validate() const;
    std::vector<double> lambdas() const;
};

struct ModelOutputs {
    double p_x = 0.0;
    double p_y = 0.0;
    double ratio = 0.0; ///< P_y / P_x linearization (NaN-free by construction)
};

/// Forward polarization model at one wavelength. With polarity off only the
/// P_x channel is meaningful (this is the spin-echo correlation signal).
ModelOutputs polarization_model(const PolarizationModelParams& params, double lambda_ang);

struct SimulationOptions {
    int n_bins = 200;
    std::int64_t n_pulses = 100000; ///< counts per wavelength bin
    std::uint64_t seed = 1;
    bool noiseless = false; ///< infinite-count limit: exact model values
};

/// Two-channel (spin up/down) counting simulation over the configured
/// wavelength band. Deterministic for a fixed seed; independent bins draw
/// from decorrelated substreams.
PolarizationSeries simulate_dataset(const PolarizationModelParams& params,
                                    const instr::InstrumentConfig& cfg,
                                    const SimulationOptions& opts);

/// Binary transmission grating at the sample position.
struct GratingSpec {
    double period_um = 2.0;
    double duty = 0.5;
    void validate() const;
};

/// Normalized spin-echo polarization of the grating: the circular
/// autocorrelation of its transmission profile at displacement
/// delta_SE(lambda). Peaks sit at delta_SE = n * period.
PolarizationSeries grating_correlation(const GratingSpec& grating,
                                       const instr::InstrumentConfig& cfg, int n_bins = 200);

/// Closed-form circular autocorrelation of the binary profile at a
/// displacement measured in periods (u = delta / period).
double grating_autocorrelation(const GratingSpec& grating, double displacement_periods);

} // namespace seoam::signal
