#pragma once

#include "seoam/polarization.hpp"
#include "seoam/wavepacket.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace seoam::io {

/// Provenance lines written as "# key=value" before the CSV header.
using Metadata = std::map<std::string, std::string>;

/// Columns: lambda_ang,value,variance,n_up,n_down,polarity (header mandatory,
/// UTF-8, '.' decimal separator).
void write_polarization_csv(std::ostream& os, const signal::PolarizationSeries& series,
                            const Metadata& meta = {});
signal::PolarizationSeries read_polarization_csv(std::istream& is);

/// Columns: ell,probability.
void write_distribution_csv(std::ostream& os, const oam::OamDistribution& dist,
                            const Metadata& meta = {});

/// FNV-1a 64-bit hash, used to fingerprint configurations in provenance.
std::string fnv1a_hex(const std::string& text);

} // namespace seoam::io
