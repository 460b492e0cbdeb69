#include "seoam/series_io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace seoam::io {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void write_metadata(std::ostream& os, const Metadata& meta) {
    for (const auto& [key, value] : meta) os << "# " << key << "=" << value << "\n";
}

} // namespace

void write_polarization_csv(std::ostream& os, const signal::PolarizationSeries& series,
                            const Metadata& meta) {
    write_metadata(os, meta);
    os << "lambda_ang,value,variance,n_up,n_down,polarity\n";
    const std::string tag = signal::to_string(series.polarity);
    for (const auto& pt : series.points) {
        os << format_double(pt.lambda_ang) << ',' << format_double(pt.value) << ','
           << format_double(pt.variance) << ',' << pt.n_up << ',' << pt.n_down << ',' << tag
           << '\n';
    }
}

signal::PolarizationSeries read_polarization_csv(std::istream& is) {
    signal::PolarizationSeries series;
    series.provenance = "measured";
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "lambda_ang,value,variance,n_up,n_down,polarity")
                throw config_error("polarization CSV: bad or missing header row: '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != 6)
            throw config_error("polarization CSV: expected 6 columns, got " +
                               std::to_string(cells.size()));
        signal::PolarizationPoint pt;
        try {
            pt.lambda_ang = std::stod(cells[0]);
            pt.value = std::stod(cells[1]);
            pt.variance = std::stod(cells[2]);
            pt.n_up = cells[3].empty() ? 0 : std::stoll(cells[3]);
            pt.n_down = cells[4].empty() ? 0 : std::stoll(cells[4]);
        } catch (const std::exception&) {
            throw config_error("polarization CSV: unparseable row: '" + line + "'");
        }
        series.polarity = signal::polarity_from_string(cells[5]);
        series.points.push_back(pt);
    }
    if (!header_seen) throw config_error("polarization CSV: empty file");
    series.validate();
    return series;
}

void write_distribution_csv(std::ostream& os, const oam::OamDistribution& dist,
                            const Metadata& meta) {
    write_metadata(os, meta);
    os << "ell,probability\n";
    for (const auto& [ell, p] : dist.entries())
        os << ell << ',' << format_double(p) << '\n';
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
    return buf;
}

} // namespace seoam::io
