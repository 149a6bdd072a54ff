#pragma once

// Ingestion, validation, train/test splitting and min-max normalization of
// (flow, gate opening) -> air velocity records.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "airdemand/detail/rng.hpp"

namespace airdemand {

// One record: gate flow conditions and the measured air velocity.
struct Sample {
    double flow = 0.0;          // water volume rate, m^3/s, > 0
    double opening = 0.0;       // gate opening, percent, (0, 100]
    double air_velocity = 0.0;  // air velocity, m/s, >= 0
    bool operator==(const Sample&) const = default;
};

// Throws std::invalid_argument naming the violated bound.
inline void validate_sample(const Sample& s) {
    using detail::format_double;
    if (!std::isfinite(s.flow) || !std::isfinite(s.opening) || !std::isfinite(s.air_velocity))
        throw std::invalid_argument("sample field is not finite");
    if (!(s.flow > 0.0))
        throw std::invalid_argument("flow must be > 0, got " + format_double(s.flow));
    if (!(s.opening > 0.0 && s.opening <= 100.0))
        throw std::invalid_argument("opening must be in (0, 100], got " + format_double(s.opening));
    if (!(s.air_velocity >= 0.0))
        throw std::invalid_argument("air_velocity must be >= 0, got " + format_double(s.air_velocity));
}

struct Dataset {
    std::vector<Sample> samples;
    std::string source_tag;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

struct SplitDataset {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
    double train_fraction = 0.0;
};

inline constexpr std::string_view kCsvHeader = "flow_m3s,opening_pct,air_velocity_ms";
inline constexpr std::string_view kCsvColumns[3] = {"flow_m3s", "opening_pct", "air_velocity_ms"};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view cell = line.substr(start, comma == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : comma - start);
        // trim surrounding whitespace
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
        cells.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

inline bool parse_double(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !text.empty();
}

inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

// Reads a CSV with header `flow_m3s,opening_pct,air_velocity_ms` (any column
// order, LF or CRLF). Every row is validated; errors name the offending line.
inline Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path.string());

    const std::string where = path.filename().string();
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(where + ": empty file");
    detail::strip_cr(line);

    const auto header = detail::split_csv_line(line);
    std::size_t col_index[3];
    if (header.size() != 3) {
        throw std::runtime_error(where + ": header must name exactly the columns " +
                                 std::string(kCsvHeader));
    }
    for (std::size_t c = 0; c < 3; ++c) {
        const auto it = std::find(header.begin(), header.end(), std::string(kCsvColumns[c]));
        if (it == header.end()) {
            throw std::runtime_error(where + ": missing or renamed column '" +
                                     std::string(kCsvColumns[c]) + "'");
        }
        col_index[c] = static_cast<std::size_t>(it - header.begin());
    }

    Dataset d;
    d.source_tag = where;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        detail::strip_cr(line);
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() != 3) {
            throw std::runtime_error(where + ":" + std::to_string(line_no) +
                                     ": expected 3 cells, got " + std::to_string(cells.size()));
        }
        double values[3];
        for (std::size_t c = 0; c < 3; ++c) {
            if (!detail::parse_double(cells[col_index[c]], values[c])) {
                throw std::runtime_error(where + ":" + std::to_string(line_no) +
                                         ": non-numeric value '" + cells[col_index[c]] +
                                         "' in column " + std::string(kCsvColumns[c]));
            }
        }
        const Sample s{values[0], values[1], values[2]};
        try {
            validate_sample(s);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(where + ":" + std::to_string(line_no) + ": " + e.what());
        }
        d.samples.push_back(s);
    }
    if (d.samples.empty()) throw std::runtime_error(where + ": no data rows");
    return d;
}

// Writes the canonical column order with LF line endings. Values use the
// shortest decimal form that round-trips, so save/load is lossless.
inline void save_csv(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path.string());
    out << kCsvHeader << '\n';
    for (const Sample& s : d.samples) {
        out << detail::format_double(s.flow) << ',' << detail::format_double(s.opening) << ','
            << detail::format_double(s.air_velocity) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Seeded uniform permutation, then a prefix/suffix cut with
// |train| = round(train_fraction * n), half-up.
inline SplitDataset split(const Dataset& d, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must be in (0, 1), got " +
                                    detail::format_double(train_fraction));
    const std::size_t n = d.samples.size();
    const auto n_train =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));
    if (n_train == 0 || n_train >= n)
        throw std::invalid_argument("dataset of " + std::to_string(n) +
                                    " samples cannot give non-empty train and test partitions at "
                                    "fraction " + detail::format_double(train_fraction));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    detail::Rng rng(seed);
    rng.shuffle(order);

    SplitDataset out;
    out.seed = seed;
    out.train_fraction = train_fraction;
    out.train.source_tag = d.source_tag + ":train";
    out.test.source_tag = d.source_tag + ":test";
    out.train.samples.reserve(n_train);
    out.test.samples.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i) {
        (i < n_train ? out.train : out.test).samples.push_back(d.samples[order[i]]);
    }
    return out;
}

// Per-column min-max scaling to [0, 1]. Fit on the training partition only;
// applying to values outside the fitted range extrapolates without error.
class Normalizer {
public:
    struct Range {
        double min = 0.0;
        double max = 0.0;
        bool operator==(const Range&) const = default;
    };

    Normalizer() = default;

    static Normalizer fit(const Dataset& d) {
        if (d.samples.empty())
            throw std::invalid_argument("cannot fit normalizer on an empty dataset");
        Normalizer n;
        n.flow_ = column_range(d, &Sample::flow, "flow");
        n.opening_ = column_range(d, &Sample::opening, "opening");
        n.air_velocity_ = column_range(d, &Sample::air_velocity, "air_velocity");
        n.fitted_ = true;
        return n;
    }

    static Normalizer from_ranges(Range flow, Range opening, Range air_velocity) {
        for (const Range& r : {flow, opening, air_velocity}) {
            if (!(r.max > r.min))
                throw std::invalid_argument("normalizer range must have max > min");
        }
        Normalizer n;
        n.flow_ = flow;
        n.opening_ = opening;
        n.air_velocity_ = air_velocity;
        n.fitted_ = true;
        return n;
    }

    bool fitted() const { return fitted_; }

    double normalize_flow(double x) const { return fwd(flow_, x); }
    double normalize_opening(double x) const { return fwd(opening_, x); }
    double normalize_air_velocity(double x) const { return fwd(air_velocity_, x); }
    double denormalize_flow(double x) const { return bwd(flow_, x); }
    double denormalize_opening(double x) const { return bwd(opening_, x); }
    double denormalize_air_velocity(double x) const { return bwd(air_velocity_, x); }

    Dataset apply(const Dataset& d) const {
        require_fitted();
        Dataset out;
        out.source_tag = d.source_tag;
        out.samples.reserve(d.samples.size());
        for (const Sample& s : d.samples) {
            out.samples.push_back(
                {fwd(flow_, s.flow), fwd(opening_, s.opening), fwd(air_velocity_, s.air_velocity)});
        }
        return out;
    }

    Dataset invert(const Dataset& d) const {
        require_fitted();
        Dataset out;
        out.source_tag = d.source_tag;
        out.samples.reserve(d.samples.size());
        for (const Sample& s : d.samples) {
            out.samples.push_back(
                {bwd(flow_, s.flow), bwd(opening_, s.opening), bwd(air_velocity_, s.air_velocity)});
        }
        return out;
    }

    const Range& flow_range() const { return flow_; }
    const Range& opening_range() const { return opening_; }
    const Range& air_velocity_range() const { return air_velocity_; }

private:
    void require_fitted() const {
        if (!fitted_) throw std::logic_error("normalizer used before fitting");
    }

    double fwd(const Range& r, double x) const {
        require_fitted();
        return (x - r.min) / (r.max - r.min);
    }
    double bwd(const Range& r, double x) const {
        require_fitted();
        return r.min + x * (r.max - r.min);
    }

    static Range column_range(const Dataset& d, double Sample::*field, const char* name) {
        Range r{d.samples.front().*field, d.samples.front().*field};
        for (const Sample& s : d.samples) {
            r.min = std::min(r.min, s.*field);
            r.max = std::max(r.max, s.*field);
        }
        if (!(r.max > r.min))
            throw std::invalid_argument(std::string("constant column '") + name +
                                        "': zero range, cannot normalize");
        return r;
    }

    bool fitted_ = false;
    Range flow_{};
    Range opening_{};
    Range air_velocity_{};
};

inline Normalizer fit_normalizer(const Dataset& d) { return Normalizer::fit(d); }
inline Dataset apply(const Normalizer& n, const Dataset& d) { return n.apply(d); }
inline Dataset invert(const Normalizer& n, const Dataset& d) { return n.invert(d); }

}  // namespace airdemand
