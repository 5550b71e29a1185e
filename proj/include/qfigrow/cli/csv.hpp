// csv.hpp - curve table container with the dominance invariant and
// byte-deterministic CSV emission.

#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfigrow {

inline constexpr const char* kCurveTableHeader =
    "t,qfi_sim,qfi_rate_sim,bound_optimized,bound_hls,bound_hnls,"
    "bound_prior_linear,bound_prior_quadratic";

struct CurveRow {
    double t = 0.0;
    std::optional<double> qfi_sim;
    std::optional<double> qfi_rate_sim;
    std::optional<double> bound_optimized;
    std::optional<double> bound_hls;
    std::optional<double> bound_hnls;
    std::optional<double> bound_prior_linear;
    std::optional<double> bound_prior_quadratic;
};

struct DominanceViolation {
    std::size_t row = 0;
    std::string column;
    double bound_value = 0.0;
    double qfi_value = 0.0;
};

struct CurveTable {
    std::vector<CurveRow> rows;

    // Bound columns must dominate the simulated QFI wherever both are present.
    std::optional<DominanceViolation> check_dominance(double slack = 1e-6) const {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const CurveRow& r = rows[i];
            if (i > 0 && !(rows[i].t > rows[i - 1].t))
                throw std::invalid_argument("CurveTable: t not strictly increasing at row " +
                                            std::to_string(i));
            if (!r.qfi_sim) continue;
            const double f = *r.qfi_sim;
            const std::pair<const char*, const std::optional<double>*> bounds[] = {
                {"bound_optimized", &r.bound_optimized},
                {"bound_hls", &r.bound_hls},
                {"bound_hnls", &r.bound_hnls},
                {"bound_prior_linear", &r.bound_prior_linear},
                {"bound_prior_quadratic", &r.bound_prior_quadratic},
            };
            for (const auto& [name, cell] : bounds) {
                if (*cell && **cell < f - slack)
                    return DominanceViolation{i, name, **cell, f};
            }
        }
        return std::nullopt;
    }
};

namespace detail {

// Shortest round-trip-exact decimal form, locale-independent.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void append_cell(std::string& line, const std::optional<double>& v) {
    line += ',';
    if (v) line += format_double(*v);
}

}  // namespace detail

inline std::string render_csv(const CurveTable& table) {
    std::string out = kCurveTableHeader;
    out += '\n';
    for (const CurveRow& r : table.rows) {
        std::string line = detail::format_double(r.t);
        detail::append_cell(line, r.qfi_sim);
        detail::append_cell(line, r.qfi_rate_sim);
        detail::append_cell(line, r.bound_optimized);
        detail::append_cell(line, r.bound_hls);
        detail::append_cell(line, r.bound_hnls);
        detail::append_cell(line, r.bound_prior_linear);
        detail::append_cell(line, r.bound_prior_quadratic);
        out += line;
        out += '\n';
    }
    return out;
}

// Writes the table after verifying the dominance invariant; a violation is a
// build-breaking event and must never reach disk.
inline void write_csv(const CurveTable& table, const std::string& path, double slack = 1e-6) {
    if (auto v = table.check_dominance(slack)) {
        throw std::runtime_error("dominance violation in '" + path + "' row " +
                                 std::to_string(v->row) + ": " + v->column + " = " +
                                 detail::format_double(v->bound_value) + " < qfi_sim = " +
                                 detail::format_double(v->qfi_value));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << render_csv(table);
}

}  // namespace qfigrow
