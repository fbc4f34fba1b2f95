#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fspca/error.hpp"
#include "fspca/matrix.hpp"

namespace fspca {

/// %.17g rendering: enough digits for a lossless double round-trip.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline bool parse_cell(const std::string& cell, double& out) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

inline std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace detail

/// Numeric CSV -> row-major matrix.  A single non-numeric first row is
/// treated as a header and skipped.  Ragged rows and non-numeric cells raise
/// parse_error naming the offending row/column (0-based, header excluded).
inline Eigen::MatrixXd load_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_checked = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = detail::split_row(line);
        std::vector<double> row(cells.size());
        bool numeric = true;
        std::size_t bad_col = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!detail::parse_cell(cells[c], row[c])) {
                numeric = false;
                bad_col = c;
                break;
            }
        }
        if (!numeric) {
            if (!header_checked && rows.empty()) {
                header_checked = true;  // single leading header row allowed
                continue;
            }
            throw parse_error(path + ": non-numeric cell at row " + std::to_string(rows.size()) +
                              ", column " + std::to_string(bad_col));
        }
        header_checked = true;
        if (!rows.empty() && row.size() != rows.front().size())
            throw parse_error(path + ": row " + std::to_string(rows.size()) + " has " +
                              std::to_string(row.size()) + " cells, expected " +
                              std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw parse_error(path + ": no numeric rows");

    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return out;
}

/// Load a CSV declared to hold a covariance; squareness and symmetry are
/// validated (the SymMat constructor names the first asymmetric cell).
inline SymMat load_covariance_csv(const std::string& path) {
    Eigen::MatrixXd raw = load_matrix_csv(path);
    if (raw.rows() != raw.cols())
        throw parse_error(path + ": covariance must be square, got " +
                          std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()));
    try {
        return SymMat(std::move(raw));
    } catch (const input_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

inline void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot write '" + path + "'");
    write_matrix_csv(out, m);
}

}  // namespace fspca
