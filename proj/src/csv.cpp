#include "rsgslm/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace rsgslm {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open for reading: " + path);
    return in;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_cell(const std::string& s, const std::string& path) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0') || errno == ERANGE)
        throw DataError("non-numeric cell '" + s + "' in " + path);
    return v;
}

}  // namespace

void save_matrix(const std::string& path, const Mat& m) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

Mat load_matrix(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_cells(line);
        std::vector<double> row;
        row.reserve(cells.size());
        for (auto& c : cells) row.push_back(parse_cell(c, path));
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw DataError("ragged row in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("empty matrix file: " + path);
    Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

void save_vector(const std::string& path, const Vec& v) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

Vec load_vector(const std::string& path) {
    Mat m = load_matrix(path);
    if (m.cols() != 1) throw DataError("expected a single column in " + path);
    return m.col(0);
}

void save_table(const std::string& path, const Table& t) {
    auto out = open_out(path);
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        if (j) out << ',';
        out << t.columns[j];
    }
    out << '\n';
    for (auto& row : t.rows) {
        if (row.size() != t.columns.size()) throw DataError("table row width mismatch writing " + path);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            out << row[j];
        }
        out << '\n';
    }
}

Table load_table(const std::string& path) {
    auto in = open_in(path);
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty table file: " + path);
    t.columns = split_cells(line);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_cells(line);
        if (cells.size() != t.columns.size()) throw DataError("ragged table row in " + path);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

std::vector<int> load_int_column(const std::string& path) {
    Vec v = load_vector(path);
    std::vector<int> out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double d = v(i);
        int k = static_cast<int>(d);
        if (static_cast<double>(k) != d)
            throw DataError("expected integer value in " + path);
        out[static_cast<std::size_t>(i)] = k;
    }
    return out;
}

void save_int_column(const std::string& path, const std::vector<int>& v) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    for (int x : v) out << x << '\n';
}

}  // namespace rsgslm
