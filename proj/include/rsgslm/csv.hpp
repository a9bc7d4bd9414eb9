#pragma once

#include <string>
#include <vector>

#include "rsgslm/common.hpp"

namespace rsgslm {

// Matrices are stored headerless, one row per line, comma separated, full
// double precision (%.17g). Tabular reports carry a header line.

std::string format_double(double v);

void save_matrix(const std::string& path, const Mat& m);
Mat load_matrix(const std::string& path);

void save_vector(const std::string& path, const Vec& v);
Vec load_vector(const std::string& path);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void save_table(const std::string& path, const Table& t);
Table load_table(const std::string& path);

std::vector<int> load_int_column(const std::string& path);
void save_int_column(const std::string& path, const std::vector<int>& v);

}  // namespace rsgslm
