// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cssw {

Grid::Grid(Matrix points) : points_(std::move(points)) {
  const std::size_t m = points_.rows();
  const std::size_t d = points_.cols();
  if (m < 1) throw std::invalid_argument("Grid: needs at least one point");
  if (d < 1) throw std::invalid_argument("Grid: needs at least one coordinate");
  for (std::size_t i = 0; i < m; ++i) {
    if (points_(i, 0) != 1.0) throw std::invalid_argument("Grid: leading coordinate must be exactly 1");
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(points_(i, j))) throw std::invalid_argument("Grid: non-finite coordinate");
    }
  }
  // O(m^2) distinctness check only at moderate sizes; large grids come from
  // constructors that are distinct by construction and get a sorted check.
  if (d == 2) {
    sorted_1d_ = true;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (!(points_(i, 1) < points_(i + 1, 1))) {
        sorted_1d_ = false;
        break;
      }
    }
  }
  if (sorted_1d_) return;  // strictly increasing implies distinct
  if (m <= 4096) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t k = i + 1; k < m; ++k) {
        bool same = true;
        for (std::size_t j = 0; j < d; ++j) {
          if (points_(i, j) != points_(k, j)) {
            same = false;
            break;
          }
        }
        if (same) throw std::invalid_argument("Grid: duplicate point");
      }
    }
  }
}

Grid equidistant_grid(double lo, double hi, std::size_t m) {
  if (!(lo < hi)) throw std::invalid_argument("equidistant_grid: requires lo < hi");
  if (m < 2) throw std::invalid_argument("equidistant_grid: requires m >= 2");
  Matrix pts(m, 2);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(m - 1);
    pts(i, 0) = 1.0;
    pts(i, 1) = lo * (1.0 - u) + hi * u;  // endpoints exact at u = 0, 1
  }
  return Grid(std::move(pts));
}

void save_grid_csv(const Grid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_grid_csv: cannot open " + path);
  char buf[64];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", grid.point(i)[j]);
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_grid_csv: write failed: " + path);
}

Grid load_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_grid_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("load_grid_csv: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("load_grid_csv: empty file " + path);
  Matrix pts(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j) pts(i, j) = rows[i][j];
  return Grid(std::move(pts));
}

}  // namespace cssw
