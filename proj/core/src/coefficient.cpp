// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "epithreshold/error.hpp"

namespace epithreshold {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Index of the table cell whose extent contains `x`, given ascending centers
// of a uniform table grid.
std::size_t table_cell(const std::vector<double>& centers, double x) {
  if (centers.size() == 1) return 0;
  const double h = centers[1] - centers[0];
  const double lo = centers.front() - 0.5 * h;
  auto k = static_cast<long>(std::floor((x - lo) / h));
  k = std::clamp<long>(k, 0, static_cast<long>(centers.size()) - 1);
  return static_cast<std::size_t>(k);
}

double sample_table(const TableCoefficient& t, double x, double y) {
  const std::size_t i = table_cell(t.xs, x);
  const std::size_t j = t.dim == 2 ? table_cell(t.ys, y) : 0;
  return t.values[j * t.xs.size() + i];
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string kind_name(const CoefficientSpec& spec) {
  return std::visit(overloaded{
                        [](const ConstantCoefficient&) { return std::string("constant"); },
                        [](const CosineCoefficient&) { return std::string("cosine"); },
                        [](const GaussBumpCoefficient&) { return std::string("gauss_bump"); },
                        [](const TableCoefficient&) { return std::string("table"); },
                    },
                    spec);
}

ScalarField sample_field(const CoefficientSpec& spec, const Grid& grid, Positivity positivity,
                         const std::string& name) {
  const double lx = grid.length(0);
  const double ly = grid.length(1);
  if (const auto* table = std::get_if<TableCoefficient>(&spec); table && table->dim != grid.dim()) {
    throw_invalid_config(name + ": table is " + std::to_string(table->dim) +
                         "D but the domain is " + std::to_string(grid.dim()) + "D");
  }
  const auto value_at = [&](double x, double y) {
    return std::visit(
        overloaded{
            [](const ConstantCoefficient& c) { return c.value; },
            [&](const CosineCoefficient& c) {
              constexpr double two_pi = 2.0 * std::numbers::pi;
              return c.base + c.amp * std::cos(two_pi * c.freq * x / lx) *
                                  std::cos(two_pi * c.freq_y * y / ly);
            },
            [&](const GaussBumpCoefficient& c) {
              double r2 = (x - c.center[0]) * (x - c.center[0]);
              if (grid.dim() == 2) r2 += (y - c.center[1]) * (y - c.center[1]);
              return c.base + c.amp * std::exp(-r2 / (2.0 * c.width * c.width));
            },
            [&](const TableCoefficient& t) { return sample_table(t, x, y); },
        },
        spec);
  };
  ScalarField field = ScalarField::from_function(grid, value_at);
  const double lowest = min_value(field);
  if (positivity == Positivity::Strict && !(lowest > 0.0)) {
    throw_invalid_config(name + " must be strictly positive (minimum sample " + fmt17(lowest) +
                         ")");
  }
  if (positivity == Positivity::NonNegative && lowest < 0.0) {
    throw_invalid_config(name + " must be non-negative (minimum sample " + fmt17(lowest) + ")");
  }
  return field;
}

TableCoefficient read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_invalid_config("cannot open table file '" + path + "'");
  std::string header;
  std::getline(in, header);
  header.erase(std::remove_if(header.begin(), header.end(), ::isspace), header.end());
  TableCoefficient table;
  table.path = path;
  if (header == "x,value") {
    table.dim = 1;
  } else if (header == "x,y,value") {
    table.dim = 2;
  } else {
    throw_invalid_config("table '" + path + "': header must be `x,value` or `x,y,value`");
  }

  std::vector<std::array<double, 3>> rows;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::array<double, 3> row{0.0, 0.0, 0.0};
    bool ok = table.dim == 1 ? static_cast<bool>(ls >> row[0] >> row[2])
                             : static_cast<bool>(ls >> row[0] >> row[1] >> row[2]);
    std::string rest;
    if (!ok || (ls >> rest)) {
      throw_invalid_config("table '" + path + "': malformed row at line " +
                           std::to_string(lineno));
    }
    rows.push_back(row);
  }

  std::set<double> xs, ys;
  for (const auto& r : rows) {
    xs.insert(r[0]);
    ys.insert(r[1]);
  }
  table.xs.assign(xs.begin(), xs.end());
  table.ys.assign(ys.begin(), ys.end());
  if (table.dim == 1) table.ys.clear();
  const std::size_t ny = table.dim == 2 ? table.ys.size() : 1;
  if (rows.empty() || rows.size() != table.xs.size() * ny) {
    throw_invalid_config("table '" + path + "': rows do not form a full tensor grid");
  }
  // Row-major by y then x.
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t i = k % table.xs.size();
    const std::size_t j = k / table.xs.size();
    if (rows[k][0] != table.xs[i] || (table.dim == 2 && rows[k][1] != table.ys[j])) {
      throw_invalid_config("table '" + path + "': rows must be ordered by y then x");
    }
    table.values.push_back(rows[k][2]);
  }
  return table;
}

std::string field_csv(const ScalarField& field) {
  const Grid& g = field.grid();
  std::string out = g.dim() == 1 ? "x,value\n" : "x,y,value\n";
  for (std::size_t k = 0; k < field.size(); ++k) {
    const auto c = g.center_of(k);
    out += fmt17(c[0]);
    out += ',';
    if (g.dim() == 2) {
      out += fmt17(c[1]);
      out += ',';
    }
    out += fmt17(field[k]);
    out += '\n';
  }
  return out;
}

void write_field_csv(const std::string& path, const ScalarField& field) {
  std::ofstream out(path);
  if (!out) throw_invalid_config("cannot write '" + path + "'");
  out << field_csv(field);
}

}  // namespace epithreshold
