// SPDX-License-Identifier: Apache-2.0
#include "epithreshold/scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>
#include <vector>

#include "epithreshold/error.hpp"

namespace epithreshold {

namespace {

// Values of the TOML subset: number, string, numeric array, inline table.
struct Value;
using Table = std::map<std::string, Value>;
struct Value {
  std::variant<double, std::string, std::vector<double>, Table> v;
};

class ValueParser {
 public:
  ValueParser(std::string_view text, std::string context) : text_(text), ctx_(std::move(context)) {}

  Value parse_complete() {
    Value out = parse_value();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected trailing text");
    return out;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    throw_invalid_config(ctx_ + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value parse_value() {
    skip_ws();
    if (pos_ >= text_.size()) error("missing value");
    const char c = text_[pos_];
    if (c == '"') return {parse_string()};
    if (c == '[') return {parse_array()};
    if (c == '{') return {parse_table()};
    return {parse_number()};
  }

  std::string parse_string() {
    ++pos_;
    const auto end = text_.find('"', pos_);
    if (end == std::string_view::npos) error("unterminated string");
    std::string out(text_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }

  double parse_number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == '-' || text_[pos_] == '+' || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string token(text_.substr(start, pos_ - start));
    std::erase(token, '_');
    if (token.empty()) error("expected a value");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      error("'" + token + "' is not a number");
    }
    if (used != token.size() || !std::isfinite(v)) error("'" + token + "' is not a finite number");
    return v;
  }

  std::vector<double> parse_array() {
    ++pos_;
    std::vector<double> out;
    if (consume(']')) return out;
    do {
      out.push_back(parse_number());
    } while (consume(','));
    if (!consume(']')) error("expected ']'");
    return out;
  }

  Table parse_table() {
    ++pos_;
    Table out;
    if (consume('}')) return out;
    do {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_')) {
        ++pos_;
      }
      std::string key(text_.substr(start, pos_ - start));
      if (key.empty()) error("expected a key in inline table");
      if (!consume('=')) error("expected '=' after '" + key + "'");
      if (out.count(key)) error("duplicate key '" + key + "'");
      out[key] = parse_value();
    } while (consume(','));
    if (!consume('}')) error("expected '}'");
    return out;
  }

  std::string_view text_;
  std::string ctx_;
  std::size_t pos_ = 0;
};

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double as_number(const Value& v, const std::string& key) {
  if (const auto* d = std::get_if<double>(&v.v)) return *d;
  throw_invalid_config("`" + key + "` must be a number");
}

std::vector<double> as_numbers(const Value& v, const std::string& key) {
  if (const auto* d = std::get_if<double>(&v.v)) return {*d};
  if (const auto* a = std::get_if<std::vector<double>>(&v.v)) return *a;
  throw_invalid_config("`" + key + "` must be a number or an array of numbers");
}

int as_int(const Value& v, const std::string& key) {
  const double d = as_number(v, key);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw_invalid_config("`" + key + "` must be an integer");
  return static_cast<int>(d);
}

CoefficientSpec coefficient_from(const Value& value, const std::string& key,
                                 const std::string& base_dir) {
  if (const auto* d = std::get_if<double>(&value.v)) return ConstantCoefficient{*d};
  const auto* table = std::get_if<Table>(&value.v);
  if (!table) throw_invalid_config("`" + key + "` must be a number or an inline table");

  const auto kind_it = table->find("kind");
  if (kind_it == table->end()) throw_invalid_config("`" + key + "`: missing `kind`");
  const auto* kind = std::get_if<std::string>(&kind_it->second.v);
  if (!kind) throw_invalid_config("`" + key + ".kind` must be a string");

  std::map<std::string, bool> used{{"kind", true}};
  const auto get = [&](const std::string& field) -> const Value* {
    used[field] = true;
    const auto it = table->find(field);
    return it == table->end() ? nullptr : &it->second;
  };
  const auto required = [&](const std::string& field) {
    const Value* v = get(field);
    if (!v) throw_invalid_config("`" + key + "`: missing `" + field + "`");
    return as_number(*v, key + "." + field);
  };
  const auto optional = [&](const std::string& field, double fallback) {
    const Value* v = get(field);
    return v ? as_number(*v, key + "." + field) : fallback;
  };

  CoefficientSpec out;
  if (*kind == "constant") {
    out = ConstantCoefficient{required("value")};
  } else if (*kind == "cosine") {
    out = CosineCoefficient{required("base"), required("amp"), optional("freq", 1.0),
                            optional("freq_y", 0.0)};
  } else if (*kind == "gauss_bump") {
    GaussBumpCoefficient g;
    g.base = required("base");
    g.amp = required("amp");
    g.width = required("width");
    if (!(g.width > 0.0)) throw_invalid_config("`" + key + ".width` must be positive");
    const Value* center = get("center");
    if (!center) throw_invalid_config("`" + key + "`: missing `center`");
    const auto c = as_numbers(*center, key + ".center");
    if (c.empty() || c.size() > 2) throw_invalid_config("`" + key + ".center` needs 1 or 2 values");
    g.center = {c[0], c.size() > 1 ? c[1] : 0.0};
    out = g;
  } else if (*kind == "table") {
    const Value* path = get("path");
    const auto* p = path ? std::get_if<std::string>(&path->v) : nullptr;
    if (!p) throw_invalid_config("`" + key + "`: table needs a string `path`");
    std::filesystem::path resolved(*p);
    if (resolved.is_relative()) resolved = std::filesystem::path(base_dir) / resolved;
    TableCoefficient t = read_table_csv(resolved.string());
    t.path = *p;
    out = t;
  } else {
    throw_invalid_config("`" + key + "`: unknown kind '" + *kind +
                         "' (expected constant, cosine, gauss_bump or table)");
  }
  for (const auto& [field, _] : *table) {
    if (!used.count(field)) throw_invalid_config("`" + key + "`: unknown key `" + field + "`");
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string serialize_coefficient(const CoefficientSpec& spec) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConstantCoefficient>) {
          return "{ kind = \"constant\", value = " + fmt(c.value) + " }";
        } else if constexpr (std::is_same_v<T, CosineCoefficient>) {
          return "{ kind = \"cosine\", base = " + fmt(c.base) + ", amp = " + fmt(c.amp) +
                 ", freq = " + fmt(c.freq) + ", freq_y = " + fmt(c.freq_y) + " }";
        } else if constexpr (std::is_same_v<T, GaussBumpCoefficient>) {
          return "{ kind = \"gauss_bump\", base = " + fmt(c.base) + ", amp = " + fmt(c.amp) +
                 ", center = [" + fmt(c.center[0]) + ", " + fmt(c.center[1]) +
                 "], width = " + fmt(c.width) + " }";
        } else {
          return "{ kind = \"table\", path = \"" + c.path + "\" }";
        }
      },
      spec);
}

std::string join(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt(values[i]);
  }
  return out + "]";
}

}  // namespace

ScenarioSpec parse_scenario_text(const std::string& text, const std::string& base_dir) {
  std::map<std::string, std::map<std::string, Value>> sections;
  const std::map<std::string, std::vector<std::string>> allowed{
      {"domain", {"lengths", "cells"}},
      {"coefficients", {"alpha", "mu", "d_s", "d_i", "d_s_y", "d_i_y"}},
      {"initial", {"s0", "i0"}},
      {"numerics",
       {"dt", "t_max", "tol_i", "tol_s", "eig_tol", "eig_max_iter", "critical_tol",
        "trace_stride"}},
  };

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw_invalid_config(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!allowed.count(section)) throw_invalid_config(where + ": unknown section [" + section + "]");
      if (sections.count(section)) throw_invalid_config(where + ": duplicate section [" + section + "]");
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw_invalid_config(where + ": expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    if (section.empty()) throw_invalid_config(where + ": key `" + key + "` outside any section");
    const auto& keys = allowed.at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw_invalid_config(where + ": unknown key `" + key + "` in [" + section + "]");
    }
    if (sections[section].count(key)) throw_invalid_config(where + ": duplicate key `" + key + "`");
    sections[section][key] = ValueParser(line.substr(eq + 1), where + " `" + key + "`").parse_complete();
  }

  const auto require = [&](const std::string& sec, const std::string& key) -> const Value& {
    const auto s = sections.find(sec);
    if (s == sections.end()) throw_invalid_config("missing section [" + sec + "]");
    const auto k = s->second.find(key);
    if (k == s->second.end()) throw_invalid_config("missing key `" + key + "` in [" + sec + "]");
    return k->second;
  };
  const auto find = [&](const std::string& sec, const std::string& key) -> const Value* {
    const auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };

  ScenarioSpec spec;
  spec.domain.lengths = as_numbers(require("domain", "lengths"), "lengths");
  for (double c : as_numbers(require("domain", "cells"), "cells")) {
    if (c != std::floor(c) || c > 1e8) throw_invalid_config("`cells` must be integers");
    spec.domain.cells.push_back(static_cast<int>(c));
  }
  spec.alpha = coefficient_from(require("coefficients", "alpha"), "alpha", base_dir);
  spec.mu = coefficient_from(require("coefficients", "mu"), "mu", base_dir);
  spec.d_s.x = coefficient_from(require("coefficients", "d_s"), "d_s", base_dir);
  spec.d_i.x = coefficient_from(require("coefficients", "d_i"), "d_i", base_dir);
  if (const Value* v = find("coefficients", "d_s_y")) spec.d_s.y = coefficient_from(*v, "d_s_y", base_dir);
  if (const Value* v = find("coefficients", "d_i_y")) spec.d_i.y = coefficient_from(*v, "d_i_y", base_dir);
  spec.s0 = coefficient_from(require("initial", "s0"), "s0", base_dir);
  spec.i0 = coefficient_from(require("initial", "i0"), "i0", base_dir);

  Numerics& n = spec.numerics;
  const auto positive = [&](const std::string& key, double& slot) {
    if (const Value* v = find("numerics", key)) {
      slot = as_number(*v, key);
      if (!(slot > 0.0)) throw_invalid_config("`" + key + "` must be positive");
    }
  };
  positive("dt", n.dt);
  positive("t_max", n.t_max);
  positive("tol_i", n.tol_i);
  positive("tol_s", n.tol_s);
  positive("eig_tol", n.eig_tol);
  positive("critical_tol", n.critical_tol);
  if (const Value* v = find("numerics", "eig_max_iter")) n.eig_max_iter = as_int(*v, "eig_max_iter");
  if (const Value* v = find("numerics", "trace_stride")) n.trace_stride = as_int(*v, "trace_stride");
  if (n.eig_max_iter < 1 || n.trace_stride < 1) {
    throw_invalid_config("`eig_max_iter` and `trace_stride` must be at least 1");
  }
  return spec;
}

ScenarioSpec parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_invalid_config("cannot read scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_scenario_text(buf.str(), dir.empty() ? "." : dir.string());
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  std::vector<double> cells(spec.domain.cells.begin(), spec.domain.cells.end());
  std::string out;
  out += "[domain]\n";
  out += "lengths = " + join(spec.domain.lengths) + "\n";
  out += "cells = " + join(cells) + "\n\n";
  out += "[coefficients]\n";
  out += "alpha = " + serialize_coefficient(spec.alpha) + "\n";
  out += "mu = " + serialize_coefficient(spec.mu) + "\n";
  out += "d_s = " + serialize_coefficient(spec.d_s.x) + "\n";
  if (spec.d_s.y) out += "d_s_y = " + serialize_coefficient(*spec.d_s.y) + "\n";
  out += "d_i = " + serialize_coefficient(spec.d_i.x) + "\n";
  if (spec.d_i.y) out += "d_i_y = " + serialize_coefficient(*spec.d_i.y) + "\n";
  out += "\n[initial]\n";
  out += "s0 = " + serialize_coefficient(spec.s0) + "\n";
  out += "i0 = " + serialize_coefficient(spec.i0) + "\n\n";
  const Numerics& n = spec.numerics;
  out += "[numerics]\n";
  if (n.dt > 0.0) out += "dt = " + fmt(n.dt) + "\n";
  out += "t_max = " + fmt(n.t_max) + "\n";
  out += "tol_i = " + fmt(n.tol_i) + "\n";
  out += "tol_s = " + fmt(n.tol_s) + "\n";
  out += "eig_tol = " + fmt(n.eig_tol) + "\n";
  out += "eig_max_iter = " + std::to_string(n.eig_max_iter) + "\n";
  if (n.critical_tol > 0.0) out += "critical_tol = " + fmt(n.critical_tol) + "\n";
  out += "trace_stride = " + std::to_string(n.trace_stride) + "\n";
  return out;
}

std::string scenario_hash(const ScenarioSpec& spec) {
  std::string canonical = serialize_scenario(spec);
  // Table contents live outside the canonical text; fold them in too.
  for (const CoefficientSpec* c : {&spec.alpha, &spec.mu, &spec.d_s.x, &spec.d_i.x, &spec.s0, &spec.i0}) {
    if (const auto* t = std::get_if<TableCoefficient>(c)) {
      for (double v : t->values) canonical += fmt(v) + ",";
    }
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

LoadedScenario load_scenario(const std::string& path, int grid_n) {
  ScenarioSpec spec = parse_scenario_file(path);
  if (grid_n != 0) {
    if (grid_n < 2) throw_invalid_config("--grid-n must be at least 2");
    for (int& c : spec.domain.cells) c = grid_n;
  }
  Scenario scenario = Scenario::realize(spec);
  std::string hash = scenario_hash(spec);
  return {std::move(spec), std::move(scenario), std::move(hash)};
}

}  // namespace epithreshold
