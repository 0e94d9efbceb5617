#ifndef MCX_IO_HPP
#define MCX_IO_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcx/core.hpp"

namespace mcx {

namespace io {

inline std::string format_double(double v) {
  if (is_inf(v)) return "inf";
  // Shortest text that reads back to the same double.
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view tok) {
  while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
  while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) {
    tok.remove_suffix(1);
  }
  if (tok == "inf" || tok == "+inf") return kInf;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error("cannot parse number '" + std::string(tok) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<double> parse_list(std::string_view s, char sep = ',') {
  std::vector<double> v;
  for (auto tok : split(s, sep)) v.push_back(parse_double(tok));
  return v;
}

inline std::string format_point(const Vec& p, int dim) {
  std::string s = format_double(p[0]);
  if (dim == 2) s += "," + format_double(p[1]);
  return s;
}

inline Vec parse_point(std::string_view s, int* dim_out = nullptr) {
  auto v = parse_list(s, ',');
  if (v.empty() || v.size() > 2) throw Error("point must have 1 or 2 coordinates");
  if (dim_out) *dim_out = static_cast<int>(v.size());
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

}  // namespace io

/// Grid dump: header `d=..;count=..;origin=..;step=..`, then one value per node.
inline void write_grid_function(std::ostream& os, const GridFunction& f) {
  const Grid& g = f.grid;
  auto axis_list = [&](auto get) {
    std::string s = get(0);
    if (g.dim() == 2) s += "," + get(1);
    return s;
  };
  os << "d=" << g.dim() << ";count="
     << axis_list([&](int a) { return std::to_string(g.count(a)); })
     << ";origin=" << axis_list([&](int a) { return io::format_double(g.origin(a)); })
     << ";step=" << axis_list([&](int a) { return io::format_double(g.step(a)); }) << "\n";
  for (double v : f.values) os << io::format_double(v) << "\n";
}

inline GridFunction read_grid_function(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw Error("grid dump: missing header");
  int dim = 0;
  std::vector<double> count, origin, step;
  for (auto field : io::split(header, ';')) {
    auto eq = field.find('=');
    if (eq == std::string_view::npos) throw Error("grid dump: malformed header field");
    auto key = field.substr(0, eq);
    auto val = field.substr(eq + 1);
    if (key == "d") {
      dim = static_cast<int>(io::parse_double(val));
    } else if (key == "count") {
      count = io::parse_list(val);
    } else if (key == "origin") {
      origin = io::parse_list(val);
    } else if (key == "step") {
      step = io::parse_list(val);
    } else {
      throw Error("grid dump: unknown header key '" + std::string(key) + "'");
    }
  }
  auto n = static_cast<std::size_t>(dim);
  if ((dim != 1 && dim != 2) || count.size() != n || origin.size() != n || step.size() != n) {
    throw Error("grid dump: inconsistent header");
  }
  Grid g = dim == 1 ? Grid(origin[0], step[0], static_cast<std::size_t>(count[0]))
                    : Grid({origin[0], origin[1]}, {step[0], step[1]},
                           {static_cast<std::size_t>(count[0]), static_cast<std::size_t>(count[1])});
  std::vector<double> values;
  values.reserve(g.size());
  std::string line;
  while (values.size() < g.size() && std::getline(is, line)) {
    if (line.empty()) continue;
    values.push_back(io::parse_double(line));
  }
  if (values.size() != g.size()) throw Error("grid dump: too few values");
  return GridFunction(g, std::move(values));
}

inline void save_grid_function(const std::string& path, const GridFunction& f) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_grid_function(os, f);
}

inline GridFunction load_grid_function(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_grid_function(is);
}

}  // namespace mcx

#endif  // MCX_IO_HPP
