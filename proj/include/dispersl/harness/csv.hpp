#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dispersl/errors.hpp"
#include "dispersl/harness/experiments.hpp"

namespace dispersl::harness {

inline constexpr const char* csv_header =
    "h,dt,final_time,rel_l2_error,hs_star_error,weighted_error,wall_seconds,"
    "max_fp_iters,status";

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_csv(std::ostream& out, const ConvergenceTable& table) {
  out << csv_header << '\n';
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const auto& r : table) {
    out << format_double(r.h) << ',' << format_double(r.dt) << ','
        << format_double(r.final_time) << ',' << opt(r.rel_l2_error) << ','
        << opt(r.hs_star_error) << ',' << opt(r.weighted_error) << ','
        << format_double(r.wall_seconds) << ',' << r.max_fp_iters << ','
        << csv_quote(r.status) << '\n';
  }
}

namespace detail {

// Splits one record; quoted fields may hold commas, quotes and newlines.
inline bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw InvalidInput("csv: unterminated quoted field");
  fields.push_back(std::move(field));
  return true;
}

inline double parse_csv_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw InvalidInput("csv: bad number '" + s + "'");
  return v;
}

}  // namespace detail

inline ConvergenceTable read_csv(std::istream& in) {
  std::vector<std::string> f;
  if (!detail::read_record(in, f)) throw InvalidInput("csv: missing header");
  std::string header;
  for (std::size_t i = 0; i < f.size(); ++i) header += (i ? "," : "") + f[i];
  if (header != csv_header) throw InvalidInput("csv: unexpected header '" + header + "'");
  ConvergenceTable table;
  while (detail::read_record(in, f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 9)
      throw InvalidInput("csv: expected 9 fields, got " + std::to_string(f.size()));
    auto opt = [](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return detail::parse_csv_double(s);
    };
    ConvergenceRow r;
    r.h = detail::parse_csv_double(f[0]);
    r.dt = detail::parse_csv_double(f[1]);
    r.final_time = detail::parse_csv_double(f[2]);
    r.rel_l2_error = opt(f[3]);
    r.hs_star_error = opt(f[4]);
    r.weighted_error = opt(f[5]);
    r.wall_seconds = detail::parse_csv_double(f[6]);
    r.max_fp_iters = static_cast<int>(detail::parse_csv_double(f[7]));
    r.status = f[8];
    table.push_back(std::move(r));
  }
  return table;
}

/// A small matplotlib script that plots `csv_path` on log-log axes.
inline std::string plot_script(const std::string& csv_path, Column x) {
  const std::string xcol = x == Column::h ? "h" : "dt";
  return "import csv\n"
         "import matplotlib.pyplot as plt\n"
         "rows = [r for r in csv.DictReader(open('" + csv_path + "')) if r['rel_l2_error']]\n"
         "x = [float(r['" + xcol + "']) for r in rows]\n"
         "y = [float(r['rel_l2_error']) for r in rows]\n"
         "plt.loglog(x, y, 'o-')\n"
         "plt.xlabel('" + xcol + "')\n"
         "plt.ylabel('relative L2 error')\n"
         "plt.grid(True, which='both')\n"
         "plt.savefig('" + csv_path + ".png', dpi=150)\n";
}

}  // namespace dispersl::harness
