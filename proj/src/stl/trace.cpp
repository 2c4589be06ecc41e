#include "drivebound/stl/trace.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "drivebound/common/error.hpp"

namespace drivebound::stl {

std::string_view label_text(TraceLabel l) {
  return l == TraceLabel::Human ? "human" : "non-human";
}

std::optional<TraceLabel> label_from_text(std::string_view s) {
  if (s == "human") return TraceLabel::Human;
  if (s == "non-human") return TraceLabel::NonHuman;
  return std::nullopt;
}

bool is_signal_name(std::string_view name) {
  return name == "d_x" || name == "v_x" || name == "t_el" || name == "l_q" || name == "s_TL" ||
         name == "u";
}

std::span<const double> Trace::channel(std::string_view name) const {
  if (name == "d_x") return d_x;
  if (name == "v_x") return v_x;
  if (name == "t_el") return t_el;
  if (name == "l_q") return l_q;
  if (name == "u") return u;
  if (name == "s_TL") throw EvalError("s_TL is a discrete channel, not numeric");
  throw EvalError("unknown signal name '" + std::string(name) + "'");
}

void Trace::validate() const {
  const std::size_t n = v_x.size();
  if (n < 1) throw IoError("trace has no samples");
  if (d_x.size() != n || t_el.size() != n || l_q.size() != n || u.size() != n ||
      s_tl.size() != n) {
    throw IoError("trace channels have unequal lengths");
  }
  if (!(dt > 0.0)) throw IoError("trace dt must be positive");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(std::isfinite(d_x[k]) && std::isfinite(v_x[k]) && std::isfinite(t_el[k]) &&
          std::isfinite(l_q[k]) && std::isfinite(u[k]))) {
      throw IoError("non-finite value at sample " + std::to_string(k));
    }
    if (v_x[k] < 0.0) throw IoError("v_x < 0 at sample " + std::to_string(k));
    if (d_x[k] < 0.0) throw IoError("d_x < 0 at sample " + std::to_string(k));
    if (t_el[k] < 0.0) throw IoError("t_el < 0 at sample " + std::to_string(k));
    if (l_q[k] < 0.0 || l_q[k] > d_x[k] + 1e-9) {
      throw IoError("l_q outside [0, d_x] at sample " + std::to_string(k));
    }
    if (u[k] < kPhysicalDecelLimit - 1e-9 || u[k] > kPhysicalAccelLimit + 1e-9) {
      throw IoError("u outside physical range at sample " + std::to_string(k));
    }
  }
}

namespace {

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_field(const std::string& s, std::size_t row, std::size_t col) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw IoError("malformed numeric field '" + s + "' at row " + std::to_string(row) +
                  ", column " + std::to_string(col));
  }
}

}  // namespace

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError("cannot open trace file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty trace file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,d_x,v_x,t_el,l_q,s_TL,u") {
    throw IoError("bad CSV header in '" + path + "' (expected t,d_x,v_x,t_el,l_q,s_TL,u)");
  }

  Trace tr;
  std::vector<double> times;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 7) {
      throw IoError("expected 7 fields at row " + std::to_string(row) + ", got " +
                    std::to_string(fields.size()));
    }
    times.push_back(parse_field(fields[0], row, 1));
    tr.d_x.push_back(parse_field(fields[1], row, 2));
    tr.v_x.push_back(parse_field(fields[2], row, 3));
    tr.t_el.push_back(parse_field(fields[3], row, 4));
    tr.l_q.push_back(parse_field(fields[4], row, 5));
    const std::string& code = fields[5];
    std::optional<Light> light =
        code.size() == 1 ? light_from_code(code[0]) : std::nullopt;
    if (!light) {
      throw IoError("invalid s_TL value '" + code + "' at row " + std::to_string(row) +
                    " (expected G|Y|R)");
    }
    tr.s_tl.push_back(*light);
    tr.u.push_back(parse_field(fields[6], row, 7));
  }
  if (times.empty()) throw IoError("trace file '" + path + "' has no samples");

  tr.t0 = times.front();
  if (times.size() >= 2) {
    tr.dt = times[1] - times[0];
    if (!(tr.dt > 0.0)) throw IoError("non-increasing timestamps in '" + path + "'");
    for (std::size_t k = 0; k < times.size(); ++k) {
      double expected = tr.t0 + static_cast<double>(k) * tr.dt;
      if (std::fabs(times[k] - expected) > 1e-9) {
        throw IoError("non-uniform timestamps in '" + path + "' at row " + std::to_string(k + 2));
      }
    }
  }
  tr.validate();
  return tr;
}

void write_trace_csv(const Trace& trace, const std::string& path) {
  trace.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file '" + path + "'");
  out << "t,d_x,v_x,t_el,l_q,s_TL,u\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << format_g9(trace.time_at(k)) << ',' << format_g9(trace.d_x[k]) << ','
        << format_g9(trace.v_x[k]) << ',' << format_g9(trace.t_el[k]) << ','
        << format_g9(trace.l_q[k]) << ',' << light_code(trace.s_tl[k]) << ','
        << format_g9(trace.u[k]) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace drivebound::stl
