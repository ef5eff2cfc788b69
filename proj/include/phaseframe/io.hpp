// io.hpp
// JSON and CSV formats for states, grids, samples and error reports.
//
// Complex numbers are [re, im] pairs. Doubles are written with 17 significant
// digits so every value round-trips exactly.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "phaseframe/error.hpp"
#include "phaseframe/error_analysis.hpp"
#include "phaseframe/fock.hpp"

namespace phaseframe::io {

using json = nlohmann::json;

/// Malformed input; the message names the offending field.
class format_error : public error {
 public:
  using error::error;
};

/// %.17g formatting.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw format_error(where + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw format_error(where + ": missing field \"" + key + "\"");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw format_error(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw format_error(where + ": value must be finite");
  return v;
}

inline complex complex_value(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw format_error(where + ": expected [re, im]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

inline std::vector<complex> complex_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw format_error(where + ": expected an array of [re, im] pairs");
  std::vector<complex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(complex_value(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline json complex_json(complex z) { return json::array({z.real(), z.imag()}); }

inline json complex_array_json(std::span<const complex> v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(complex_json(z));
  return a;
}

}  // namespace detail

inline json to_json(const FockVector& psi) {
  json j;
  j["coefficients"] = detail::complex_array_json(psi.coefficients());
  if (psi.tail())
    j["tail"] = {{"C", psi.tail()->C}, {"alpha", psi.tail()->alpha}};
  else
    j["tail"] = nullptr;
  return j;
}

inline FockVector fock_from_json(const json& j) {
  auto coeffs = detail::complex_array(detail::field(j, "coefficients", "state"), "coefficients");
  if (coeffs.empty()) throw format_error("coefficients: at least one entry is required");
  std::optional<TailProfile> tail;
  if (const auto it = j.find("tail"); it != j.end() && !it->is_null()) {
    tail = TailProfile{detail::number(detail::field(*it, "C", "tail"), "tail.C"),
                       detail::number(detail::field(*it, "alpha", "tail"), "tail.alpha")};
    if (tail->C < 0.0) throw format_error("tail.C: must be non-negative");
    if (!(tail->alpha > 0.5)) throw format_error("tail.alpha: must exceed 1/2");
  }
  return FockVector(std::move(coeffs), tail);
}

inline json to_json(const PhaseGrid& grid) { return {{"N", grid.N()}, {"p", grid.p()}}; }

inline PhaseGrid grid_from_json(const json& j) {
  const json& n = detail::field(j, "N", "grid");
  if (!n.is_number_integer() || n.get<long long>() < 1)
    throw format_error("grid.N: expected a positive integer");
  const double p = detail::number(detail::field(j, "p", "grid"), "grid.p");
  if (!(p > 0.0)) throw format_error("grid.p: must be positive");
  return PhaseGrid(n.get<std::size_t>(), p);
}

inline json to_json(const SampleSet& s) {
  return {{"grid", to_json(s.grid())}, {"values", detail::complex_array_json(s.values())}};
}

inline SampleSet samples_from_json(const json& j) {
  const PhaseGrid grid = grid_from_json(detail::field(j, "grid", "samples"));
  auto values = detail::complex_array(detail::field(j, "values", "samples"), "values");
  if (values.size() != grid.N())
    throw format_error("values: expected " + std::to_string(grid.N()) + " entries, got " +
                       std::to_string(values.size()));
  return SampleSet(grid, std::move(values));
}

inline json to_json(const ErrorReport& r) {
  json j;
  j["epsilon_N"] = r.epsilon_N;
  j["nu0"] = r.nu0;
  j["p0"] = r.p0;
  j["bound"] = r.bound;
  j["bound_filtered"] = r.bound_filtered;
  if (r.measured)
    j["measured"] = *r.measured;
  else
    j["measured"] = nullptr;
  j["asymptotic"] = r.in_asymptotic_regime;
  return j;
}

inline json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw format_error(path + ": invalid JSON (" + e.what() + ")");
  }
}

inline FockVector read_state(const std::string& path) { return fock_from_json(parse_json_file(path)); }

inline SampleSet read_samples(const std::string& path) {
  return samples_from_json(parse_json_file(path));
}

/// Compact JSON text; nlohmann writes doubles in shortest round-trip form.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Rows of doubles as CSV with a header line.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }

  CsvWriter& cell(double x) { return raw(fmt(x)); }
  CsvWriter& cell(std::size_t n) { return raw(std::to_string(n)); }
  CsvWriter& raw(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool first_ = true;
};

}  // namespace phaseframe::io
