// cli.hpp
// Command-line front end. run() is kept separate from main() so the tests can
// drive the commands in-process.
//
// Exit codes: 0 success, 1 validation failure, 2 malformed input or
// inconsistent options, 3 oracle size limits exceeded.

#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "phaseframe/phaseframe.hpp"

namespace phaseframe::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 1;
inline constexpr int exit_input = 2;
inline constexpr int exit_oracle_limit = 3;

/// Bad option values or option combinations.
class usage_error : public error {
 public:
  using error::error;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;

  /// count equally spaced values including both ends.
  std::vector<double> values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i)
      v[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return v;
  }
};

struct Mesh {
  Range r;
  Range theta;
};

struct RunConfig {
  std::string command;
  std::vector<std::size_t> N;
  std::vector<double> p;
  std::optional<std::size_t> M;
  std::vector<std::size_t> M_list;
  std::string mode = "exact";
  std::string state_path;
  std::string samples_path;
  std::string out_path;
  std::string format = "csv";
  bool oracle = false;
  std::optional<std::uint64_t> seed;
  std::string eval_mesh;
  std::string p_range;
  std::optional<double> tol;
};

namespace detail {

inline Range parse_range(const std::string& text, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw usage_error(what + ": expected lo:hi:count, got \"" + text + "\"");
  Range r;
  try {
    std::size_t used = 0;
    r.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    r.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    const long long n = std::stoll(parts[2], &used);
    if (used != parts[2].size() || n < 1) throw std::invalid_argument(parts[2]);
    r.count = static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw usage_error(what + ": cannot parse \"" + text + "\" (count must be a positive integer)");
  }
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi))
    throw usage_error(what + ": bounds must be finite");
  return r;
}

inline Mesh parse_mesh(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw usage_error("--eval-mesh: expected r0:r1:nr,t0:t1:nt, got \"" + text + "\"");
  Mesh m{parse_range(text.substr(0, comma), "--eval-mesh radial part"),
         parse_range(text.substr(comma + 1), "--eval-mesh angular part")};
  if (m.r.lo < 0.0 || m.r.hi < 0.0) throw usage_error("--eval-mesh: radii must be non-negative");
  return m;
}

inline double series_tol(const RunConfig& cfg) {
  if (cfg.tol) {
    if (!(*cfg.tol > 0.0 && *cfg.tol < 1.0)) throw usage_error("--tol: must lie in (0, 1)");
    return *cfg.tol;
  }
  if (const char* env = std::getenv("PHASE_FRAME_TOL"); env && *env) {
    char* end = nullptr;
    const double t = std::strtod(env, &end);
    if (*end != '\0' || !(t > 0.0 && t < 1.0))
      throw usage_error(std::string("PHASE_FRAME_TOL: expected a number in (0, 1), got \"") + env +
                        "\"");
    return t;
  }
  return default_series_tol;
}

inline std::size_t single_N(const RunConfig& cfg) {
  if (cfg.N.size() != 1) throw usage_error(cfg.command + ": exactly one --N is required");
  if (cfg.N[0] < 1) throw usage_error("--N: must be at least 1");
  return cfg.N[0];
}

inline double single_p(const RunConfig& cfg) {
  if (cfg.p.size() != 1) throw usage_error(cfg.command + ": exactly one --p is required");
  if (!(cfg.p[0] > 0.0) || !std::isfinite(cfg.p[0]))
    throw usage_error("--p: must be a finite positive number");
  return cfg.p[0];
}

inline PhaseGrid single_grid(const RunConfig& cfg) { return PhaseGrid(single_N(cfg), single_p(cfg)); }

/// The true state: from --state, or drawn in H_order from --seed.
inline std::optional<FockVector> input_state(const RunConfig& cfg, std::size_t order) {
  if (!cfg.state_path.empty()) return io::read_state(cfg.state_path);
  if (cfg.seed) {
    Rng rng(*cfg.seed);
    return random_state(rng, order);
  }
  return std::nullopt;
}

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw usage_error("--out: cannot write " + cfg.out_path);
  f << text;
}

/// Summary lines go to stdout when data goes to a file, otherwise to stderr.
inline std::ostream& summary_stream(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return cfg.out_path.empty() ? err : out;
}

inline double max_abs_diff(const FockVector& a, const FockVector& b) {
  double d = 0.0;
  for (std::size_t n = 0; n < std::max(a.size(), b.size()); ++n)
    d = std::max(d, std::abs(a.at_or_zero(n) - b.at_or_zero(n)));
  return d;
}

inline double max_abs(const FockVector& a) {
  double m = 0.0;
  for (const auto& x : a.coefficients()) m = std::max(m, std::abs(x));
  return m;
}

inline void print_warnings(const Diagnostics& diag, std::ostream& err) {
  for (const auto& w : diag.warnings) err << "warning: " << w << '\n';
}

}  // namespace detail

inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const PhaseGrid grid = detail::single_grid(cfg);
  const SpectralData sd(grid, std::nullopt, grid.N() - 1, detail::series_tol(cfg));
  if (cfg.format == "json") {
    io::json j;
    j["grid"] = io::to_json(grid);
    j["lambda"] = io::json::array();
    j["lambda_hat"] = io::json::array();
    j["nu"] = io::json::array();
    for (std::size_t n = 0; n < grid.N(); ++n) {
      j["lambda"].push_back(sd.lambda(n));
      j["lambda_hat"].push_back(sd.lambda_hat(n));
      j["nu"].push_back(sd.nu(n));
    }
    detail::emit(cfg, io::dump(j), out);
    return exit_ok;
  }
  io::CsvWriter csv({"j", "lambda_j", "lambda_hat_j", "nu_j"});
  for (std::size_t n = 0; n < grid.N(); ++n) {
    csv.cell(n).cell(sd.lambda(n)).cell(sd.lambda_hat(n)).cell(sd.nu(n));
    csv.end_row();
  }
  detail::emit(cfg, csv.str(), out);
  return exit_ok;
}

inline int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const PhaseGrid grid = detail::single_grid(cfg);
  const auto psi = detail::input_state(cfg, cfg.M.value_or(grid.N() - 1));
  if (!psi) throw usage_error("sample: --state or --seed is required");
  const SampleSet s = sample(*psi, grid);
  if (cfg.format == "json") {
    detail::emit(cfg, io::dump(io::to_json(s)), out);
    return exit_ok;
  }
  io::CsvWriter csv({"k", "theta", "re", "im"});
  for (std::size_t k = 0; k < grid.N(); ++k) {
    csv.cell(k).cell(grid.angle(k)).cell(s[k].real()).cell(s[k].imag());
    csv.end_row();
  }
  detail::emit(cfg, csv.str(), out);
  return exit_ok;
}

inline int cmd_reconstruct(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PhaseGrid grid = detail::single_grid(cfg);
  const std::size_t N = grid.N();
  const double tol = detail::series_tol(cfg);
  const std::string& mode = cfg.mode;
  if (mode != "exact" && mode != "partial" && mode != "filtered")
    throw usage_error("--mode: expected exact, partial or filtered, got \"" + mode + "\"");
  if ((mode == "exact" || mode == "filtered") && cfg.M && *cfg.M >= N)
    throw usage_error("--M: mode " + mode + " requires M < N (M=" + std::to_string(*cfg.M) +
                      ", N=" + std::to_string(N) + ")");
  const std::size_t M = cfg.M.value_or(N - 1);
  std::optional<Mesh> mesh;
  if (!cfg.eval_mesh.empty()) mesh = detail::parse_mesh(cfg.eval_mesh);

  std::optional<FockVector> truth = detail::input_state(cfg, M);
  std::optional<SampleSet> samples;
  if (!cfg.samples_path.empty()) {
    samples = io::read_samples(cfg.samples_path);
    if (!(samples->grid() == grid))
      throw usage_error("--samples: file grid (N=" + std::to_string(samples->grid().N()) +
                        ", p=" + io::fmt(samples->grid().p()) + ") differs from --N/--p");
  } else if (truth) {
    samples = sample(*truth, grid);
  } else {
    throw usage_error("reconstruct: one of --state, --seed or --samples is required");
  }

  Diagnostics diag;
  FockVector recovered;
  std::function<complex(const CoherentPoint&)> value_at;
  std::optional<ExactReconstructor> exact;
  std::optional<PartialReconstructor> partial;
  if (mode == "exact") {
    exact.emplace(grid, M, tol);
    recovered = dft_coefficients(*exact, *samples, &diag);
    value_at = [&](const CoherentPoint& z) { return reconstruct_exact(*exact, *samples, z); };
  } else {
    partial.emplace(grid, std::nullopt, tol);
    if (mode == "partial") {
      recovered = alias_coefficients(*partial, *samples);
      value_at = [&](const CoherentPoint& z) {
        return reconstruct_partial(*partial, *samples, z, &diag);
      };
    } else {
      recovered = reconstruct_filtered(*partial, *samples, M);
      value_at = [&](const CoherentPoint& z) { return evaluate(recovered, z); };
    }
  }

  std::ostream& summary = detail::summary_stream(cfg, out, err);
  std::optional<double> coeff_error;
  if (truth) {
    coeff_error = detail::max_abs_diff(recovered, *truth);
    summary << "max_coefficient_error " << io::fmt(*coeff_error) << '\n';
  }
  std::optional<double> oracle_dev;
  if (cfg.oracle) {
    FockVector reference;
    if (mode == "partial") {
      if (!truth) throw usage_error("--oracle: partial mode needs the true state");
      const oracle::DenseFrame frame(grid, std::max(partial->n_max(), truth->max_index()));
      reference = oracle::dense_project(frame, *truth, &diag);
    } else {
      const oracle::DenseFrame frame(grid, M);
      reference = oracle::dense_pseudoinverse_fit(frame, M, *samples);
    }
    oracle_dev = detail::max_abs_diff(recovered, reference) / std::max(detail::max_abs(reference), 1e-300);
    summary << "oracle_max_relative_deviation " << io::fmt(*oracle_dev) << '\n';
  }

  struct EvalRow {
    double r, theta;
    complex value;
    std::optional<complex> expected;
  };
  std::vector<EvalRow> rows;
  if (mesh) {
    for (double r : mesh->r.values()) {
      for (double t : mesh->theta.values()) {
        const auto z = CoherentPoint::from_polar(r * r, t);
        EvalRow row{r, t, value_at(z), std::nullopt};
        if (truth) row.expected = evaluate(*truth, z);
        rows.push_back(row);
      }
    }
  }
  detail::print_warnings(diag, err);

  if (cfg.format == "json") {
    io::json j;
    j["mode"] = mode;
    j["grid"] = io::to_json(grid);
    j["M"] = M;
    j["coefficients"] = io::to_json(recovered)["coefficients"];
    j["max_coefficient_error"] = coeff_error ? io::json(*coeff_error) : io::json(nullptr);
    j["oracle_max_relative_deviation"] = oracle_dev ? io::json(*oracle_dev) : io::json(nullptr);
    if (mesh) {
      j["eval"] = io::json::array();
      for (const auto& row : rows) {
        io::json e{{"r", row.r}, {"theta", row.theta}, {"value", {row.value.real(), row.value.imag()}}};
        if (row.expected) {
          e["expected"] = {row.expected->real(), row.expected->imag()};
          e["abs_error"] = std::abs(row.value - *row.expected);
        }
        j["eval"].push_back(e);
      }
    }
    detail::emit(cfg, io::dump(j), out);
    return exit_ok;
  }

  if (mesh) {
    std::vector<std::string> header{"r", "theta", "re", "im"};
    if (truth) header.insert(header.end(), {"expected_re", "expected_im", "abs_error"});
    io::CsvWriter csv(header);
    for (const auto& row : rows) {
      csv.cell(row.r).cell(row.theta).cell(row.value.real()).cell(row.value.imag());
      if (row.expected)
        csv.cell(row.expected->real()).cell(row.expected->imag()).cell(std::abs(row.value - *row.expected));
      csv.end_row();
    }
    detail::emit(cfg, csv.str(), out);
    return exit_ok;
  }
  std::vector<std::string> header{"n", "re", "im"};
  if (truth) header.insert(header.end(), {"true_re", "true_im", "abs_error"});
  io::CsvWriter csv(header);
  for (std::size_t n = 0; n < recovered.size(); ++n) {
    csv.cell(n).cell(recovered[n].real()).cell(recovered[n].imag());
    if (truth) {
      const complex t = truth->at_or_zero(n);
      csv.cell(t.real()).cell(t.imag()).cell(std::abs(recovered[n] - t));
    }
    csv.end_row();
  }
  detail::emit(cfg, csv.str(), out);
  return exit_ok;
}

inline int cmd_error_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const double tol = detail::series_tol(cfg);
  if (cfg.N.empty()) throw usage_error("error-sweep: --N is required (comma-separated list allowed)");
  std::vector<double> ps = cfg.p;
  if (!cfg.p_range.empty()) {
    const auto r = detail::parse_range(cfg.p_range, "--p-range").values();
    ps.insert(ps.end(), r.begin(), r.end());
  }
  if (ps.empty()) throw usage_error("error-sweep: --p or --p-range is required");
  for (double p : ps)
    if (!(p > 0.0)) throw usage_error("error-sweep: every p must be positive");
  std::optional<FockVector> state;
  if (!cfg.state_path.empty()) state = io::read_state(cfg.state_path);

  struct Row {
    std::size_t N;
    double p;
    ErrorReport report;
  };
  std::vector<Row> rows;
  Diagnostics diag;
  for (std::size_t N : cfg.N) {
    if (N < 1) throw usage_error("--N: must be at least 1");
    for (double p : ps) {
      const PhaseGrid grid(N, p);
      ErrorReport r;
      if (state) {
        r = assess(*state, grid, tol, cfg.oracle ? &diag : nullptr);
        if (!cfg.oracle) {
          r.measured.reset();
          r.bound_holds.reset();
        }
      } else {
        // Coherent state on the sampling circle, midway between z_0 and z_1.
        const double eps2 = coherent_epsilon(p, N);
        const double eps = std::sqrt(std::min(eps2, 1.0));
        r.epsilon_N = eps;
        r.nu0 = nu0(p, N, tol);
        r.p0 = p_critical(N);
        r.in_asymptotic_regime = p < r.p0;
        r.bound = error_bound(eps, p, N, tol);
        r.bound_filtered = filtered_error_bound(eps, p, N, tol);
        if (cfg.oracle) {
          const std::size_t depth =
              std::min(phaseframe::detail::default_depth(p, N), oracle::max_default_columns);
          const oracle::DenseFrame frame(grid, depth);
          const auto zeta = coherent_state(
              CoherentPoint::from_polar(p, std::numbers::pi / static_cast<double>(N)), depth + 1);
          r.measured = oracle::projection_error(frame, zeta, &diag);
        }
      }
      rows.push_back({N, p, r});
    }
  }
  detail::print_warnings(diag, err);

  if (cfg.format == "json") {
    io::json j = io::json::array();
    for (const auto& row : rows) {
      io::json e = io::to_json(row.report);
      e["N"] = row.N;
      e["p"] = row.p;
      j.push_back(e);
    }
    detail::emit(cfg, io::dump(j), out);
    return exit_ok;
  }
  io::CsvWriter csv({"N", "p", "epsilon_N", "nu0", "E2_bound", "E2_bound_filtered", "measured"});
  for (const auto& row : rows) {
    const auto& r = row.report;
    csv.cell(row.N).cell(row.p).cell(r.epsilon_N).cell(r.nu0).cell(r.bound).cell(r.bound_filtered);
    if (r.measured)
      csv.cell(*r.measured);
    else
      csv.raw("");
    csv.end_row();
  }
  detail::emit(cfg, csv.str(), out);
  return exit_ok;
}

inline int cmd_droplet(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  std::vector<std::size_t> Ms = cfg.M_list;
  if (Ms.empty()) Ms = {10, 100, 1000};
  const Range range = detail::parse_range(cfg.p_range.empty() ? "0:2000:2000" : cfg.p_range, "--p-range");
  if (range.lo < 0.0 || range.hi < 0.0) throw usage_error("--p-range: p must be non-negative");
  const auto ps = range.values();
  if (cfg.format == "json") {
    io::json j = io::json::array();
    for (std::size_t M : Ms) {
      io::json curve{{"M", M}, {"p", io::json::array()}, {"P_M", io::json::array()}};
      for (double p : ps) {
        curve["p"].push_back(p);
        curve["P_M"].push_back(droplet(M, p));
      }
      j.push_back(curve);
    }
    detail::emit(cfg, io::dump(j), out);
    return exit_ok;
  }
  io::CsvWriter csv({"M", "p", "P_M"});
  for (std::size_t M : Ms) {
    for (double p : ps) {
      csv.cell(M).cell(p).cell(droplet(M, p));
      csv.end_row();
    }
  }
  detail::emit(cfg, csv.str(), out);
  return exit_ok;
}

/// Oracle cross-checks on one grid.
inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PhaseGrid grid = detail::single_grid(cfg);
  const std::size_t N = grid.N();
  const double p = grid.p();
  const double tol = detail::series_tol(cfg);
  Rng rng(cfg.seed.value_or(20240601));
  Diagnostics diag;
  struct Check {
    std::string name;
    double value;
    double limit;
  };
  std::vector<Check> checks;

  const auto rfm = rfm_orthogonality_check(N, N - 1);
  checks.push_back({"rfm_orthogonality", rfm.max_deviation, 1e-12});

  const auto B = build_overlap(grid, &diag, tol);
  checks.push_back({"circulant_eigenvalues", B.eigen_deviation(), 1e-10});
  if (N <= oracle::max_eig_check_size)
    checks.push_back({"dense_eig_check", oracle::dense_eig_check(B) / B.eigenvalues()[0], 1e-9});

  const std::size_t M = cfg.M.value_or(N - 1);
  if (M >= N) throw usage_error("--M: validate requires M < N");
  const ExactReconstructor exact(grid, M, tol);
  const FockVector psi = random_state(rng, M);
  const SampleSet s = sample(psi, grid);
  const FockVector a = dft_coefficients(exact, s, &diag);
  checks.push_back({"exact_round_trip", detail::max_abs_diff(a, psi), 1e-9});
  const oracle::DenseFrame small(grid, M);
  checks.push_back({"exact_vs_pseudoinverse",
                    detail::max_abs_diff(a, oracle::dense_pseudoinverse_fit(small, M, s)), 1e-9});

  const PartialReconstructor partial(grid, std::nullopt, tol);
  double interp = 0.0;
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t l = 0; l < N; ++l)
      interp = std::max(interp, std::abs(lagrange_kernel(partial, k, grid.point(l)) - (k == l ? 1.0 : 0.0)));
  checks.push_back({"lagrange_interpolation", interp, 1e-10});

  const std::size_t length = std::min<std::size_t>(partial.n_max() + 1, 200);
  const FockVector phi = random_state(rng, length - 1);
  const SampleSet sp = sample(phi, grid);
  const FockVector alias = alias_coefficients(partial, sp);
  const oracle::DenseFrame frame(grid, partial.n_max());
  const FockVector projected = oracle::dense_project(frame, phi, &diag);
  checks.push_back({"alias_vs_dense_projection",
                    detail::max_abs_diff(alias, projected) / detail::max_abs(projected), 1e-8});

  double period = 0.0;
  const auto& sd = partial.spectral();
  for (std::size_t n = 0; n + N <= partial.n_max(); ++n) {
    const complex lhs = alias[n + N] * std::sqrt(sd.lambda(n));
    const complex rhs = alias[n] * std::sqrt(sd.lambda(n + N));
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale > 0.0) period = std::max(period, std::abs(lhs - rhs) / scale);
  }
  checks.push_back({"periodization", period, 1e-12});

  const ErrorReport rep = assess(phi, grid, tol, &diag);
  if (rep.measured)
    checks.push_back({"error_bound_margin", *rep.measured * *rep.measured - rep.bound, 0.0});

  const FockVector full = random_state(rng, N - 1);
  const SampleSet sf = sample(full, grid);
  const ExactReconstructor exact_full(grid, N - 1, tol);
  checks.push_back({"filtered_vs_exact",
                    detail::max_abs_diff(reconstruct_filtered(partial, sf),
                                         dft_coefficients(exact_full, sf, &diag)),
                    1e-10});

  detail::print_warnings(diag, err);
  bool ok = true;
  std::ostringstream report;
  for (const auto& c : checks) {
    const bool pass = c.value <= c.limit;
    ok = ok && pass;
    report << (pass ? "PASS " : "FAIL ") << c.name << " value=" << io::fmt(c.value)
           << " limit=" << io::fmt(c.limit) << '\n';
  }
  report << (ok ? "validate: all checks passed\n" : "validate: FAILED\n");
  detail::emit(cfg, report.str(), out);
  if (!cfg.out_path.empty()) out << report.str();
  return ok ? exit_ok : exit_validation;
}

inline int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.format != "csv" && cfg.format != "json")
    throw usage_error("--format: expected csv or json, got \"" + cfg.format + "\"");
  if (cfg.command == "spectrum") return cmd_spectrum(cfg, out, err);
  if (cfg.command == "sample") return cmd_sample(cfg, out, err);
  if (cfg.command == "reconstruct") return cmd_reconstruct(cfg, out, err);
  if (cfg.command == "error-sweep") return cmd_error_sweep(cfg, out, err);
  if (cfg.command == "droplet") return cmd_droplet(cfg, out, err);
  if (cfg.command == "validate") return cmd_validate(cfg, out, err);
  throw usage_error("unknown command " + cfg.command);
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-sample reconstruction of Fock-Bargmann wave functions", "phaseframe"};
  app.require_subcommand(1);
  RunConfig cfg;

  std::vector<std::string> tol_text;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--N", cfg.N, "Number of phase samples")->delimiter(',');
    sub->add_option("--p", cfg.p, "Mean particle number of the sampling circle")->delimiter(',');
    sub->add_option("--out", cfg.out_path, "Output file (default stdout)");
    sub->add_option("--format", cfg.format, "csv or json");
    sub->add_option("--tol", cfg.tol, "Series truncation tolerance (overrides PHASE_FRAME_TOL)");
  };
  auto state_opts = [&](CLI::App* sub) {
    sub->add_option("--state", cfg.state_path, "State file (FockVector JSON)");
    sub->add_option("--seed", cfg.seed, "Draw a random normalized state with this seed");
    sub->add_option("--M", cfg.M, "Truncation order");
  };

  auto* spectrum = app.add_subcommand("spectrum", "lambda, lambda_hat and nu for one grid");
  common(spectrum);
  auto* smp = app.add_subcommand("sample", "Sample a state on the phase grid");
  common(smp);
  state_opts(smp);
  auto* rec = app.add_subcommand("reconstruct", "Recover a state from its phase samples");
  common(rec);
  state_opts(rec);
  rec->add_option("--samples", cfg.samples_path, "Sample file instead of a state");
  rec->add_option("--mode", cfg.mode, "exact, partial or filtered");
  rec->add_flag("--oracle", cfg.oracle, "Compare against the dense linear-algebra oracle");
  rec->add_option("--eval-mesh", cfg.eval_mesh, "Evaluation mesh r0:r1:nr,t0:t1:nt (|z| and arg z)");
  auto* sweep = app.add_subcommand("error-sweep", "Error bounds over a grid of (N, p)");
  common(sweep);
  sweep->add_option("--state", cfg.state_path, "State file (default: coherent state at sqrt(p) e^{i pi / N})");
  sweep->add_option("--p-range", cfg.p_range, "p values lo:hi:count");
  sweep->add_flag("--oracle", cfg.oracle, "Measure the error with the dense oracle");
  auto* drop = app.add_subcommand("droplet", "Droplet function P_M(p)");
  common(drop);
  drop->add_option("--M", cfg.M_list, "Truncation orders")->delimiter(',');
  drop->add_option("--p-range", cfg.p_range, "p values lo:hi:count (inclusive)");
  auto* val = app.add_subcommand("validate", "Run the oracle cross-checks on one grid");
  common(val);
  val->add_option("--M", cfg.M, "Truncation order for the exact checks");
  val->add_option("--seed", cfg.seed, "Seed for the random test states");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    return dispatch(cfg, out, err);
  } catch (const size_limit_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_oracle_limit;
  } catch (const io::format_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const invalid_grid& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const degenerate_grid& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), out, err);
}

}  // namespace phaseframe::cli
