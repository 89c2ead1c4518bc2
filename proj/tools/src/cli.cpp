#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <unistd.h>

#include "xyberry/berry.hpp"
#include "xyberry/ed.hpp"
#include "xyberry/errors.hpp"
#include "xyberry/grid.hpp"
#include "xyberry/lattice.hpp"
#include "xyberry/model.hpp"
#include "xyberry/observables.hpp"
#include "xyberry/scaling.hpp"

namespace xyberry::cli {
namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SurfaceArgs {
  std::string lambda = "0:2:0.02";
  std::string gamma = "0:1:0.02";
  int n = 2000;
  double margin = kDefaultCriticalTol;
};

struct GapMapArgs {
  std::string lambda = "0:2:0.02";
  std::string gamma = "0:1:0.02";
  std::string n = "inf";
  double margin = kDefaultCriticalTol;
};

struct VerifyArgs {
  int n = 6;
  int steps = 2000;
  int draws = 10;
  std::uint64_t seed = 7;
  double tol = 1e-3;
};

struct FitArgs {
  std::string approach = "ising";
  std::string window = "1e-3:1e-1";
  int samples = 40;
  std::string n = "inf";
  double lambda = 0.5;
  std::string table;
};

struct StepArgs {
  std::vector<double> gammas{0.05, 0.2, 0.5};
  std::string lambda = "0:2:0.005";
  std::string criterion = "plateau";
  double plateau_tol = 1e-9;
  std::string n = "inf";
};

struct LatticeArgs {
  std::string in = "-";
  double threshold = 0.1;
};

struct State {
  std::string config;
  std::string out = "-";
  SurfaceArgs surface;
  GapMapArgs gap_map;
  VerifyArgs verify;
  FitArgs fit;
  StepArgs step;
  LatticeArgs lattice;
};

const std::vector<std::string> kCommands{"phase-surface", "gap-map",    "verify",
                                         "scaling-fit",   "step-trace", "lattice-map"};

std::unique_ptr<CLI::App> make_app(State& s) {
  auto app = std::make_unique<CLI::App>("Berry phases and criticality of the rotated XY chain",
                                        "xyberry");
  app->fallthrough();
  app->add_option("--config", s.config, "JSON run configuration; flags override its values");

  auto* ps = app->add_subcommand("phase-surface", "ground and relative phase over a (lambda, gamma) grid");
  ps->add_option("--lambda", s.surface.lambda, "range min:max:step")->capture_default_str();
  ps->add_option("--gamma", s.surface.gamma, "range min:max:step")->capture_default_str();
  ps->add_option("--n", s.surface.n, "even ring size")->capture_default_str();
  ps->add_option("--margin", s.surface.margin, "critical-point tolerance")->capture_default_str();
  ps->add_option("--out", s.out, "output CSV, - for stdout")->capture_default_str();

  auto* gm = app->add_subcommand("gap-map", "minimum gap and criticality class over a grid");
  gm->add_option("--lambda", s.gap_map.lambda, "range min:max:step")->capture_default_str();
  gm->add_option("--gamma", s.gap_map.gamma, "range min:max:step")->capture_default_str();
  gm->add_option("--n", s.gap_map.n, "even ring size or inf")->capture_default_str();
  gm->add_option("--margin", s.gap_map.margin, "critical-point tolerance")->capture_default_str();
  gm->add_option("--out", s.out, "output CSV, - for stdout")->capture_default_str();

  auto* vf = app->add_subcommand("verify", "analytic mode sums against exact diagonalization");
  vf->add_option("--n", s.verify.n, "even ring size")->capture_default_str();
  vf->add_option("--steps", s.verify.steps, "loop discretization")->capture_default_str();
  vf->add_option("--draws", s.verify.draws, "random noncritical points")->capture_default_str();
  vf->add_option("--seed", s.verify.seed, "RNG seed")->capture_default_str();
  vf->add_option("--tol", s.verify.tol, "phase agreement threshold")->capture_default_str();
  vf->add_option("--out", s.out, "output JSON, - for stdout")->capture_default_str();

  auto* sf = app->add_subcommand("scaling-fit", "fit z*nu from a minimum-gap sweep");
  sf->add_option("approach", s.fit.approach, "ising or xx")
      ->check(CLI::IsMember({"ising", "xx"}))
      ->capture_default_str();
  sf->add_option("--window", s.fit.window, "offset window lo:hi")->capture_default_str();
  sf->add_option("--samples", s.fit.samples, "sweep samples")->capture_default_str();
  sf->add_option("--n", s.fit.n, "even ring size or inf")->capture_default_str();
  sf->add_option("--lambda", s.fit.lambda, "held field for the xx approach")->capture_default_str();
  sf->add_option("--table", s.fit.table, "also write the g,min_gap table here");
  sf->add_option("--out", s.out, "output JSON, - for stdout")->capture_default_str();

  auto* st = app->add_subcommand("step-trace", "locate the relative-phase step for each gamma");
  st->add_option("--gamma", s.step.gammas, "one or more gamma values")->capture_default_str();
  st->add_option("--lambda", s.step.lambda, "range min:max:step")->capture_default_str();
  st->add_option("--criterion", s.step.criterion, "plateau or half-step")
      ->check(CLI::IsMember({"plateau", "half-step"}))
      ->capture_default_str();
  st->add_option("--plateau-tol", s.step.plateau_tol, "plateau tolerance")->capture_default_str();
  st->add_option("--n", s.step.n, "even ring size or inf")->capture_default_str();
  st->add_option("--out", s.out, "output CSV, - for stdout")->capture_default_str();

  auto* lm = app->add_subcommand("lattice-map", "optical-lattice controls to XY parameters");
  lm->add_option("--in", s.lattice.in, "input JSON, - for stdin")->capture_default_str();
  lm->add_option("--threshold", s.lattice.threshold, "Mott ratio threshold")->capture_default_str();
  lm->add_option("--out", s.out, "output JSON, - for stdout")->capture_default_str();
  return app;
}

void parse_into(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  app.parse(args);
}

// ---- validation ------------------------------------------------------------

void require_even_ring(int n, const char* flag) {
  if (n < 4 || n % 2 != 0) {
    throw UsageError(std::string(flag) + " must be an even ring size >= 4 (the mode solution pairs " +
                     "momenta +q and -q), got " + std::to_string(n));
  }
}

std::optional<int> parse_ring(const std::string& text, const char* flag) {
  if (text == "inf") return std::nullopt;
  int n = 0;
  std::size_t used = 0;
  try {
    n = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw UsageError(std::string(flag) + " expects an even integer or inf, got '" + text + "'");
  }
  require_even_ring(n, flag);
  return n;
}

Range parse_range(const std::string& text, const char* flag) {
  try {
    return Range::parse(text);
  } catch (const Error& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

Window parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--window expects lo:hi, got '" + text + "'");
  Window w;
  try {
    std::size_t a = 0, b = 0;
    w.lo = std::stod(text.substr(0, colon), &a);
    w.hi = std::stod(text.substr(colon + 1), &b);
    if (a != colon || b != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError("--window expects lo:hi, got '" + text + "'");
  }
  if (!(w.lo > 0.0) || !(w.hi > w.lo)) {
    throw UsageError("--window needs 0 < lo < hi, got '" + text + "'");
  }
  return w;
}

ed::Limits limits_from_env() {
  ed::Limits limits;
  if (const char* v = std::getenv("XYBERRY_MAX_N")) {
    const std::string text(v);
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || n < 2) {
      throw UsageError("XYBERRY_MAX_N must be an integer >= 2, got '" + text + "'");
    }
    limits.max_sites = n;
  }
  return limits;
}

// ---- config file -----------------------------------------------------------

json read_json(const std::string& path, const char* what) {
  json doc;
  try {
    if (path == "-") {
      doc = json::parse(std::cin);
    } else {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw UsageError(std::string("cannot read ") + what + " '" + path + "'");
      doc = json::parse(in);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed ") + what + " '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError(std::string(what) + " must be a JSON object");
  return doc;
}

std::string scalar_token(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_float()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw UsageError("config key '" + key + "' must be a string or number");
}

// Tokens for every config entry whose option was not given on the command line.
std::vector<std::string> config_tokens(const json& params, CLI::App& sub) {
  std::vector<std::string> tokens;
  for (const auto& [key, value] : params.items()) {
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    bool positional = false;
    if (opt == nullptr) {
      opt = sub.get_option_no_throw(key);
      positional = opt != nullptr && opt->get_positional();
      if (!positional) opt = nullptr;
    }
    if (opt == nullptr || opt == sub.get_help_ptr()) {
      throw UsageError("unknown key '" + key + "' for " + sub.get_name());
    }
    if (opt->count() > 0) continue;
    if (value.is_array()) {
      if (opt->get_expected_max() <= 1) {
        throw UsageError("config key '" + key + "' takes a single value");
      }
      for (const auto& item : value) tokens.push_back("--" + key + "=" + scalar_token(item, key));
    } else if (positional) {
      tokens.push_back(scalar_token(value, key));
    } else {
      tokens.push_back("--" + key + "=" + scalar_token(value, key));
    }
  }
  return tokens;
}

// ---- output ----------------------------------------------------------------

void commit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp.replace_filename("." + target.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into '" + path + "'");
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void summary(std::ostream& out, const std::string& path, json fields) {
  if (path == "-") return;
  fields["output"] = path;
  out << fields.dump() << "\n";
}

// ---- commands --------------------------------------------------------------

int cmd_phase_surface(const State& s, std::ostream& out) {
  require_even_ring(s.surface.n, "--n");
  if (!(s.surface.margin > 0.0)) throw UsageError("--margin must be positive");
  const SurfaceGrid grid{parse_range(s.surface.lambda, "--lambda"),
                         parse_range(s.surface.gamma, "--gamma")};
  const auto rows = phase_surface(grid, s.surface.n, s.surface.margin);
  std::ostringstream csv;
  write_surface_csv(csv, rows);
  commit(s.out, csv.str(), out);
  const auto critical =
      std::count_if(rows.begin(), rows.end(), [](const SurfaceRow& r) { return r.status == RowStatus::Critical; });
  summary(out, s.out, {{"command", "phase-surface"}, {"rows", rows.size()}, {"critical", critical}});
  return kOk;
}

int cmd_gap_map(const State& s, std::ostream& out) {
  const auto n = parse_ring(s.gap_map.n, "--n");
  if (!(s.gap_map.margin > 0.0)) throw UsageError("--margin must be positive");
  const auto lambdas = parse_range(s.gap_map.lambda, "--lambda").points();
  const auto gammas = parse_range(s.gap_map.gamma, "--gamma").points();
  std::ostringstream csv;
  csv << "lambda,gamma,min_gap,criticality,distance\n";
  std::size_t rows = 0, critical = 0;
  for (double g : gammas) {
    for (double l : lambdas) {
      const auto c = classify_criticality(l, g, s.gap_map.margin);
      const double gap = n ? finite_min_gap(l, g, *n) : continuum_min_gap(l, g);
      csv << format_real(l) << ',' << format_real(g) << ',' << format_real(gap) << ','
          << to_string(c.tag) << ',' << format_real(c.distance) << '\n';
      ++rows;
      if (c.tag != CriticalityTag::NonCritical) ++critical;
    }
  }
  commit(s.out, csv.str(), out);
  summary(out, s.out, {{"command", "gap-map"}, {"rows", rows}, {"critical", critical}});
  return kOk;
}

int cmd_verify(const State& s, std::ostream& out) {
  const auto& a = s.verify;
  require_even_ring(a.n, "--n");
  if (a.steps < 8) throw UsageError("--steps must be at least 8");
  if (a.draws < 1) throw UsageError("--draws must be positive");
  if (!(a.tol > 0.0)) throw UsageError("--tol must be positive");
  ed::LoopPhaseOptions opts;
  opts.limits = limits_from_env();
  if (a.n > opts.limits.max_sites) {
    throw Error(ErrorKind::Resource, "--n " + std::to_string(a.n) + " exceeds the dense ED cap of " +
                                         std::to_string(opts.limits.max_sites) +
                                         " sites (raise XYBERRY_MAX_N)");
  }

  std::mt19937_64 rng(a.seed);
  std::uniform_real_distribution<double> ul(-2.0, 2.0), ug(0.1, 1.5);
  json points = json::array();
  double max_phase = 0, max_energy = 0, max_mz = 0, max_identity = 0;
  bool degenerate = false;
  for (int i = 0; i < a.draws; ++i) {
    double l = 0, g = 0;
    do {
      l = ul(rng);
      g = ug(rng);
    } while (std::abs(std::abs(l) - 1.0) <= 0.05);
    const auto p = XYParams::make(l, g, 0.0, a.n);
    const std::string where = "draw " + std::to_string(i) + " (lambda=" + format_real(l) +
                              ", gamma=" + format_real(g) + ")";
    try {
      const double analytic = ground_phase(p).wrapped;
      const auto loop = ed::discrete_loop_phase(p, ed::Level::Ground, {a.steps}, opts);
      const auto e_ed = ed::ground_energy_ed(p, ed::ParitySector::Even, opts.limits);
      const auto m_ed = ed::magnetization_ed(p, ed::ParitySector::Even, opts.limits);
      const auto id = phase_magnetization_identity(p);
      const double d_phase = std::abs(wrap_phase(loop.phase.wrapped - analytic));
      const double d_energy = std::abs(e_ed.value - ground_energy(p));
      const double d_mz = std::abs(m_ed.value - magnetization_analytic(p));
      const double d_id = std::abs(id.lhs - id.rhs);
      max_phase = std::max(max_phase, d_phase);
      max_energy = std::max(max_energy, d_energy);
      max_mz = std::max(max_mz, d_mz);
      max_identity = std::max(max_identity, d_id);
      const bool flag = loop.near_degenerate || e_ed.degenerate;
      degenerate = degenerate || flag;
      points.push_back({{"lambda", l},
                        {"gamma", g},
                        {"phase_analytic", analytic},
                        {"phase_oracle", loop.phase.wrapped},
                        {"phase_diff", d_phase},
                        {"energy_diff", d_energy},
                        {"magnetization_diff", d_mz},
                        {"identity_diff", d_id},
                        {"near_degenerate", flag}});
    } catch (const TrackingError& e) {
      throw TrackingError(e.kind(), where + ": " + e.what(), e.step(), e.phi());
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    }
  }
  const bool pass = max_phase < a.tol && max_energy < 1e-8 && max_mz < 1e-8 && max_identity < 1e-10;
  json report{{"command", "verify"},
              {"n_sites", a.n},
              {"steps", a.steps},
              {"draws", a.draws},
              {"seed", a.seed},
              {"max_phase_diff", max_phase},
              {"max_energy_diff", max_energy},
              {"max_magnetization_diff", max_mz},
              {"max_identity_diff", max_identity},
              {"near_degenerate", degenerate},
              {"pass", pass},
              {"points", points}};
  commit(s.out, dump(report), out);
  summary(out, s.out, {{"command", "verify"}, {"max_phase_diff", max_phase}, {"pass", pass}});
  return pass ? kOk : kVerifyFailed;
}

int cmd_scaling_fit(const State& s, std::ostream& out) {
  const auto& a = s.fit;
  const Window w = parse_window(a.window);
  if (a.samples < 8) throw UsageError("--samples must be at least 8");
  SweepSpec spec = a.approach == "ising" ? SweepSpec::ising(w, a.samples) : SweepSpec::xx(a.lambda, w, a.samples);
  spec.n_sites = parse_ring(a.n, "--n");
  const auto table = gap_sweep(spec);
  const auto fit = fit_exponent(table, spec.g_c, w);
  json j{{"approach", a.approach},
         {"g_c", spec.g_c},
         {"exponent", fit.exponent},
         {"intercept", fit.intercept},
         {"r_squared", fit.r_squared},
         {"window", {fit.window.lo, fit.window.hi}},
         {"points", fit.points}};
  j["n_sites"] = spec.n_sites ? json(*spec.n_sites) : json("inf");
  if (!a.table.empty()) {
    std::ostringstream csv;
    write_gap_csv(csv, table);
    commit(a.table, csv.str(), out);
  }
  commit(s.out, dump(j), out);
  summary(out, s.out, {{"command", "scaling-fit"}, {"exponent", fit.exponent}});
  return kOk;
}

int cmd_step_trace(const State& s, std::ostream& out) {
  const auto& a = s.step;
  const auto n = parse_ring(a.n, "--n");
  const auto lambdas = parse_range(a.lambda, "--lambda").points();
  if (!(a.plateau_tol > 0.0)) throw UsageError("--plateau-tol must be positive");
  StepOptions opts;
  opts.criterion = a.criterion == "plateau" ? StepCriterion::PlateauOnset : StepCriterion::HalfStep;
  opts.plateau_tol = a.plateau_tol;
  std::vector<StepTraceRow> rows;
  for (double g : a.gammas) {
    try {
      rows.push_back({g, step_detect(relative_phase_trace(g, lambdas, n), opts).lambda_star});
    } catch (const Error& e) {
      throw Error(e.kind(), "gamma=" + format_real(g) + ": " + e.what());
    }
  }
  std::ostringstream csv;
  write_step_csv(csv, rows);
  commit(s.out, csv.str(), out);
  summary(out, s.out, {{"command", "step-trace"}, {"rows", rows.size()}});
  return kOk;
}

double number_field(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw UsageError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const char* what) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      throw UsageError(std::string("unknown key '") + key + "' in " + what);
    }
  }
}

json lattice_json(const LatticeParams& lp) {
  return {{"j_a", lp.j_a},   {"j_b", lp.j_b},     {"j_c", lp.j_c},    {"u_ab", lp.u_ab},
          {"omega", lp.omega}, {"delta", lp.delta}, {"phase", lp.phase}};
}

int cmd_lattice_map(const State& s, std::ostream& out) {
  if (!(s.lattice.threshold > 0.0)) throw UsageError("--threshold must be positive");
  const json in = read_json(s.lattice.in, "lattice input");
  LatticeParams lp;
  if (in.contains("target")) {
    reject_unknown(in, {"target", "constraints"}, "lattice input");
    const auto& t = in.at("target");
    if (!t.is_object() || !t.contains("gamma") || !t.contains("lambda")) {
      throw UsageError("'target' needs gamma and lambda");
    }
    reject_unknown(t, {"gamma", "lambda"}, "target");
    TargetConstraints c;
    if (in.contains("constraints")) {
      const auto& cj = in.at("constraints");
      if (!cj.is_object()) throw UsageError("'constraints' must be an object");
      reject_unknown(cj, {"u_ab", "delta", "j_c"}, "constraints");
      c.u_ab = number_field(cj, "u_ab", c.u_ab);
      c.delta = number_field(cj, "delta", c.delta);
      c.j_c = number_field(cj, "j_c", c.j_c);
    }
    lp = solve_for_targets(number_field(t, "gamma", 0.0), number_field(t, "lambda", 0.0), c);
  } else {
    reject_unknown(in, {"j_a", "j_b", "j_c", "u_ab", "omega", "delta", "phase"}, "lattice input");
    lp.j_a = number_field(in, "j_a", lp.j_a);
    lp.j_b = number_field(in, "j_b", lp.j_b);
    lp.j_c = number_field(in, "j_c", lp.j_c);
    lp.u_ab = number_field(in, "u_ab", lp.u_ab);
    lp.omega = number_field(in, "omega", lp.omega);
    lp.delta = number_field(in, "delta", lp.delta);
    lp.phase = number_field(in, "phase", lp.phase);
  }
  const auto eff = effective_xy(lp);
  const auto mott = mott_regime_check(lp, s.lattice.threshold);
  json j{{"lattice", lattice_json(lp)},
         {"effective",
          {{"gamma", eff.gamma},
           {"lambda", eff.lambda},
           {"lambda_raw", eff.lambda_raw},
           {"phi", eff.phi},
           {"energy_scale", eff.energy_scale}}},
         {"mott", {{"pass", mott.pass}, {"margin", mott.margin}, {"threshold", mott.threshold}}}};
  commit(s.out, dump(j), out);
  summary(out, s.out, {{"command", "lattice-map"}, {"mott_pass", mott.pass}});
  return kOk;
}

void error_json(std::ostream& err, const std::string& kind, const std::string& message,
                const std::string& command, json extra = json::object()) {
  json e{{"kind", kind}, {"message", message}};
  if (!command.empty()) e["command"] = command;
  for (auto& [k, v] : extra.items()) e[k] = v;
  err << json{{"error", e}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::string command;
  try {
    // Pass one: the command line alone, to learn which options it sets.
    State first;
    auto probe = make_app(first);
    probe->require_subcommand(0, 1);
    try {
      parse_into(*probe, args);
    } catch (const CLI::CallForHelp&) {
      out << probe->help();
      return kOk;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }
    const auto given = probe->get_subcommands();
    if (!given.empty()) command = given.front()->get_name();

    std::vector<std::string> merged;
    if (!first.config.empty()) {
      const json cfg = read_json(first.config, "config");
      reject_unknown(cfg, {"command", "parameters", "output_path", "seed"}, "config");
      if (cfg.contains("command")) {
        if (!cfg["command"].is_string()) throw UsageError("config 'command' must be a string");
        const auto c = cfg["command"].get<std::string>();
        if (std::find(kCommands.begin(), kCommands.end(), c) == kCommands.end()) {
          throw UsageError("config names unknown command '" + c + "'");
        }
        if (!command.empty() && command != c) {
          throw UsageError("config command '" + c + "' conflicts with '" + command + "'");
        }
        command = c;
      }
      if (command.empty()) throw UsageError("no command given on the command line or in the config");
      json params = cfg.value("parameters", json::object());
      if (!params.is_object()) throw UsageError("config 'parameters' must be an object");
      for (const auto& [key, alias] : {std::pair{"output_path", "out"}, std::pair{"seed", "seed"}}) {
        if (!cfg.contains(key)) continue;
        if (params.contains(alias)) throw UsageError(std::string("config sets '") + alias + "' twice");
        params[alias] = cfg[key];
      }
      merged.push_back(command);
      auto tokens = config_tokens(params, *probe->get_subcommand(command));
      merged.insert(merged.end(), tokens.begin(), tokens.end());
    } else if (command.empty()) {
      throw UsageError("a command is required: phase-surface, gap-map, verify, scaling-fit, "
                       "step-trace or lattice-map");
    }
    // Config tokens go after the subcommand name; the original argv follows so
    // its positional (if any) and flags keep their meaning.
    std::vector<std::string> full;
    bool placed = merged.empty();
    for (const auto& a : args) {
      full.push_back(a);
      if (!placed && a == command) {
        full.insert(full.end(), merged.begin() + 1, merged.end());
        placed = true;
      }
    }
    if (!placed) full.insert(full.end(), merged.begin(), merged.end());

    State state;
    auto app = make_app(state);
    app->require_subcommand(1);
    try {
      parse_into(*app, full);
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }

    if (command == "phase-surface") return cmd_phase_surface(state, out);
    if (command == "gap-map") return cmd_gap_map(state, out);
    if (command == "verify") return cmd_verify(state, out);
    if (command == "scaling-fit") return cmd_scaling_fit(state, out);
    if (command == "step-trace") return cmd_step_trace(state, out);
    return cmd_lattice_map(state, out);
  } catch (const UsageError& e) {
    error_json(err, "usage", e.what(), command);
    return kUsage;
  } catch (const IoError& e) {
    error_json(err, "io", e.what(), command);
    return kFailure;
  } catch (const TrackingError& e) {
    error_json(err, std::string(to_string(e.kind())), e.what(), command,
               {{"step", e.step()}, {"phi", e.phi()}});
    return kFailure;
  } catch (const Error& e) {
    error_json(err, std::string(to_string(e.kind())), e.what(), command);
    return kFailure;
  }
}

}  // namespace xyberry::cli
