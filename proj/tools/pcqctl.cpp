// pcqctl: command-line front end for the Poisson-controller queue toolkit.
//
// Subcommands:
//   solve     analytic/matrix-geometric steady state of one variant
//   validate  closed form vs brute-force oracle cross-checks
//   sweep     E[Q], E[S] over a log-range of the control rate
//   simulate  discrete-event estimates with confidence intervals
//
// Exit codes: 0 ok, 2 invalid parameters, 3 no convergence, 4 I/O error,
// 5 validation failure.

#include <CLI11.hpp>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pcq/analytic_infinite.hpp"
#include "pcq/observers.hpp"
#include "pcq/oracle.hpp"
#include "pcq/params.hpp"
#include "pcq/qbd_finite.hpp"
#include "pcq/simulator.hpp"

namespace {

struct Options {
  std::string variant = "infinite";
  double lambda = 1.0;
  double mu = 1.0;
  double nu = 1.0;
  int smax = -1; // negative: not set
  std::size_t qmax = 200;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  std::string probe;
  std::string nu_range; // a:b:steps, log spaced
  double horizon = 1e5;
};

std::string fmt(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
  return buf;
}

struct Report {
  struct Check {
    std::string name;
    double value;
    double tol;
    bool pass;
  };
  std::vector<std::pair<std::string, std::string>> runspec;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::pair<std::string, std::vector<double>>> arrays;
  std::vector<std::array<double, 3>> pgf; // x, y, value
  std::vector<Check> checks;
  std::vector<std::array<double, 5>> sweep; // nu, EQ, ES, EQ_err, ES_err
};

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string emit_json(const Report& r) {
  const int d = 17;
  std::ostringstream os;
  os << "{\n  \"runspec\": {";
  for (std::size_t i = 0; i < r.runspec.size(); ++i)
    os << (i ? ", " : "") << '"' << r.runspec[i].first << "\": \""
       << json_escape(r.runspec[i].second) << '"';
  os << "}";
  if (!r.scalars.empty()) {
    os << ",\n  \"results\": {";
    for (std::size_t i = 0; i < r.scalars.size(); ++i)
      os << (i ? ", " : "") << '"' << r.scalars[i].first
         << "\": " << fmt(r.scalars[i].second, d);
    os << "}";
  }
  for (const auto& [name, arr] : r.arrays) {
    os << ",\n  \"" << name << "\": [";
    for (std::size_t i = 0; i < arr.size(); ++i)
      os << (i ? ", " : "") << fmt(arr[i], d);
    os << "]";
  }
  if (!r.pgf.empty()) {
    os << ",\n  \"pgf_grid\": [";
    for (std::size_t i = 0; i < r.pgf.size(); ++i)
      os << (i ? ", " : "") << "[" << fmt(r.pgf[i][0], d) << ", "
         << fmt(r.pgf[i][1], d) << ", " << fmt(r.pgf[i][2], d) << "]";
    os << "]";
  }
  if (!r.checks.empty()) {
    os << ",\n  \"checks\": [";
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
      const auto& c = r.checks[i];
      os << (i ? ", " : "") << "{\"name\": \"" << c.name
         << "\", \"value\": " << fmt(c.value, d)
         << ", \"tol\": " << fmt(c.tol, d)
         << ", \"pass\": " << (c.pass ? "true" : "false") << "}";
    }
    os << "]";
  }
  if (!r.sweep.empty()) {
    os << ",\n  \"sweep\": [";
    for (std::size_t i = 0; i < r.sweep.size(); ++i) {
      const auto& row = r.sweep[i];
      os << (i ? ", " : "") << "{\"nu\": " << fmt(row[0], d)
         << ", \"EQ\": " << fmt(row[1], d) << ", \"ES\": " << fmt(row[2], d)
         << ", \"EQ_err\": " << fmt(row[3], d)
         << ", \"ES_err\": " << fmt(row[4], d) << "}";
    }
    os << "]";
  }
  os << "\n}\n";
  return os.str();
}

std::string emit_csv(const Report& r) {
  const int d = 10;
  std::ostringstream os;
  if (!r.sweep.empty()) {
    // fixed schema; runspec rides along as comment lines
    for (const auto& [k, v] : r.runspec) os << "# " << k << "=" << v << "\n";
    os << "nu,EQ,ES,EQ_err,ES_err\n";
    for (const auto& row : r.sweep)
      os << fmt(row[0], d) << ',' << fmt(row[1], d) << ',' << fmt(row[2], d)
         << ',' << fmt(row[3], d) << ',' << fmt(row[4], d) << "\n";
    return os.str();
  }
  os << "key,value\n";
  for (const auto& [k, v] : r.runspec) os << "runspec." << k << ',' << v << "\n";
  for (const auto& [k, v] : r.scalars) os << k << ',' << fmt(v, d) << "\n";
  for (const auto& [name, arr] : r.arrays)
    for (std::size_t i = 0; i < arr.size(); ++i)
      os << name << '[' << i << "]," << fmt(arr[i], d) << "\n";
  for (const auto& row : r.pgf)
    os << "pgf[" << fmt(row[0], d) << ';' << fmt(row[1], d) << "],"
       << fmt(row[2], d) << "\n";
  for (const auto& c : r.checks) {
    os << "check." << c.name << ',' << fmt(c.value, d) << "\n";
    os << "check." << c.name << ".pass," << (c.pass ? 1 : 0) << "\n";
  }
  return os.str();
}

void write_report(const Options& o, const Report& r) {
  const std::string text = o.format == "csv" ? emit_csv(r) : emit_json(r);
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary); // binary keeps LF line endings
  f << text;
  if (!f) throw pcq::IoError("cannot write " + o.out);
}

pcq::ModelParams to_params(const Options& o, bool allow_unstable = false) {
  const auto v = pcq::variant_from_string(o.variant);
  if (!v) throw pcq::DomainError("unknown variant: " + o.variant);
  pcq::ModelParams p;
  p.lambda = o.lambda;
  p.mu = o.mu;
  p.nu = o.nu;
  p.variant = *v;
  if (o.smax >= 0) p.smax = static_cast<unsigned>(o.smax);
  if (p.variant == pcq::Variant::ControllerFinite && !p.smax)
    throw pcq::DomainError("finite variant requires --smax");
  return pcq::validate_params(p, allow_unstable);
}

void echo_runspec(Report& r, const Options& o, const std::string& cmd) {
  r.runspec = {{"subcommand", cmd},
               {"variant", o.variant},
               {"lambda", fmt(o.lambda, 17)},
               {"mu", fmt(o.mu, 17)},
               {"nu", fmt(o.nu, 17)},
               {"qmax", std::to_string(o.qmax)},
               {"tol", fmt(o.tol, 17)},
               {"seed", std::to_string(o.seed)},
               {"format", o.format}};
  if (o.smax >= 0) r.runspec.push_back({"smax", std::to_string(o.smax)});
  if (!o.probe.empty()) r.runspec.push_back({"probe", o.probe});
  if (!o.nu_range.empty()) r.runspec.push_back({"nu_range", o.nu_range});
  if (cmd == "simulate")
    r.runspec.push_back({"horizon", fmt(o.horizon, 17)});
}

const std::vector<std::pair<double, double>> kPgfGrid = [] {
  std::vector<std::pair<double, double>> g;
  for (double x : {0.25, 0.5, 0.75, 1.0})
    for (double y : {0.25, 0.5, 0.75, 1.0}) g.push_back({x, y});
  return g;
}();

void add_table(Report& r, const pcq::JointDist& d, std::size_t cap = 60) {
  const std::size_t qm = std::min(d.qmax(), cap);
  const std::size_t jm = std::min(d.jmax(), cap);
  std::vector<double> flat;
  flat.reserve((qm + 1) * (jm + 1));
  for (std::size_t i = 0; i <= qm; ++i)
    for (std::size_t j = 0; j <= jm; ++j) flat.push_back(d.at(i, j));
  r.arrays.push_back({"pi_table_rows_" + std::to_string(qm + 1) + "x" +
                          std::to_string(jm + 1),
                      std::move(flat)});
}

int cmd_solve(const Options& o) {
  const pcq::ModelParams p = to_params(o);
  Report r;
  echo_runspec(r, o, "solve");
  switch (p.variant) {
    case pcq::Variant::ControllerInfinite: {
      const pcq::SigmaVector sv = pcq::sigma_solve(p, 0, o.tol * 0.1);
      const pcq::JointDist d = pcq::assemble_joint(p, sv, o.qmax);
      double eq = 0.0;
      for (std::size_t j = 0; j < sv.sigma.size(); ++j)
        eq += sv.sigma[j] * pcq::cond_mean(p, static_cast<unsigned>(j));
      double es = 0.0;
      for (std::size_t j = 0; j < sv.sigma.size(); ++j) es += j * sv.sigma[j];
      r.scalars = {{"EQ", eq},
                   {"ES", es},
                   {"P0", d.queue_marginal()[0]},
                   {"mass_deficit", d.mass_deficit()},
                   {"sigma_residual", sv.residual}};
      r.arrays.push_back({"speed_marginal", sv.sigma});
      r.arrays.push_back({"queue_marginal", d.queue_marginal()});
      add_table(r, d);
      for (auto [x, y] : kPgfGrid)
        r.pgf.push_back({x, y, pcq::pgf_eval(d, x, y).value});
      break;
    }
    case pcq::Variant::ControllerFinite: {
      const pcq::QbdSolution sol = pcq::solve_boundary(p);
      const pcq::JointDist d = sol.to_joint(o.qmax);
      r.scalars = {{"EQ", sol.mean_queue()},
                   {"ES", sol.mean_speed()},
                   {"P0", sol.level(0).sum()},
                   {"pi00", sol.level(0)(0)},
                   {"mass_deficit", d.mass_deficit()}};
      r.arrays.push_back({"speed_marginal", sol.speed_marginal()});
      r.arrays.push_back({"queue_marginal", d.queue_marginal()});
      add_table(r, d);
      for (auto [x, y] : kPgfGrid)
        r.pgf.push_back({x, y, pcq::qbd_to_pgf(sol, x, y)});
      break;
    }
    case pcq::Variant::ObserverMM1: {
      const pcq::Mm1ObserverForm f = pcq::mm1_observer_form(p);
      const pcq::JointDist d = pcq::mm1_obs_joint(p, o.qmax, o.qmax);
      const double rho = p.rho();
      r.scalars = {{"EQ", rho / (1.0 - rho)},
                   {"ES", rho / (1.0 - rho)},
                   {"P0", 1.0 - rho},
                   {"mass_deficit", d.mass_deficit()}};
      r.arrays.push_back({"queue_marginal", d.queue_marginal()});
      add_table(r, d);
      for (auto [x, y] : kPgfGrid) r.pgf.push_back({x, y, pcq::mm1_obs_pgf(f, x, y)});
      break;
    }
    case pcq::Variant::ObserverMMInf: {
      const pcq::MmInfObserverForm f = pcq::mminf_observer_form(p);
      const double rho = p.rho();
      r.scalars = {{"EQ", rho}, {"ES", rho}, {"P0", std::exp(-rho)}};
      for (auto [x, y] : kPgfGrid)
        r.pgf.push_back({x, y, pcq::mminf_obs_pgf(f, x, y)});
      break;
    }
  }
  write_report(o, r);
  return 0;
}

int cmd_validate(const Options& o) {
  const pcq::ModelParams p = to_params(o);
  Report r;
  echo_runspec(r, o, "validate");
  auto add = [&](const std::string& name, double value, double tol) {
    r.checks.push_back({name, value, tol, value < tol});
  };
  const std::size_t oq = std::min<std::size_t>(o.qmax, 80);
  const double oracle_tol = std::max(o.tol, 1e-8);

  switch (p.variant) {
    case pcq::Variant::ControllerInfinite: {
      const pcq::SigmaVector sv = pcq::sigma_solve(p);
      const pcq::JointDist d = pcq::assemble_joint(p, sv, oq);
      const pcq::JointDist od = pcq::stationary(pcq::build_chain(p, oq, oq));
      double maxdev = 0.0;
      for (std::size_t i = 0; i + 20 <= oq; ++i)
        for (std::size_t j = 0; j + 20 <= oq; ++j)
          maxdev = std::max(maxdev, std::abs(d.at(i, j) - od.at(i, j)));
      add("joint_vs_oracle", maxdev, std::max(oracle_tol, 1e-6));
      const auto gam = d.queue_marginal();
      const auto sig = d.speed_marginal();
      double margdev = 0.0;
      for (std::size_t k = 0; k + 20 <= oq; ++k)
        margdev = std::max(margdev, std::abs(gam[k] - sig[k]));
      add("marginal_equality", margdev, 1e-6);
      add("functional_eq_residual",
          pcq::functional_eq_residual(d, p, kPgfGrid), 1e-6);
      break;
    }
    case pcq::Variant::ControllerFinite: {
      const pcq::QbdSolution sol = pcq::solve_boundary(p);
      const pcq::JointDist od =
          pcq::stationary(pcq::build_chain(p, o.qmax, *p.smax));
      double maxdev = 0.0;
      for (std::size_t n = 0; n + 20 <= od.qmax(); ++n) {
        const Eigen::RowVectorXd pin = sol.level(n);
        for (unsigned j = 0; j <= *p.smax; ++j)
          maxdev = std::max(maxdev, std::abs(pin(j) - od.at(n, j)));
      }
      add("qbd_vs_oracle", maxdev, oracle_tol);
      // the recorded speed is a stationary sample of min(Q, smax)
      const auto sig = sol.speed_marginal();
      const auto gam = od.queue_marginal();
      double margdev = 0.0;
      for (unsigned j = 0; j <= *p.smax; ++j) {
        double g = 0.0;
        if (j < *p.smax) {
          g = gam[j];
        } else {
          for (std::size_t q = j; q < gam.size(); ++q) g += gam[q];
        }
        margdev = std::max(margdev, std::abs(sig[j] - g));
      }
      add("clamped_marginal_equality", margdev, std::max(oracle_tol, 1e-6));
      break;
    }
    case pcq::Variant::ObserverMM1: {
      const pcq::JointDist d = pcq::mm1_obs_joint(p, oq, oq);
      const pcq::JointDist od = pcq::stationary(pcq::build_chain(p, oq, oq));
      double maxdev = 0.0;
      for (std::size_t i = 0; i + 20 <= oq; ++i)
        for (std::size_t j = 0; j + 20 <= oq; ++j)
          maxdev = std::max(maxdev, std::abs(d.at(i, j) - od.at(i, j)));
      add("joint_vs_oracle", maxdev, oracle_tol);
      const pcq::Mm1ObserverForm f = pcq::mm1_observer_form(p);
      double res = 0.0;
      for (auto [x, y] : kPgfGrid)
        res = std::max(res, std::abs(pcq::mm1_obs_residual(f, x, y)));
      add("functional_eq_residual", res, 1e-9);
      break;
    }
    case pcq::Variant::ObserverMMInf: {
      const pcq::MmInfObserverForm f = pcq::mminf_observer_form(p);
      double si = 0.0, res = 0.0;
      for (auto [x, y] : kPgfGrid) {
        si = std::max(si, std::abs(pcq::mminf_obs_pgf(f, x, y) -
                                   pcq::mminf_obs_pgf_integral(p, x, y)));
        res = std::max(res, std::abs(pcq::mminf_obs_residual(f, x, y)));
      }
      add("series_vs_integral", si, 1e-10);
      add("functional_eq_residual", res, 1e-9);
      const std::size_t t = std::min<std::size_t>(oq, 40);
      const pcq::JointDist od = pcq::stationary(pcq::build_chain(p, t, t));
      double pg = 0.0;
      for (auto [x, y] : kPgfGrid)
        pg = std::max(pg, std::abs(pcq::pgf_eval(od, x, y).value -
                                   pcq::mminf_obs_pgf(f, x, y)));
      add("pgf_vs_oracle", pg, oracle_tol);
      break;
    }
  }
  bool ok = true;
  for (const auto& c : r.checks) ok = ok && c.pass;
  write_report(o, r);
  return ok ? 0 : 5;
}

std::vector<double> parse_nu_range(const std::string& s) {
  double a = 0.1, b = 100.0;
  int steps = 13;
  if (!s.empty()) {
    char colon1 = 0, colon2 = 0;
    std::istringstream is(s);
    if (!(is >> a >> colon1 >> b >> colon2 >> steps) || colon1 != ':' ||
        colon2 != ':' || a <= 0.0 || b < a || steps < 2)
      throw pcq::DomainError("--nu-range must be a:b:steps with 0 < a <= b");
  }
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i)
    out[i] = a * std::pow(b / a, static_cast<double>(i) / (steps - 1));
  return out;
}

int cmd_sweep(const Options& o) {
  const pcq::ModelParams base = to_params(o);
  if (base.variant != pcq::Variant::ControllerFinite)
    throw pcq::DomainError("sweep requires --variant finite");
  const std::vector<double> nus = parse_nu_range(o.nu_range);
  std::vector<std::future<std::array<double, 5>>> tasks;
  for (double nu : nus)
    tasks.push_back(std::async(std::launch::async, [base, nu] {
      pcq::ModelParams p = base;
      p.nu = nu;
      const pcq::QbdSolution sol = pcq::solve_boundary(p);
      return std::array<double, 5>{nu, sol.mean_queue(), sol.mean_speed(), 0.0,
                                   0.0};
    }));
  Report r;
  echo_runspec(r, o, "sweep");
  for (auto& t : tasks) r.sweep.push_back(t.get());
  write_report(o, r);
  return 0;
}

int cmd_simulate(const Options& o) {
  pcq::SimConfig cfg;
  cfg.params = to_params(o, /*allow_unstable=*/true);
  cfg.horizon = o.horizon;
  cfg.seed = o.seed;
  Report r;
  echo_runspec(r, o, "simulate");
  auto add_est = [&](const pcq::SimEstimate& e) {
    r.scalars.push_back({e.name, e.point});
    r.scalars.push_back({e.name + "_ci95", e.half_width});
  };
  if (o.probe == "conjecture") {
    cfg.scaled = true;
    const pcq::ConjectureProbe pr = pcq::conjecture_probe(cfg, kPgfGrid);
    add_est(pr.frac_q_axis);
    add_est(pr.frac_s_axis);
    add_est(pr.mean_scaled_q);
    add_est(pr.mean_scaled_s);
    for (const auto& [xy, e] : pr.pgf_samples)
      r.pgf.push_back({xy.first, xy.second, e.point});
  } else if (o.probe == "fluid") {
    const pcq::FluidProbe pr = pcq::fluid_probe(cfg);
    r.scalars = {{"frac_fluid_unstable", pr.frac_fluid_unstable},
                 {"frac_fluid_stable", pr.frac_fluid_stable},
                 {"frac_normal", pr.frac_normal},
                 {"threshold", pr.threshold}};
    r.arrays.push_back({"occupancy", pr.occupancy});
    r.arrays.push_back({"drain_time_mean", pr.drain_time_mean});
  } else if (o.probe.empty()) {
    const pcq::SimResult res = pcq::simulate(cfg);
    for (const auto& e : res.estimates) add_est(e);
    r.scalars.push_back({"events", static_cast<double>(res.events)});
    r.arrays.push_back({"queue_marginal", res.empirical.queue_marginal()});
  } else {
    throw pcq::DomainError("unknown probe: " + o.probe);
  }
  write_report(o, r);
  return 0;
}

} // namespace

// Flat key=value config file, same keys as the long flags; applied before
// flag parsing so that flags win (flags > config file > defaults).
void apply_config(const std::string& path, Options& o) {
  std::ifstream f(path);
  if (!f) throw pcq::IoError("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::size_t h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw pcq::DomainError(path + ":" + std::to_string(lineno) +
                             ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "variant") o.variant = val;
      else if (key == "lambda") o.lambda = std::stod(val);
      else if (key == "mu") o.mu = std::stod(val);
      else if (key == "nu") o.nu = std::stod(val);
      else if (key == "smax") o.smax = std::stoi(val);
      else if (key == "qmax") o.qmax = std::stoul(val);
      else if (key == "tol") o.tol = std::stod(val);
      else if (key == "seed") o.seed = std::stoull(val);
      else if (key == "format") o.format = val;
      else if (key == "out") o.out = val;
      else if (key == "probe") o.probe = val;
      else if (key == "nu-range" || key == "nu_range") o.nu_range = val;
      else if (key == "horizon") o.horizon = std::stod(val);
      else
        throw pcq::DomainError(path + ": unknown config key " + key);
    } catch (const std::invalid_argument&) {
      throw pcq::DomainError(path + ":" + std::to_string(lineno) +
                             ": bad value for " + key);
    }
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Poisson-controller queue toolkit"};
  app.require_subcommand(1);
  Options o;
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  if (!config_path.empty()) {
    try {
      apply_config(config_path, o);
    } catch (const pcq::IoError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 4;
    } catch (const pcq::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  std::string cmd;
  for (const char* name : {"solve", "validate", "sweep", "simulate"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--variant", o.variant,
                    "infinite | finite | observer-mm1 | observer-mminf");
    sub->add_option("--lambda", o.lambda, "arrival rate");
    sub->add_option("--mu", o.mu, "per-server service rate");
    sub->add_option("--nu", o.nu, "control / observation rate");
    sub->add_option("--smax", o.smax, "max speed (finite variant)");
    sub->add_option("--qmax", o.qmax, "table / oracle truncation");
    sub->add_option("--tol", o.tol, "validation tolerance");
    sub->add_option("--seed", o.seed, "simulation seed");
    sub->add_option("--format", o.format)
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--probe", o.probe)
        ->check(CLI::IsMember({"conjecture", "fluid"}));
    sub->add_option("--nu-range", o.nu_range, "a:b:steps, log spaced");
    sub->add_option("--horizon", o.horizon, "simulated time");
    // applied before parsing; registered here so --help lists it
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->callback([&cmd, name] { cmd = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (cmd == "solve") return cmd_solve(o);
    if (cmd == "validate") return cmd_validate(o);
    if (cmd == "sweep") return cmd_sweep(o);
    return cmd_simulate(o);
  } catch (const pcq::NoConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pcq::TruncationTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pcq::SingularSystem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pcq::SingularBoundary& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pcq::QuadratureFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pcq::BoundarySpeed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const pcq::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const pcq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
