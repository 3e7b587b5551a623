#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>

#include "chvi/app/commands.hpp"
#include "chvi/bridges.hpp"

namespace chvi::app {
namespace {

void validate_levels(const RunConfig& cfg) {
  const auto& f = cfg.levels;
  if (f.size() < 3) {
    throw Error(ErrorKind::InvalidArgument,
                "levels: a convergence study needs at least 3 levels, got " + std::to_string(f.size()));
  }
  for (std::size_t l = 0; l < f.size(); ++l) {
    if (f[l] <= 0) throw Error(ErrorKind::InvalidArgument, "levels: factors must be positive");
    if (l > 0 && (f[l] <= f[l - 1] || f[l] % f[l - 1] != 0)) {
      throw Error(ErrorKind::InvalidArgument,
                  "levels: each factor must be a strictly larger multiple of the previous one");
    }
  }
  if (cfg.n_steps < 5) throw Error(ErrorKind::InvalidArgument, "n_steps: a convergence study needs >= 5");
}

LevelResult run_level(RunConfig cfg, int factor) {
  cfg.n_space *= factor;
  cfg.n_steps *= factor;
  const GridSpec g = cfg.grid();
  LevelResult out;
  out.factor = factor;
  out.n_space = cfg.n_space;
  out.n_steps = cfg.n_steps;
  out.h = g.h();
  out.k = g.k();
  out.final_time = g.t(cfg.n_steps);

  EvolveResult ev = evolve(initialize(cfg.initial.velocity(cfg.domain_length), g), cfg.n_steps, cfg.solver);
  for (const auto& s : ev.stats) out.max_newton_iterations = std::max(out.max_newton_iterations, s.iterations);
  out.failure = ev.failure;
  if (!ev.ok()) return out;

  const Section& phi = ev.trajectory;
  const auto row = phi.row(cfg.n_steps);
  out.final_row.assign(row.begin(), row.end());
  try {
    out.conservation_residual = max_abs(conservation_residual(phase_field(phi)));
    out.continuous_el_residual = max_abs(continuous_el_residual(phi));
  } catch (const Error&) {
    // Reported as missing; the eta errors do not depend on it.
  }
  return out;
}

std::optional<double> observed_order(double coarse, double fine, double ratio, double zero) {
  if (coarse <= zero || fine <= zero) return std::nullopt;
  return std::log(coarse / fine) / std::log(ratio);
}

Json order_json(const std::optional<double>& o) { return o ? Json(*o) : Json("exact"); }

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

std::string order_text(const std::optional<double>& o) {
  if (!o) return "exact";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *o);
  return buf;
}

}  // namespace

double machine_zero_threshold(double domain_length) { return 1e-12 * std::max(1.0, domain_length); }

ConvergenceTable convergence_study(const RunConfig& cfg) {
  cfg.validate();
  validate_levels(cfg);

  std::vector<std::future<LevelResult>> jobs;
  for (int f : cfg.levels) jobs.push_back(std::async(std::launch::async, run_level, cfg, f));
  ConvergenceTable t;
  for (auto& j : jobs) t.levels.push_back(j.get());

  // The table stops at the first level that failed.
  std::size_t usable = 0;
  while (usable < t.levels.size() && !t.levels[usable].failure) ++usable;
  t.aborted = usable < t.levels.size();
  if (t.aborted) t.levels.resize(usable + 1);

  const double zero = machine_zero_threshold(cfg.domain_length);
  for (std::size_t l = 0; l + 1 < usable; ++l) {
    const LevelResult& c = t.levels[l];
    const LevelResult& f = t.levels[l + 1];
    const int r = f.factor / c.factor;
    double e = 0.0;
    for (int i = 0; i < c.n_space; ++i) e = std::max(e, std::abs(c.final_row[i] - f.final_row[i * r]));
    t.eta_errors.push_back(e);
  }
  for (std::size_t l = 0; l + 1 < t.eta_errors.size(); ++l) {
    const double ratio = double(t.levels[l + 1].factor) / t.levels[l].factor;
    t.eta_orders.push_back(observed_order(t.eta_errors[l], t.eta_errors[l + 1], ratio, zero));
  }
  for (std::size_t l = 0; l + 1 < usable; ++l) {
    const LevelResult& c = t.levels[l];
    const LevelResult& f = t.levels[l + 1];
    const double ratio = double(f.factor) / c.factor;
    // The residuals are difference quotients with roundoff growing like 1/(h k).
    const double zero_residual = zero / (f.h * f.k);
    auto order = [&](const std::optional<double>& a, const std::optional<double>& b) -> std::optional<double> {
      if (!a || !b) return std::nullopt;
      return observed_order(*a, *b, ratio, zero_residual);
    };
    t.conservation_orders.push_back(order(c.conservation_residual, f.conservation_residual));
    t.el_orders.push_back(order(c.continuous_el_residual, f.continuous_el_residual));
  }
  return t;
}

Json ConvergenceTable::to_json() const {
  Json doc = Json::object();
  doc.set("status", aborted ? "aborted" : "completed");
  Json lv = Json::array();
  for (const auto& l : levels) {
    Json o = Json::object();
    o.set("factor", l.factor);
    o.set("n_space", l.n_space);
    o.set("n_steps", l.n_steps);
    o.set("h", l.h);
    o.set("k", l.k);
    o.set("final_time", l.final_time);
    o.set("max_newton_iterations", l.max_newton_iterations);
    o.set("conservation_residual", opt_json(l.conservation_residual));
    o.set("continuous_el_residual", opt_json(l.continuous_el_residual));
    o.set("failure", failure_json(l.failure));
    lv.push(std::move(o));
  }
  doc.set("levels", std::move(lv));
  Json e = Json::array();
  for (double v : eta_errors) e.push(v);
  doc.set("eta_errors", std::move(e));
  auto orders = [](const std::vector<std::optional<double>>& v) {
    Json a = Json::array();
    for (const auto& o : v) a.push(order_json(o));
    return a;
  };
  doc.set("eta_orders", orders(eta_orders));
  doc.set("conservation_residual_orders", orders(conservation_orders));
  doc.set("continuous_el_residual_orders", orders(el_orders));
  return doc;
}

int converge(const RunConfig& cfg, std::ostream& log) {
  std::optional<ConvergenceTable> t;
  try {
    t = convergence_study(cfg);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidArgument ? kExitConfig : kExitSolverAbort;
  }

  char line[256];
  std::snprintf(line, sizeof line, "%6s %8s %8s %14s %8s %14s %8s %14s %8s\n", "factor", "N", "steps", "eta_error",
                "order", "conservation", "order", "el_residual", "order");
  log << line;
  for (std::size_t l = 0; l < t->levels.size(); ++l) {
    const LevelResult& lv = t->levels[l];
    auto num = [](const std::optional<double>& v) {
      char b[32];
      if (!v) return std::string("-");
      std::snprintf(b, sizeof b, "%.6e", *v);
      return std::string(b);
    };
    auto ord = [&](const std::vector<std::optional<double>>& v, std::size_t idx) {
      return idx < v.size() ? order_text(v[idx]) : std::string("-");
    };
    const std::optional<double> err =
        l < t->eta_errors.size() ? std::optional<double>(t->eta_errors[l]) : std::nullopt;
    // Orders compare entry l with entry l+1.
    std::snprintf(line, sizeof line, "%6d %8d %8d %14s %8s %14s %8s %14s %8s\n", lv.factor, lv.n_space, lv.n_steps,
                  num(err).c_str(), ord(t->eta_orders, l).c_str(), num(lv.conservation_residual).c_str(),
                  ord(t->conservation_orders, l).c_str(), num(lv.continuous_el_residual).c_str(),
                  ord(t->el_orders, l).c_str());
    log << line;
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  const fs::path path = fs::path(cfg.out_dir) / "converge.json";
  std::ofstream out(path);
  out << t->to_json().dump();
  if (!out) {
    log << "error: cannot write " << path.string() << '\n';
    return kExitIo;
  }
  if (t->aborted) {
    const LevelResult& bad = t->levels.back();
    log << "aborted: level factor " << bad.factor << " failed at step " << bad.failure->step << ": "
        << bad.failure->message << '\n';
    return kExitSolverAbort;
  }
  return kExitOk;
}

}  // namespace chvi::app
