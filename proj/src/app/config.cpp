#include "chvi/app/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chvi/error.hpp"

namespace chvi::app {
namespace {

[[noreturn]] void config_error(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::InvalidArgument, field + ": " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& field, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) config_error(field, "not a finite number: '" + v + "'");
    return d;
  } catch (const std::logic_error&) {
    config_error(field, "not a number: '" + v + "'");
  }
}

long long to_integer(const std::string& field, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long n = std::stoll(v, &pos);
    if (pos != v.size()) config_error(field, "not an integer: '" + v + "'");
    return n;
  } catch (const std::logic_error&) {
    config_error(field, "not an integer: '" + v + "'");
  }
}

int to_int(const std::string& field, const std::string& v) { return static_cast<int>(to_integer(field, v)); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

InitialCondition InitialCondition::parse(const std::string& text) {
  const std::string t = trim(text);
  const auto colon = t.find(':');
  const std::string name = t.substr(0, colon);
  const std::string args = colon == std::string::npos ? std::string{} : t.substr(colon + 1);
  InitialCondition ic;
  if (name == "rest") {
    if (!args.empty()) config_error("ic", "rest takes no parameters");
    ic.kind = InitialKind::Rest;
  } else if (name == "uniform") {
    ic.kind = InitialKind::Uniform;
    ic.amplitude = to_double("ic", args);
  } else if (name == "cosine") {
    ic.kind = InitialKind::Cosine;
    ic.amplitude = to_double("ic", args);
  } else if (name == "gaussian_bump") {
    const auto parts = split(args, ',');
    if (parts.size() != 2) config_error("ic", "gaussian_bump needs amplitude,width");
    ic.kind = InitialKind::GaussianBump;
    ic.amplitude = to_double("ic", parts[0]);
    ic.width = to_double("ic", parts[1]);
    if (!(ic.width > 0.0)) config_error("ic", "gaussian_bump width must be positive");
  } else {
    config_error("ic", "unknown initial condition '" + t + "' (rest, uniform:c, cosine:a, gaussian_bump:a,w)");
  }
  return ic;
}

std::string InitialCondition::to_string() const {
  switch (kind) {
    case InitialKind::Rest: return "rest";
    case InitialKind::Uniform: return "uniform:" + fmt(amplitude);
    case InitialKind::Cosine: return "cosine:" + fmt(amplitude);
    case InitialKind::GaussianBump: return "gaussian_bump:" + fmt(amplitude) + "," + fmt(width);
  }
  return "rest";
}

std::function<double(double)> InitialCondition::velocity(double length) const {
  const double a = amplitude;
  const double w = width;
  switch (kind) {
    case InitialKind::Rest: return [](double) { return 0.0; };
    case InitialKind::Uniform: return [a](double) { return a; };
    case InitialKind::Cosine:
      return [a, length](double x) { return a * std::cos(2.0 * M_PI * x / length); };
    case InitialKind::GaussianBump:
      // Centered at length/2; sampled on [0, length) only, so no image sum.
      return [a, w, length](double x) {
        const double d = (x - 0.5 * length) / w;
        return a * std::exp(-d * d);
      };
  }
  return [](double) { return 0.0; };
}

Diagnostics Diagnostics::parse(const std::string& text) {
  Diagnostics d{false, false, false};
  const std::string t = trim(text);
  if (t == "all") return Diagnostics{};
  if (t == "none" || t.empty()) return d;
  for (const auto& item : split(t, ',')) {
    if (item == "noether") {
      d.noether = true;
    } else if (item == "mff") {
      d.mff = true;
    } else if (item == "bridges") {
      d.bridges = true;
    } else {
      config_error("diagnostics", "unknown diagnostic '" + item + "' (noether, mff, bridges, all, none)");
    }
  }
  return d;
}

std::string Diagnostics::to_string() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(noether, "noether");
  add(mff, "mff");
  add(bridges, "bridges");
  return out.empty() ? "none" : out;
}

GridSpec RunConfig::grid() const {
  const double h = domain_length / n_space;
  return GridSpec::make(n_space, 2, domain_length, cfl * h);
}

void RunConfig::validate() const {
  if (n_space < 3) config_error("n_space", "must be >= 3");
  if (n_steps < 0) config_error("n_steps", "must be >= 0");
  if (!(domain_length > 0.0)) config_error("domain_length", "must be positive");
  if (!(cfl > 0.0)) config_error("cfl", "must be positive");
  if (save_every <= 0) config_error("save_every", "must be positive");
  if (window <= 0) config_error("window", "must be positive");
  if (perturb < 0.0) config_error("perturb", "must be >= 0");
  try {
    solver.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidArgument, e.what());
  }
  try {
    initialize(initial.velocity(domain_length), grid());
  } catch (const Error& e) {
    config_error("ic", std::string(e.what()));
  }
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error("line " + std::to_string(lineno), "expected 'key = value'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, v] : kv) {
    if (key == "n_space") {
      cfg.n_space = to_int(key, v);
    } else if (key == "n_steps") {
      cfg.n_steps = to_int(key, v);
    } else if (key == "domain_length") {
      cfg.domain_length = to_double(key, v);
    } else if (key == "cfl") {
      cfg.cfl = to_double(key, v);
    } else if (key == "ic") {
      cfg.initial = InitialCondition::parse(v);
    } else if (key == "out_dir") {
      cfg.out_dir = v;
    } else if (key == "save_every") {
      cfg.save_every = to_int(key, v);
    } else if (key == "diagnostics") {
      cfg.diagnostics = Diagnostics::parse(v);
    } else if (key == "window") {
      cfg.window = to_int(key, v);
    } else if (key == "seed") {
      cfg.seed = static_cast<unsigned long long>(to_integer(key, v));
    } else if (key == "perturb") {
      cfg.perturb = to_double(key, v);
    } else if (key == "levels") {
      cfg.levels.clear();
      for (const auto& item : split(v, ',')) cfg.levels.push_back(to_int(key, item));
    } else if (key == "tol_residual") {
      cfg.solver.tol_residual = to_double(key, v);
    } else if (key == "scale_tolerance") {
      if (v != "true" && v != "false") config_error(key, "expected true or false");
      cfg.solver.scale_tolerance = (v == "true");
    } else if (key == "max_iters") {
      cfg.solver.max_iters = to_int(key, v);
    } else if (key == "damping") {
      cfg.solver.damping = to_double(key, v);
    } else if (key == "max_backtracks") {
      cfg.solver.max_backtracks = to_int(key, v);
    } else {
      config_error(key, "unknown configuration key");
    }
  }
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("config", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg;
  apply_settings(cfg, parse_key_values(buf.str()));
  return cfg;
}

}  // namespace chvi::app
