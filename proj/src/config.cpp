#include "quasistat/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace quasistat {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + key + "' expects a finite number, got '" + value + "'");
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + value + "'");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  bool a_set = false;
  bool b_set = false;
  bool d0_set = false;
  bool seeds_set = false;
  std::string line;
  int line_no = 0;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto real = [](double& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); };
  };
  auto integer = [](int& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_int(k, v); };
  };
  auto flag = [](bool& field) -> Setter {
    return [&field](const std::string& k, const std::string& v) { field = to_bool(k, v); };
  };

  // L0 and mg are shared by both models.
  const std::map<std::string, Setter> setters{
      {"system",
       [&](const std::string&, const std::string& v) {
         if (v == "linear-pendulum") {
           cfg.system = SystemKind::LinearPendulum;
         } else if (v == "contact-pendulum") {
           cfg.system = SystemKind::ContactPendulum;
         } else {
           throw ConfigError("config: unknown system '" + v + "'");
         }
       }},
      {"L0",
       [&](const std::string& k, const std::string& v) {
         cfg.linear.L0 = cfg.contact.L0 = to_double(k, v);
       }},
      {"mg",
       [&](const std::string& k, const std::string& v) {
         cfg.linear.mg = cfg.contact.mg = to_double(k, v);
       }},
      {"k_c", real(cfg.linear.k_c)},
      {"W0", real(cfg.contact.W0)},
      {"k_min", real(cfg.contact.k_min)},
      {"k_max", real(cfg.contact.k_max)},
      {"eps", real(cfg.contact.eps)},
      {"d0",
       [&](const std::string& k, const std::string& v) {
         cfg.contact.d0 = to_double(k, v);
         d0_set = true;
       }},
      {"a",
       [&](const std::string& k, const std::string& v) {
         cfg.contact.a = to_double(k, v);
         a_set = true;
       }},
      {"b",
       [&](const std::string& k, const std::string& v) {
         cfg.contact.b = to_double(k, v);
         b_set = true;
       }},
      {"ux_min", real(cfg.bounds[0].lo)},
      {"ux_max", real(cfg.bounds[0].hi)},
      {"uy_min", real(cfg.bounds[1].lo)},
      {"uy_max", real(cfg.bounds[1].hi)},
      {"grid",
       [&](const std::string&, const std::string& v) { cfg.grid = parse_grid(v); }},
      {"nx", integer(cfg.grid[0])},
      {"ny", integer(cfg.grid[1])},
      {"diagonals", flag(cfg.diagonals)},
      {"tol", real(cfg.lift.solver.tol)},
      {"max_iter", integer(cfg.lift.solver.max_iter)},
      {"seeds",
       [&](const std::string& k, const std::string& v) {
         cfg.lift.solver.seed_count = to_int(k, v);
         seeds_set = true;
       }},
      {"crit_threshold", real(cfg.lift.solver.crit_threshold)},
      {"dedup_radius", real(cfg.lift.solver.dedup_radius)},
      {"match_threshold", real(cfg.lift.match_threshold)},
      {"match_factor", real(cfg.lift.match_factor)},
      {"symmetric_weights", flag(cfg.lift.symmetric_weights)},
      {"keep_unstable", flag(cfg.lift.keep_unstable)},
      {"switch_penalty", real(cfg.switch_penalty)},
      {"out", [&](const std::string&, const std::string& v) { cfg.out_dir = v; }},
      {"alpha1", real(cfg.alpha1)},
      {"alpha2", real(cfg.alpha2)},
      {"lambda1", real(cfg.lambda1)},
      {"lambda2", real(cfg.lambda2)},
      {"samples", integer(cfg.samples)},
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    it->second(key, value);
  }

  if (!a_set) cfg.contact.a = 0.5 * cfg.contact.L0;
  if (!b_set) cfg.contact.b = 0.5 * cfg.contact.W0;
  if (!d0_set) cfg.contact.d0 = 0.05 * cfg.contact.L0;
  if (!seeds_set) {
    cfg.lift.solver.seed_count =
        cfg.system == SystemKind::ContactPendulum ? kContactSeedCount : SolverOptions{}.seed_count;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::array<int, 2> parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw ConfigError("grid must look like NxM, got '" + text + "'");
  return {to_int("grid", trim(text.substr(0, x))), to_int("grid", trim(text.substr(x + 1)))};
}

void validate(const RunConfig& config) {
  // Constructing the system runs the model-level checks.
  (void)make_system(config);
  for (int d = 0; d < 2; ++d) {
    if (config.grid[d] < 1) throw ConfigError("grid resolution must be >= 1");
    if (config.grid[d] > 1 && !(config.bounds[d].lo < config.bounds[d].hi)) {
      throw ConfigError("grid bounds need lo < hi");
    }
  }
  const auto& s = config.lift.solver;
  if (!(s.tol > 0.0) || s.max_iter < 1 || s.seed_count < 1 || !(s.crit_threshold > 0.0) ||
      !(s.dedup_radius > 0.0)) {
    throw ConfigError("solver settings need tol > 0, max_iter >= 1, seeds >= 1, "
                      "crit_threshold > 0, dedup_radius > 0");
  }
  if (!(config.lift.match_factor > 0.0) || config.lift.match_threshold < 0.0) {
    throw ConfigError("match_factor must be positive and match_threshold nonnegative");
  }
  if (config.switch_penalty < 0.0) throw ConfigError("switch_penalty must be nonnegative");
  if (config.samples < 2) throw ConfigError("samples must be >= 2");
}

std::unique_ptr<PotentialSystem> make_system(const RunConfig& config) {
  switch (config.system) {
    case SystemKind::LinearPendulum:
      return std::make_unique<pendulum::LinearSpringPendulum>(config.linear);
    case SystemKind::ContactPendulum:
      return std::make_unique<pendulum::ContactPendulum>(config.contact);
  }
  throw ConfigError("unknown system");
}

}  // namespace quasistat
