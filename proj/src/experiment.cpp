#include "fsmacwt/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fsmacwt/csv.hpp"
#include "fsmacwt/errors.hpp"
#include "fsmacwt/monte_carlo.hpp"

namespace fsmacwt {

namespace {

namespace pt = boost::property_tree;

void log_info(const std::string& msg) { std::clog << "info: " << msg << '\n'; }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("'" + key + "': '" + s + "' is not a number");
  return v;
}

std::int64_t to_int(const std::string& key, const std::string& s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("'" + key + "': '" + s + "' is not an integer");
  return v;
}

std::size_t to_size(const std::string& key, const std::string& s) {
  const auto v = to_int(key, s);
  if (v < 0) throw ConfigError("'" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("'" + key + "': '" + s + "' is not a boolean");
}

std::vector<double> to_doubles(const std::string& key, const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(to_double(key, item));
  return out;
}

// Flat view over one INI file with strict key checking.
class Sections {
public:
  explicit Sections(const pt::ptree& tree) {
    static const std::map<std::string, std::set<std::string>> allowed = {
        {"channel", {"labels", "h1", "h2", "h3", "sigma_s2", "sigma_w2"}},
        {"chain", {"model", "g", "b", "u", "c", "columns"}},
        {"delays", {"d1", "d2"}},
        {"budget", {"p1", "p2"}},
        {"optimizer", {"grid_levels", "refine_iters", "tol", "seed", "max_grid_points"}},
        {"sweep", {"delays", "mode", "kinds", "allocation"}},
        {"region", {"kinds", "weight_count", "angle_samples", "variant", "pool"}},
        {"discrete",
         {"model", "crossover", "eve_crossover", "x1_size", "x2_size", "y_size", "z_size", "kernel", "degraded",
          "bounds", "q_size", "starts", "refine_iters", "optimize"}},
        {"policy", {"q_size", "q_given", "x1_given", "x2_given"}},
        {"validate", {"samples", "tolerance"}},
    };
    for (const auto& [section, body] : tree) {
      const auto it = allowed.find(section);
      if (it == allowed.end()) throw ConfigError("unknown section [" + section + "]");
      if (!body.data().empty() && body.empty()) throw ConfigError("entry '" + section + "' outside any section");
      for (const auto& [key, value] : body) {
        if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
        values_[section + "." + key] = trim(value.data());
      }
    }
  }

  bool has(const std::string& k) const { return values_.count(k) > 0; }
  bool has_section(const std::string& s) const {
    const auto prefix = s + ".";
    return std::any_of(values_.begin(), values_.end(), [&](const auto& kv) { return kv.first.rfind(prefix, 0) == 0; });
  }
  const std::string& get(const std::string& k) const {
    const auto it = values_.find(k);
    if (it == values_.end()) throw ConfigError("missing key '" + k + "'");
    return it->second;
  }

  double num(const std::string& k, double dflt) const { return has(k) ? to_double(k, get(k)) : dflt; }
  std::int64_t integer(const std::string& k, std::int64_t dflt) const { return has(k) ? to_int(k, get(k)) : dflt; }
  std::size_t size(const std::string& k, std::size_t dflt) const { return has(k) ? to_size(k, get(k)) : dflt; }
  bool flag(const std::string& k, bool dflt) const { return has(k) ? to_bool(k, get(k)) : dflt; }
  std::vector<double> list(const std::string& k) const { return to_doubles(k, get(k)); }

private:
  std::map<std::string, std::string> values_;
};

std::string num_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_nums(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += num_str(v[i]);
  }
  return out;
}

template <typename T, typename F>
std::string join_with(const std::vector<T>& v, F f, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += f(v[i]);
  }
  return out;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw GuardError(std::string("non-finite value in ") + what);
}

void require_finite(const RegionBounds& rb, const char* what) {
  require_finite(rb.a, what);
  require_finite(rb.b, what);
  require_finite(rb.c, what);
}

std::vector<double> flatten_states(const std::vector<FadingState>& st, double FadingState::*field) {
  std::vector<double> out;
  for (const auto& s : st) out.push_back(s.*field);
  return out;
}

}  // namespace

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  auto same_states = [](const std::vector<FadingState>& x, const std::vector<FadingState>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].h1 != y[i].h1 || x[i].h2 != y[i].h2 || x[i].h3 != y[i].h3 || x[i].sigma_s2 != y[i].sigma_s2)
        return false;
    }
    return true;
  };
  const auto& oa = a.optimizer;
  const auto& ob = b.optimizer;
  return a.has_channel == b.has_channel && a.labels == b.labels && same_states(a.states, b.states) &&
         a.sigma_w2 == b.sigma_w2 && a.chain == b.chain && a.d1 == b.d1 && a.d2 == b.d2 &&
         a.budget.p1 == b.budget.p1 && a.budget.p2 == b.budget.p2 && oa.grid_levels == ob.grid_levels &&
         oa.refine_iters == ob.refine_iters && oa.tol == ob.tol && oa.seed == ob.seed &&
         oa.max_grid_points == ob.max_grid_points && a.sweep == b.sweep && a.region == b.region &&
         a.discrete == b.discrete && a.policy == b.policy && a.validate == b.validate;
}

ExperimentConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream is{std::string(text)};
    pt::ini_parser::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  const Sections sec(tree);
  ExperimentConfig cfg;

  if (sec.has("channel.labels")) cfg.labels = split(sec.get("channel.labels"), ',');
  if (sec.has_section("channel")) {
    cfg.has_channel = true;
    const auto h1 = sec.list("channel.h1");
    const auto h2 = sec.list("channel.h2");
    const auto h3 = sec.list("channel.h3");
    const auto ns = sec.list("channel.sigma_s2");
    if (h1.size() != h2.size() || h1.size() != h3.size() || h1.size() != ns.size() || h1.empty()) {
      throw ConfigError("[channel] h1, h2, h3 and sigma_s2 need one value per state");
    }
    if (!cfg.labels.empty() && cfg.labels.size() != h1.size()) {
      throw ConfigError("[channel] labels must list one name per state");
    }
    for (std::size_t i = 0; i < h1.size(); ++i) cfg.states.push_back({h1[i], h2[i], h3[i], ns[i]});
    cfg.sigma_w2 = sec.num("channel.sigma_w2", cfg.sigma_w2);
    if (!sec.has("channel.sigma_w2")) throw ConfigError("missing key 'channel.sigma_w2'");
  }

  const std::string model = sec.has("chain.model") ? sec.get("chain.model") : "gilbert_elliott";
  if (model == "gilbert_elliott") {
    cfg.chain.model = ChainModel::GilbertElliott;
    cfg.chain.g = sec.num("chain.g", cfg.chain.g);
    cfg.chain.b = sec.num("chain.b", cfg.chain.b);
  } else if (model == "memory") {
    cfg.chain.model = ChainModel::Memory;
    cfg.chain.u = sec.num("chain.u", cfg.chain.u);
    cfg.chain.c = sec.num("chain.c", cfg.chain.c);
  } else if (model == "matrix") {
    cfg.chain.model = ChainModel::Matrix;
    for (const auto& col : split(sec.get("chain.columns"), '/')) cfg.chain.columns.push_back(to_doubles("chain.columns", col));
  } else {
    throw ConfigError("unknown chain model '" + model + "'");
  }

  cfg.d1 = sec.integer("delays.d1", cfg.d1);
  cfg.d2 = sec.integer("delays.d2", cfg.d2);
  if (cfg.d1 < 0 || cfg.d2 < 0) throw ConfigError("delays must be nonnegative");
  cfg.budget.p1 = sec.num("budget.p1", cfg.budget.p1);
  cfg.budget.p2 = sec.num("budget.p2", cfg.budget.p2);
  if (!(cfg.budget.p1 >= 0.0) || !(cfg.budget.p2 >= 0.0) || !std::isfinite(cfg.budget.p1) ||
      !std::isfinite(cfg.budget.p2)) {
    throw ConfigError("power budgets must be finite and nonnegative");
  }

  auto& o = cfg.optimizer;
  o.grid_levels = static_cast<int>(sec.integer("optimizer.grid_levels", o.grid_levels));
  o.refine_iters = static_cast<int>(sec.integer("optimizer.refine_iters", o.refine_iters));
  o.tol = sec.num("optimizer.tol", o.tol);
  if (sec.has("optimizer.seed")) {
    const auto& s = sec.get("optimizer.seed");
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("'optimizer.seed' is not an unsigned integer");
    o.seed = v;
  }
  o.max_grid_points = sec.size("optimizer.max_grid_points", o.max_grid_points);
  try {
    o.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  if (sec.has("sweep.delays")) {
    cfg.sweep.delays.clear();
    for (const auto& d : split(sec.get("sweep.delays"), ',')) {
      const auto v = to_int("sweep.delays", d);
      if (v < 0) throw ConfigError("sweep delays must be nonnegative");
      cfg.sweep.delays.push_back(v);
    }
    if (cfg.sweep.delays.empty()) throw ConfigError("sweep delay grid is empty");
  }
  if (sec.has("sweep.mode")) {
    const auto& m = sec.get("sweep.mode");
    if (m == "equal") cfg.sweep.mode = SweepMode::Equal;
    else if (m == "d2_zero") cfg.sweep.mode = SweepMode::D2Zero;
    else throw ConfigError("unknown sweep mode '" + m + "'");
  }
  if (sec.has("sweep.kinds")) {
    cfg.sweep.kinds.clear();
    for (const auto& k : split(sec.get("sweep.kinds"), ',')) cfg.sweep.kinds.push_back(parse_bound_kind(k));
  }
  if (sec.has("sweep.allocation")) {
    const auto& a = sec.get("sweep.allocation");
    if (a == "optimized") cfg.sweep.optimized = true;
    else if (a == "uniform") cfg.sweep.optimized = false;
    else throw ConfigError("unknown sweep allocation '" + a + "'");
  }

  if (sec.has("region.kinds")) {
    cfg.region.kinds.clear();
    for (const auto& k : split(sec.get("region.kinds"), ',')) cfg.region.kinds.push_back(parse_bound_kind(k));
    if (cfg.region.kinds.empty()) throw ConfigError("region needs at least one bound kind");
  }
  cfg.region.weight_count = static_cast<int>(sec.integer("region.weight_count", cfg.region.weight_count));
  cfg.region.angle_samples = static_cast<int>(sec.integer("region.angle_samples", cfg.region.angle_samples));
  if (cfg.region.weight_count < 1) throw ConfigError("region.weight_count must be at least 1");
  if (cfg.region.angle_samples < 2) throw ConfigError("region.angle_samples must be at least 2");
  if (sec.has("region.variant")) {
    const auto& v = sec.get("region.variant");
    if (v == "hull") cfg.region.hull = true;
    else if (v == "raw") cfg.region.hull = false;
    else throw ConfigError("unknown region variant '" + v + "'");
  }
  cfg.region.pool = sec.flag("region.pool", cfg.region.pool);

  auto& d = cfg.discrete;
  if (sec.has("discrete.model")) {
    const auto& m = sec.get("discrete.model");
    if (m == "xor_bsc") d.model = DiscreteModel::XorBsc;
    else if (m == "explicit") d.model = DiscreteModel::Explicit;
    else throw ConfigError("unknown discrete model '" + m + "'");
  }
  if (sec.has("discrete.crossover")) d.crossover = sec.list("discrete.crossover");
  d.eve_crossover = sec.num("discrete.eve_crossover", d.eve_crossover);
  d.x1_size = sec.size("discrete.x1_size", d.x1_size);
  d.x2_size = sec.size("discrete.x2_size", d.x2_size);
  d.y_size = sec.size("discrete.y_size", d.y_size);
  d.z_size = sec.size("discrete.z_size", d.z_size);
  if (sec.has("discrete.kernel")) d.kernel = sec.list("discrete.kernel");
  d.degraded = sec.flag("discrete.degraded", d.degraded);
  if (d.model == DiscreteModel::Explicit && d.kernel.empty()) throw ConfigError("explicit discrete model needs a kernel");
  if (sec.has("discrete.bounds")) {
    d.bounds.clear();
    for (const auto& b : split(sec.get("discrete.bounds"), ',')) d.bounds.push_back(parse_discrete_bound(b));
  }
  d.q_size = sec.size("discrete.q_size", d.q_size);
  d.starts = static_cast<int>(sec.integer("discrete.starts", d.starts));
  d.refine_iters = static_cast<int>(sec.integer("discrete.refine_iters", d.refine_iters));
  d.optimize = sec.flag("discrete.optimize", d.optimize);
  if (d.q_size < 1 || d.starts < 1 || d.refine_iters < 0) throw ConfigError("invalid [discrete] search settings");

  if (sec.has_section("policy")) {
    auto& p = cfg.policy;
    p.present = true;
    p.q_size = sec.size("policy.q_size", 1);
    p.q_given = sec.list("policy.q_given");
    p.x1_given = sec.list("policy.x1_given");
    p.x2_given = sec.list("policy.x2_given");
  }
  if (!d.optimize && !cfg.policy.present) throw ConfigError("discrete.optimize = false needs a [policy] section");

  cfg.validate.samples = sec.size("validate.samples", cfg.validate.samples);
  cfg.validate.tolerance = sec.num("validate.tolerance", cfg.validate.tolerance);
  if (cfg.validate.samples < 1 || !(cfg.validate.tolerance > 0.0)) throw ConfigError("invalid [validate] settings");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  if (cfg.has_channel) {
    os << "[channel]\n";
    if (!cfg.labels.empty()) os << "labels = " << join_with(cfg.labels, [](const std::string& s) { return s; }) << '\n';
    os << "h1 = " << join_nums(flatten_states(cfg.states, &FadingState::h1)) << '\n';
    os << "h2 = " << join_nums(flatten_states(cfg.states, &FadingState::h2)) << '\n';
    os << "h3 = " << join_nums(flatten_states(cfg.states, &FadingState::h3)) << '\n';
    os << "sigma_s2 = " << join_nums(flatten_states(cfg.states, &FadingState::sigma_s2)) << '\n';
    os << "sigma_w2 = " << num_str(cfg.sigma_w2) << "\n\n";
  }
  os << "[chain]\n";
  switch (cfg.chain.model) {
    case ChainModel::GilbertElliott:
      os << "model = gilbert_elliott\ng = " << num_str(cfg.chain.g) << "\nb = " << num_str(cfg.chain.b) << '\n';
      break;
    case ChainModel::Memory:
      os << "model = memory\nu = " << num_str(cfg.chain.u) << "\nc = " << num_str(cfg.chain.c) << '\n';
      break;
    case ChainModel::Matrix:
      os << "model = matrix\ncolumns = " << join_with(cfg.chain.columns, join_nums, " / ") << '\n';
      break;
  }
  os << "\n[delays]\nd1 = " << cfg.d1 << "\nd2 = " << cfg.d2 << "\n\n";
  os << "[budget]\np1 = " << num_str(cfg.budget.p1) << "\np2 = " << num_str(cfg.budget.p2) << "\n\n";
  const auto& o = cfg.optimizer;
  os << "[optimizer]\ngrid_levels = " << o.grid_levels << "\nrefine_iters = " << o.refine_iters
     << "\ntol = " << num_str(o.tol) << "\nseed = " << o.seed << "\nmax_grid_points = " << o.max_grid_points << "\n\n";
  os << "[sweep]\ndelays = " << join_with(cfg.sweep.delays, [](std::int64_t v) { return std::to_string(v); })
     << "\nmode = " << (cfg.sweep.mode == SweepMode::Equal ? "equal" : "d2_zero")
     << "\nkinds = " << join_with(cfg.sweep.kinds, [](BoundKind k) { return to_string(k); })
     << "\nallocation = " << (cfg.sweep.optimized ? "optimized" : "uniform") << "\n\n";
  os << "[region]\nkinds = " << join_with(cfg.region.kinds, [](BoundKind k) { return to_string(k); })
     << "\nweight_count = " << cfg.region.weight_count << "\nangle_samples = " << cfg.region.angle_samples
     << "\nvariant = " << (cfg.region.hull ? "hull" : "raw") << "\npool = " << (cfg.region.pool ? "true" : "false")
     << "\n\n";
  const auto& d = cfg.discrete;
  os << "[discrete]\nmodel = " << (d.model == DiscreteModel::XorBsc ? "xor_bsc" : "explicit")
     << "\ncrossover = " << join_nums(d.crossover) << "\neve_crossover = " << num_str(d.eve_crossover)
     << "\nx1_size = " << d.x1_size << "\nx2_size = " << d.x2_size << "\ny_size = " << d.y_size
     << "\nz_size = " << d.z_size << '\n';
  if (!d.kernel.empty()) os << "kernel = " << join_nums(d.kernel) << '\n';
  os << "degraded = " << (d.degraded ? "true" : "false")
     << "\nbounds = " << join_with(d.bounds, [](DiscreteBound b) { return to_string(b); }) << "\nq_size = " << d.q_size
     << "\nstarts = " << d.starts << "\nrefine_iters = " << d.refine_iters
     << "\noptimize = " << (d.optimize ? "true" : "false") << "\n\n";
  if (cfg.policy.present) {
    os << "[policy]\nq_size = " << cfg.policy.q_size << "\nq_given = " << join_nums(cfg.policy.q_given)
       << "\nx1_given = " << join_nums(cfg.policy.x1_given) << "\nx2_given = " << join_nums(cfg.policy.x2_given)
       << "\n\n";
  }
  os << "[validate]\nsamples = " << cfg.validate.samples << "\ntolerance = " << num_str(cfg.validate.tolerance) << '\n';
  return os.str();
}

MarkovChain build_chain(const ExperimentConfig& cfg) {
  try {
    switch (cfg.chain.model) {
      case ChainModel::GilbertElliott: {
        auto chain = build_gilbert_elliott(cfg.chain.g, cfg.chain.b);
        if (cfg.labels.empty()) return chain;
        return MarkovChain(cfg.labels, chain.transition());
      }
      case ChainModel::Memory: {
        const auto p = GilbertElliottParams::from_memory(cfg.chain.u, cfg.chain.c);
        auto chain = build_gilbert_elliott(p.g, p.b);
        if (cfg.labels.empty()) return chain;
        return MarkovChain(cfg.labels, chain.transition());
      }
      case ChainModel::Matrix: {
        const std::size_t k = cfg.chain.columns.size();
        Matrix m(k, k);
        for (std::size_t j = 0; j < k; ++j) {
          if (cfg.chain.columns[j].size() != k) throw ConfigError("[chain] columns must form a square matrix");
          for (std::size_t l = 0; l < k; ++l) m(l, j) = cfg.chain.columns[j][l];
        }
        std::vector<std::string> labels = cfg.labels;
        if (labels.empty())
          for (std::size_t i = 0; i < k; ++i) labels.push_back("s" + std::to_string(i));
        return MarkovChain(labels, m);
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid chain: ") + e.what());
  }
  throw ConfigError("invalid chain model");
}

GaussianFadingChannel build_gaussian(const ExperimentConfig& cfg) {
  if (!cfg.has_channel) throw ConfigError("this task needs a [channel] section");
  GaussianFadingChannel ch{cfg.labels, cfg.states, cfg.sigma_w2};
  const auto chain = build_chain(cfg);
  if (ch.labels.empty()) ch.labels = chain.labels();
  auto v = gaussian_violations(ch, chain);
  if (!v.empty()) throw ValidationError(std::move(v));
  return ch;
}

DiscreteChannelSpec build_discrete(const ExperimentConfig& cfg) {
  const auto& d = cfg.discrete;
  const std::size_t k = build_chain(cfg).size();
  try {
    if (d.model == DiscreteModel::XorBsc) {
      if (d.crossover.size() != k) throw ConfigError("[discrete] crossover needs one value per state");
      return xor_bsc_channel(d.crossover, d.eve_crossover);
    }
    auto spec = DiscreteChannelSpec::zeros({k, d.x1_size, d.x2_size, d.y_size, d.z_size});
    if (d.kernel.size() != spec.kernel.size()) throw ConfigError("[discrete] kernel has the wrong number of entries");
    spec.kernel = d.kernel;
    spec.degraded = d.degraded;
    return validate_discrete(spec);
  } catch (const ShapeError& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

InputPolicy build_policy(const ExperimentConfig& cfg, std::size_t k) {
  const auto& d = cfg.discrete;
  const std::size_t nx1 = d.model == DiscreteModel::XorBsc ? 2 : d.x1_size;
  const std::size_t nx2 = d.model == DiscreteModel::XorBsc ? 2 : d.x2_size;
  if (!cfg.policy.present) return InputPolicy::uniform(k, d.q_size, nx1, nx2);
  InputPolicy p;
  p.k = k;
  p.nq = cfg.policy.q_size;
  p.nx1 = nx1;
  p.nx2 = nx2;
  p.q_given = cfg.policy.q_given;
  p.x1_given = cfg.policy.x1_given;
  p.x2_given = cfg.policy.x2_given;
  p.validate();
  return p;
}

std::pair<ExperimentConfig, bool> relabel_for_delays(const ExperimentConfig& cfg) {
  if (cfg.d1 >= cfg.d2) return {cfg, false};
  if (cfg.policy.present) throw ConfigError("an explicit [policy] requires d1 >= d2; swap the users in the config");
  ExperimentConfig out = cfg;
  std::swap(out.d1, out.d2);
  std::swap(out.budget.p1, out.budget.p2);
  for (auto& st : out.states) std::swap(st.h1, st.h2);
  if (out.discrete.model == DiscreteModel::Explicit) {
    auto spec = DiscreteChannelSpec::zeros({build_chain(cfg).size(), cfg.discrete.x1_size, cfg.discrete.x2_size,
                                            cfg.discrete.y_size, cfg.discrete.z_size});
    if (spec.kernel.size() == cfg.discrete.kernel.size()) {
      spec.kernel = cfg.discrete.kernel;
      out.discrete.kernel = swap_inputs(spec).kernel;
    }
    std::swap(out.discrete.x1_size, out.discrete.x2_size);
  }
  log_info("d1 < d2: relabeling transmitters so that user 1 has the longer delay; outputs use the original labels");
  return {out, true};
}

std::vector<SweepRow> compute_sweep(const ExperimentConfig& cfg) {
  const auto chain = build_chain(cfg);
  const auto channel = build_gaussian(cfg);
  std::vector<SweepRow> rows;
  for (auto kind : cfg.sweep.kinds) {
    const auto limit_law = cfg.sweep.mode == SweepMode::Equal ? asymptotic_delayed_pmf(chain, 1, 1)
                                                              : asymptotic_delayed_pmf(chain, 1, 0);
    auto value = [&](const DelayedJointLaw& law) {
      if (cfg.sweep.optimized) return maximize_sum_rate(channel, law, kind, cfg.budget, cfg.optimizer).value;
      return expected_bounds(channel, law, uniform_allocation(cfg.budget, chain), kind).c;
    };
    const double asymptote = value(limit_law);
    require_finite(asymptote, "sweep asymptote");
    for (auto d : cfg.sweep.delays) {
      const auto law = cfg.sweep.mode == SweepMode::Equal ? joint_delayed_pmf(chain, d, d) : joint_delayed_pmf(chain, d, 0);
      const double v = value(law);
      require_finite(v, "sweep");
      rows.push_back({d, kind, v, asymptote});
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "d,bound_kind,sum_rate_bits,asymptote_bits\n";
  for (const auto& r : rows) {
    out += std::to_string(r.d) + ',' + to_string(r.kind) + ',' + format_number(r.sum_rate) + ',' +
           format_number(r.asymptote) + '\n';
  }
  return out;
}

std::string run_sweep_delay(const ExperimentConfig& cfg) { return sweep_csv(compute_sweep(cfg)); }

std::vector<RegionResult> compute_region(const ExperimentConfig& original) {
  const auto [cfg, swapped] = relabel_for_delays(original);
  const auto chain = build_chain(cfg);
  const auto channel = build_gaussian(cfg);
  const auto law = joint_delayed_pmf(chain, cfg.d1, cfg.d2);

  std::vector<std::vector<PowerAllocation>> own;
  std::vector<PowerAllocation> pooled;
  for (auto kind : cfg.region.kinds) {
    std::vector<PowerAllocation> allocs;
    for (auto& s : frontier_allocations(channel, law, kind, cfg.budget, cfg.region.weight_count, cfg.optimizer)) {
      if (std::find(pooled.begin(), pooled.end(), s.alloc) == pooled.end()) pooled.push_back(s.alloc);
      allocs.push_back(std::move(s.alloc));
    }
    own.push_back(std::move(allocs));
  }

  std::vector<RegionResult> out;
  for (std::size_t i = 0; i < cfg.region.kinds.size(); ++i) {
    const auto kind = cfg.region.kinds[i];
    std::vector<RegionBounds> pentagons;
    for (const auto& a : cfg.region.pool ? pooled : own[i]) {
      auto rb = expected_bounds(channel, law, a, kind);
      require_finite(rb, "region");
      if (swapped) std::swap(rb.a, rb.b);
      pentagons.push_back(rb);
    }
    RegionResult r;
    r.kind = kind;
    r.raw = union_frontier(pentagons, cfg.region.angle_samples);
    r.hull = convex_hull_frontier(r.raw);
    out.push_back(std::move(r));
  }
  return out;
}

std::string region_csv(const std::vector<RegionResult>& results, bool hull) {
  std::string out = "bound_kind,R1,R2\n";
  for (const auto& r : results) {
    for (const auto& p : (hull ? r.hull : r.raw).points) {
      out += to_string(r.kind) + ',' + format_number(p.r1) + ',' + format_number(p.r2) + '\n';
    }
  }
  return out;
}

std::string run_region(const ExperimentConfig& cfg) { return region_csv(compute_region(cfg), cfg.region.hull); }

std::vector<DiscreteResult> compute_discrete(const ExperimentConfig& original) {
  const auto [cfg, swapped] = relabel_for_delays(original);
  const auto chain = build_chain(cfg);
  const auto spec = build_discrete(cfg);
  const auto law = joint_delayed_pmf(chain, cfg.d1, cfg.d2);
  std::vector<DiscreteResult> out;
  for (auto which : cfg.discrete.bounds) {
    DiscreteResult r;
    r.bound = which;
    if (cfg.discrete.optimize) {
      PolicySearchOptions opts;
      opts.q_size = cfg.discrete.q_size;
      opts.starts = cfg.discrete.starts;
      opts.refine_iters = cfg.discrete.refine_iters;
      opts.seed = cfg.optimizer.seed;
      auto res = optimize_policy(spec, law, which, opts);
      r.caps = res.bounds;
      r.policy = std::move(res.policy);
    } else {
      r.policy = build_policy(cfg, chain.size());
      r.caps = evaluate_bound(spec, law, r.policy, which);
    }
    require_finite(r.caps, "discrete bound");
    // Same pentagon, with caps that cannot exceed the sum cap reported as such.
    r.caps = tighten(r.caps);
    if (swapped) std::swap(r.caps.a, r.caps.b);
    out.push_back(std::move(r));
  }
  return out;
}

std::string discrete_csv(const std::vector<DiscreteResult>& results) {
  std::string out = "bound_kind,a,b,c\n";
  for (const auto& r : results) {
    out += to_string(r.bound) + ',' + format_number(r.caps.a) + ',' + format_number(r.caps.b) + ',' +
           format_number(r.caps.c) + '\n';
  }
  out += "\nbound_kind,factor,probabilities\n";
  for (const auto& r : results) {
    out += to_string(r.bound) + ",q_given," + format_list(r.policy.q_given) + '\n';
    out += to_string(r.bound) + ",x1_given," + format_list(r.policy.x1_given) + '\n';
    out += to_string(r.bound) + ",x2_given," + format_list(r.policy.x2_given) + '\n';
  }
  return out;
}

std::string run_discrete(const ExperimentConfig& cfg) { return discrete_csv(compute_discrete(cfg)); }

bool ValidateReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ValidateRow& r) { return r.pass; });
}

std::string ValidateReport::csv() const {
  std::string out = "term,analytic_bits,empirical_bits,abs_error,status\n";
  for (const auto& r : rows) {
    out += '"' + r.term + "\"," + format_number(r.analytic) + ',' + format_number(r.empirical) + ',' +
           format_number(r.abs_error) + ',' + (r.pass ? "pass" : "fail") + '\n';
  }
  out += "summary,samples=" + std::to_string(samples) + ",seed=" + std::to_string(seed) +
         ",tolerance=" + format_number(tolerance) + ',' + (all_pass() ? "pass" : "fail") + '\n';
  return out;
}

ValidateReport run_validate(const ExperimentConfig& cfg) {
  if (cfg.d1 < cfg.d2) throw ConfigError("validate requires d1 >= d2");
  const auto chain = build_chain(cfg);
  const auto spec = build_discrete(cfg);
  const auto policy = build_policy(cfg, chain.size());
  const auto law = joint_delayed_pmf(chain, cfg.d1, cfg.d2);
  const auto analytic = info_terms(assemble_joint(spec, policy, law));
  const auto run = simulate_discrete(spec, policy, chain, cfg.d1, cfg.d2, cfg.validate.samples, cfg.optimizer.seed);
  const auto empirical = empirical_info_terms(run);

  ValidateReport rep;
  rep.seed = cfg.optimizer.seed;
  rep.samples = cfg.validate.samples;
  rep.tolerance = cfg.validate.tolerance;
  rep.warnings = empirical.warnings;
  for (const auto& w : rep.warnings) std::clog << "warning: " << w << '\n';
  const auto a = analytic.named();
  const auto e = empirical.terms.named();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double err = std::abs(a[i].second - e[i].second);
    require_finite(err, "validate");
    rep.rows.push_back({a[i].first, a[i].second, e[i].second, err, err < cfg.validate.tolerance});
  }
  return rep;
}

ExperimentConfig default_validate_config() {
  ExperimentConfig cfg;
  cfg.chain = {ChainModel::GilbertElliott, 0.05, 0.05, 0.9, 1.0, {}};
  cfg.d1 = 2;
  cfg.d2 = 1;
  cfg.optimizer.seed = 42;
  cfg.discrete.model = DiscreteModel::XorBsc;
  cfg.discrete.crossover = {0.1, 0.3};
  cfg.discrete.eve_crossover = 0.2;
  cfg.discrete.q_size = 2;
  cfg.policy.present = true;
  cfg.policy.q_size = 2;
  cfg.policy.q_given = {0.6, 0.4, 0.3, 0.7};
  cfg.policy.x1_given = {0.8, 0.2, 0.35, 0.65, 0.5, 0.5, 0.1, 0.9};
  cfg.policy.x2_given = {0.7, 0.3, 0.4, 0.6, 0.25, 0.75, 0.9, 0.1, 0.55, 0.45, 0.2, 0.8, 0.6, 0.4, 0.15, 0.85};
  cfg.validate.samples = 1'000'000;
  cfg.validate.tolerance = 0.01;
  return cfg;
}

}  // namespace fsmacwt
