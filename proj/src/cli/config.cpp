#include "realclock/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "realclock/cli/seeding.hpp"

namespace realclock::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: '" + path + "' " + what);
}

// Reads one JSON object, recording every value (given or default) into `out`
// and rejecting keys nobody asked for.
class Section {
 public:
  Section(const json* node, std::string path, json& out) : node_(node), path_(std::move(path)), out_(out) {
    if (node_ && !node_->is_object()) {
      fail(path_, "must be an object");
    }
    out_ = json::object();
  }

  double number(const std::string& key, double fallback) {
    const json* v = take(key);
    double x = fallback;
    if (v) {
      if (!v->is_number()) {
        fail(join(path_, key), "must be a number");
      }
      x = v->get<double>();
    }
    if (!std::isfinite(x)) {
      fail(join(path_, key), "must be finite");
    }
    out_[key] = x;
    return x;
  }

  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) {
      fail(join(path_, key), "must be positive");
    }
    return x;
  }

  double non_negative(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x >= 0.0)) {
      fail(join(path_, key), "must be non-negative");
    }
    return x;
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback, std::uint64_t min_value) {
    const json* v = take(key);
    std::uint64_t x = fallback;
    if (v) {
      if (v->is_number_unsigned()) {
        x = v->get<std::uint64_t>();
      } else if (v->is_number_float() && v->get<double>() >= 0.0 &&
                 std::floor(v->get<double>()) == v->get<double>() && v->get<double>() < 9e15) {
        x = static_cast<std::uint64_t>(v->get<double>());
      } else {
        fail(join(path_, key), "must be a non-negative integer");
      }
    }
    if (x < min_value) {
      fail(join(path_, key), "must be at least " + std::to_string(min_value));
    }
    out_[key] = x;
    return x;
  }

  bool flag(const std::string& key, bool fallback) {
    const json* v = take(key);
    bool x = fallback;
    if (v) {
      if (!v->is_boolean()) {
        fail(join(path_, key), "must be true or false");
      }
      x = v->get<bool>();
    }
    out_[key] = x;
    return x;
  }

  std::string choice(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& allowed) {
    const json* v = take(key);
    std::string x = fallback;
    if (v) {
      if (!v->is_string()) {
        fail(join(path_, key), "must be a string");
      }
      x = v->get<std::string>();
    }
    bool ok = false;
    std::string list;
    for (const auto& a : allowed) {
      ok = ok || a == x;
      list += (list.empty() ? "" : ", ") + a;
    }
    if (!ok) {
      fail(join(path_, key), "must be one of {" + list + "}, got '" + x + "'");
    }
    out_[key] = x;
    return x;
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    const json* v = take(key);
    std::vector<double> x = fallback;
    if (v) {
      x = parse_vector(*v, join(path_, key));
    }
    out_[key] = x;
    return x;
  }

  std::vector<std::vector<double>> rows(const std::string& key,
                                        const std::vector<std::vector<double>>& fallback) {
    const json* v = take(key);
    std::vector<std::vector<double>> x = fallback;
    if (v) {
      if (!v->is_array()) {
        fail(join(path_, key), "must be an array of rows");
      }
      x.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        x.push_back(parse_vector((*v)[i], join(path_, key) + "[" + std::to_string(i) + "]"));
      }
    }
    out_[key] = x;
    return x;
  }

  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  Section child(const std::string& key) {
    const json* v = take(key);
    return Section(v, join(path_, key), out_[key]);
  }

  const std::string& path() const noexcept { return path_; }

  void finish() const {
    if (!node_) {
      return;
    }
    for (const auto& [key, value] : node_->items()) {
      if (!used_.count(key)) {
        fail(join(path_, key), "is not a recognized key");
      }
    }
  }

 private:
  const json* take(const std::string& key) {
    used_.insert(key);
    if (!node_) {
      return nullptr;
    }
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  static std::vector<double> parse_vector(const json& v, const std::string& where) {
    if (!v.is_array()) {
      fail(where, "must be an array of numbers");
    }
    std::vector<double> x;
    for (const auto& e : v) {
      if (!e.is_number()) {
        fail(where, "must contain only numbers");
      }
      x.push_back(e.get<double>());
      if (!std::isfinite(x.back())) {
        fail(where, "must contain only finite numbers");
      }
    }
    return x;
  }

  const json* node_;
  std::string path_;
  json& out_;
  std::set<std::string> used_;
};

ComplexMatrix square_matrix(const std::vector<std::vector<double>>& re,
                            const std::vector<std::vector<double>>& im, const std::string& path) {
  const auto n = static_cast<Index>(re.size());
  if (n < 2) {
    fail(path + ".real", "must have at least 2 rows");
  }
  if (!im.empty() && static_cast<Index>(im.size()) != n) {
    fail(path + ".imag", "must have the same shape as real");
  }
  ComplexMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const auto& r = re[static_cast<std::size_t>(i)];
    if (static_cast<Index>(r.size()) != n) {
      fail(path + ".real", "must be square");
    }
    for (Index j = 0; j < n; ++j) {
      double imag = 0.0;
      if (!im.empty()) {
        const auto& ir = im[static_cast<std::size_t>(i)];
        if (static_cast<Index>(ir.size()) != n) {
          fail(path + ".imag", "must have the same shape as real");
        }
        imag = ir[static_cast<std::size_t>(j)];
      }
      m(i, j) = complex(r[static_cast<std::size_t>(j)], imag);
    }
  }
  return m;
}

HermitianOperator random_hermitian(Index dim, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix a(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = complex(re, im);
    }
  }
  return HermitianOperator(0.5 * scale * (a + a.adjoint()));
}

// Shared by the system Hamiltonian and the conditional-probability observable.
HermitianOperator read_operator(Section s, const std::string& fallback_preset,
                                std::uint64_t seed) {
  const std::string preset = s.choice("preset", fallback_preset, {"qubit", "diag", "matrix", "random"});
  try {
    if (preset == "qubit") {
      const double omega = s.number("omega", 1.0);
      s.finish();
      return HermitianOperator::diagonal(std::vector<double>{0.0, omega});
    }
    if (preset == "diag") {
      const auto values = s.numbers("values", {0.0, 1.0});
      s.finish();
      if (values.size() < 2) {
        fail(s.path() + ".values", "must have at least 2 entries");
      }
      return HermitianOperator::diagonal(values);
    }
    if (preset == "matrix") {
      if (!s.has("real")) {
        fail(s.path() + ".real", "is required for preset 'matrix'");
      }
      const auto re = s.rows("real", {});
      const auto im = s.rows("imag", {});
      s.finish();
      return HermitianOperator(square_matrix(re, im, s.path()));
    }
    const auto dim = s.count("dim", 2, 2);
    const double scale = s.positive("scale", 1.0);
    s.finish();
    if (dim > 512) {
      fail(s.path() + ".dim", "must be at most 512");
    }
    auto rng = component_rng(seed, s.path());
    return random_hermitian(static_cast<Index>(dim), scale, rng);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("config: '" + s.path() + "': " + e.what());
  }
}

DensityMatrix read_state(Section s, Index dim, std::uint64_t seed) {
  const std::string kind =
      s.choice("kind", "uniform", {"uniform", "basis", "pure", "density", "random_pure"});
  try {
    ComplexVector psi(dim);
    if (kind == "uniform") {
      s.finish();
      psi.setConstant(1.0 / std::sqrt(static_cast<double>(dim)));
      return DensityMatrix::pure(psi);
    }
    if (kind == "basis") {
      const auto index = s.count("index", 0, 0);
      s.finish();
      if (index >= static_cast<std::uint64_t>(dim)) {
        fail(s.path() + ".index", "must be below the system dimension " + std::to_string(dim));
      }
      psi.setZero();
      psi(static_cast<Index>(index)) = 1.0;
      return DensityMatrix::pure(psi);
    }
    if (kind == "pure") {
      const auto re = s.numbers("real", {});
      const auto im = s.numbers("imag", {});
      s.finish();
      if (static_cast<Index>(re.size()) != dim || (!im.empty() && im.size() != re.size())) {
        fail(s.path() + ".real", "must have one entry per system level (" + std::to_string(dim) + ")");
      }
      for (Index i = 0; i < dim; ++i) {
        const auto k = static_cast<std::size_t>(i);
        psi(i) = complex(re[k], im.empty() ? 0.0 : im[k]);
      }
      return DensityMatrix::pure(psi);
    }
    if (kind == "density") {
      const auto re = s.rows("real", {});
      const auto im = s.rows("imag", {});
      s.finish();
      ComplexMatrix m = square_matrix(re, im, s.path());
      if (m.rows() != dim) {
        fail(s.path() + ".real", "must match the system dimension " + std::to_string(dim));
      }
      return DensityMatrix(std::move(m));
    }
    s.finish();
    auto rng = component_rng(seed, s.path());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      psi(i) = complex(re, im);
    }
    psi.normalize();
    return DensityMatrix::pure(psi);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("config: '" + s.path() + "': " + e.what());
  }
}

ClockModel read_clock(Section s) {
  const std::string kind =
      s.choice("kind", "ideal", {"ideal", "gaussian", "constant_rate", "fundamental"});
  if (kind == "ideal") {
    s.finish();
    return ClockModel::ideal();
  }
  if (kind == "gaussian") {
    const double width = s.non_negative("width", 0.1);
    s.finish();
    return ClockModel::gaussian(width);
  }
  if (kind == "constant_rate") {
    const double sigma = s.non_negative("sigma", 0.0);
    s.finish();
    return ClockModel::constant_rate(sigma);
  }
  const double tp = s.positive("t_planck", 0.01);
  const double tmax = s.number("t_max", 20.0);
  s.finish();
  if (!(tmax > 0.0)) {
    fail(s.path() + ".t_max", "must be positive");
  }
  return ClockModel::fundamental(tp, tmax);
}

EvolutionConfig read_evolution(Section& s, double& t_final) {
  EvolutionConfig cfg;
  t_final = s.non_negative("t_final", 1.0);
  cfg.step = s.positive("step", 1e-3);
  cfg.record_every = s.count("record_every", 1, 1);
  cfg.quad_tol = s.positive("quad_tol", 1e-8);
  Section g = s.child("grid");
  cfg.grid.t_min = g.number("t_min", -10.0);
  cfg.grid.t_max = g.number("t_max", 10.0);
  cfg.grid.n_points = g.count("n_points", 2001, 3);
  g.finish();
  s.finish();
  if (!(cfg.grid.t_min < cfg.grid.t_max)) {
    fail(s.path() + ".grid", "requires t_min < t_max");
  }
  if (cfg.grid.n_points > 50'000'001) {
    fail(s.path() + ".grid.n_points", "must be at most 50000001");
  }
  return cfg;
}

ZurekSettings read_zurek(Section s, std::uint64_t seed) {
  ZurekSettings z{};
  const auto atoms = s.count("atoms", 6, 1);
  if (atoms > 64) {
    fail(s.path() + ".atoms", "must be at most 64");
  }
  const std::size_t n = static_cast<std::size_t>(atoms);

  Section c = s.child("couplings");
  const std::string ckind = c.choice("kind", "commensurate", {"commensurate", "random", "list"});
  std::vector<double> g;
  if (ckind == "commensurate") {
    const double g0 = c.number("g0", 0.3);
    for (std::size_t k = 1; k <= n; ++k) {
      g.push_back(static_cast<double>(k) * g0);
    }
  } else if (ckind == "random") {
    const double lo = c.number("g_min", 0.1);
    const double hi = c.number("g_max", 2.0);
    if (!(lo <= hi)) {
      fail(c.path(), "requires g_min <= g_max");
    }
    auto rng = component_rng(seed, "zurek.couplings");
    std::uniform_real_distribution<double> u(lo, hi);
    for (std::size_t k = 0; k < n; ++k) {
      g.push_back(u(rng));
    }
  } else {
    g = c.numbers("values", {});
    if (g.size() != n) {
      fail(c.path() + ".values", "must have one entry per atom (" + std::to_string(n) + ")");
    }
  }
  c.finish();

  const std::string env = s.choice("environment", "balanced", {"balanced", "random"});
  std::vector<zurek::AmplitudePair> amps;
  if (env == "balanced") {
    amps.assign(n, {complex(std::sqrt(0.5), 0.0), complex(std::sqrt(0.5), 0.0)});
  } else {
    auto rng = component_rng(seed, "zurek.environment");
    for (std::size_t k = 0; k < n; ++k) {
      amps.push_back(zurek::random_atom(rng));
    }
  }

  const auto a = s.numbers("a", {std::sqrt(0.5), 0.0});
  const auto b = s.numbers("b", {std::sqrt(0.5), 0.0});
  if (a.size() != 2 || b.size() != 2) {
    fail(s.path() + (a.size() != 2 ? ".a" : ".b"), "must be [re, im]");
  }
  z.bath.couplings = std::move(g);
  z.bath.env = std::move(amps);
  z.bath.system = {complex(a[0], a[1]), complex(b[0], b[1])};
  try {
    z.bath.validate();
  } catch (const Error& e) {
    throw ConfigError("config: '" + s.path() + "': " + e.what());
  }

  z.t_planck = s.positive("t_planck", 0.05);
  z.t_final = s.non_negative("t_final", 20.0);
  z.samples = s.count("samples", 201, 2);
  z.brute_force = s.flag("brute_force", false);
  Section r = s.child("recurrence");
  z.recurrence = r.flag("enabled", false);
  z.horizon = r.positive("horizon", 3.0 * std::numbers::pi / 0.3);
  z.recurrence_samples = r.count("samples", 10000, 1000);
  z.threshold = r.positive("threshold", 0.5);
  r.finish();
  s.finish();
  return z;
}

CondprobSettings read_condprob(Section s, std::uint64_t seed) {
  const std::string source = s.choice("source", "analytic", {"analytic", "wavepacket"});
  HermitianOperator obs = read_operator(s.child("observable"), "diag", seed);
  const double oc = s.number("o_center", 1.0);
  const double ohw = s.positive("o_halfwidth", 0.5);
  Section r = s.child("readings");
  const double lo = r.number("min", 0.0);
  const double hi = r.number("max", 5.0);
  const auto n = r.count("n", 11, 1);
  r.finish();
  if (!(lo <= hi)) {
    fail(r.path(), "requires min <= max");
  }
  Section w = s.child("wavepacket");
  FreeParticleClock fp;
  fp.dimension = static_cast<Index>(w.count("dimension", 256, 4));
  fp.length = w.positive("length", fp.length);
  fp.mass = w.positive("mass", fp.mass);
  fp.velocity = w.positive("velocity", fp.velocity);
  fp.x0 = w.number("x0", fp.x0);
  fp.width = w.positive("width", fp.width);
  w.finish();
  s.finish();
  if (fp.dimension > 1024) {
    fail(w.path() + ".dimension", "must be at most 1024");
  }
  try {
    fp.validate();
  } catch (const Error& e) {
    throw ConfigError("config: '" + w.path() + "': " + e.what());
  }
  return {source == "analytic" ? CondprobSource::analytic : CondprobSource::wavepacket,
          std::move(obs),
          oc,
          ohw,
          lo,
          hi,
          static_cast<std::size_t>(n),
          fp};
}

LimitSettings read_limits(Section s) {
  LimitSettings l{};
  l.omega = s.number("omega", 1.0);
  l.t = s.non_negative("t", 1.0);
  l.t_planck = s.positive("t_planck", 1.0);
  l.mass = s.positive("mass", 1.0);
  s.finish();
  return l;
}

SweepSettings read_sweep(Section s) {
  SweepSettings w{};
  w.command = parse_command(s.choice("command", "evolve", {"evolve", "zurek", "condprob", "clock-limits"}));
  const auto key = s.choice("key", "system.omega",
                            {"system.omega", "clock.width", "clock.sigma", "clock.t_planck",
                             "clock.t_max", "evolution.t_final", "evolution.step",
                             "zurek.atoms", "zurek.t_planck", "zurek.t_final",
                             "zurek.couplings.g0", "condprob.o_center",
                             "clock_limits.omega", "clock_limits.t", "clock_limits.t_planck",
                             "clock_limits.mass"});
  w.key = key;
  w.min = s.number("min", 1.0);
  w.max = s.number("max", 1.0);
  w.n = s.count("n", 1, 1);
  s.finish();
  if (!(w.min <= w.max)) {
    fail(s.path(), "requires min <= max");
  }
  return w;
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "evolve") return Command::evolve;
  if (name == "zurek") return Command::zurek;
  if (name == "condprob") return Command::condprob;
  if (name == "clock-limits") return Command::clock_limits;
  if (name == "sweep") return Command::sweep;
  throw ConfigError("unknown command '" + std::string(name) +
                    "' (expected evolve, zurek, condprob, clock-limits or sweep)");
}

std::string_view command_name(Command c) noexcept {
  switch (c) {
    case Command::evolve: return "evolve";
    case Command::zurek: return "zurek";
    case Command::condprob: return "condprob";
    case Command::clock_limits: return "clock-limits";
    case Command::sweep: return "sweep";
  }
  return "";
}

json read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config file '" + path.string() + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("cannot read config file '" + path.string() + "'");
  }
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

const json* find_path(const json& doc, std::string_view dotted) {
  const json* node = &doc;
  std::size_t start = 0;
  while (start <= dotted.size()) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key(dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start));
    if (!node->is_object() || !node->contains(key)) {
      return nullptr;
    }
    node = &(*node)[key];
    if (dot == std::string_view::npos) {
      break;
    }
    start = dot + 1;
  }
  return node;
}

void set_path(json& doc, std::string_view dotted, json value) {
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted.find('.', start);
    const std::string key(dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start));
    if (key.empty()) {
      throw ConfigError("override key '" + std::string(dotted) + "' has an empty component");
    }
    if (!node->is_object()) {
      if (!node->is_null()) {
        throw ConfigError("override key '" + std::string(dotted) + "' descends into a non-object");
      }
      *node = json::object();
    }
    if (dot == std::string_view::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

void apply_override(json& doc, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' must have the form key=value");
  }
  const std::string_view key = assignment.substr(0, eq);
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) {
    value = text;
  }
  set_path(doc, key, std::move(value));
}

RunConfig load_config(const json& doc, Command command) {
  if (!doc.is_object()) {
    throw ConfigError("config: top level must be a JSON object");
  }
  json resolved = json::object();
  Section root(&doc, "", resolved);
  const std::uint64_t seed = root.count("seed", 0, 0);

  HermitianOperator h = read_operator(root.child("system"), "qubit", seed);
  DensityMatrix rho = read_state(root.child("state"), h.dim(), seed);
  ClockModel clock = read_clock(root.child("clock"));
  double t_final = 0.0;
  Section evo = root.child("evolution");
  EvolutionConfig ecfg = read_evolution(evo, t_final);
  ZurekSettings z = read_zurek(root.child("zurek"), seed);
  CondprobSettings cp = read_condprob(root.child("condprob"), seed);
  LimitSettings lim = read_limits(root.child("clock_limits"));
  SweepSettings sw = read_sweep(root.child("sweep"));
  const bool uses_condprob = command == Command::condprob ||
                             (command == Command::sweep && sw.command == Command::condprob);
  if (uses_condprob && cp.observable.dim() != h.dim()) {
    fail("condprob.observable", "must match the system dimension " + std::to_string(h.dim()));
  }
  Section out = root.child("output");
  out.choice("format", "csv", {"csv", "json"});
  out.finish();
  root.finish();

  return RunConfig{command,      std::move(resolved), seed,      std::move(h),
                   std::move(rho), std::move(clock),  ecfg,      t_final,
                   std::move(z), std::move(cp),       lim,       std::move(sw)};
}

}  // namespace realclock::cli
