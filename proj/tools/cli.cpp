#include "cli.hpp"

#include <cerrno>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldplab/errors.hpp"
#include "ldplab/experiments.hpp"
#include "ldplab/freeprob.hpp"
#include "ldplab/lpp.hpp"
#include "ldplab/matrixlab.hpp"
#include "ldplab/measures.hpp"
#include "ldplab/ratefuncs.hpp"
#include "ldplab/specmeasures.hpp"

namespace ldp::cli {

namespace {

struct Key {
  std::string name;
  std::string fallback;
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Key> keys;
};

// Keys that never change results and stay out of the config hash.
const std::set<std::string> kUnhashed = {"threads", "out"};

std::vector<Key> ensemble_keys(const std::string& alpha) {
  return {{"alpha", alpha, "tail exponent alpha in (0, 2]"},
          {"beta", "1", "1 (real symmetric) or 2 (complex Hermitian)"},
          {"b", "1", "diagonal coefficient b"},
          {"a1", "auto", "off-diagonal coefficient a1 (auto: unit variance)"},
          {"a2", "auto", "imaginary-part coefficient a2 (auto: unit variance)"}};
}

std::vector<Command> commands() {
  auto with = [](std::vector<Key> a, const std::vector<Key>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  const std::vector<Key> common = {{"seed", "1", "master seed"},
                                   {"threads", "1", "worker cap; results do not depend on it"},
                                   {"out", "", "output file (default: standard output)"}};
  const std::vector<Key> shape = {{"shape_grid", "2", "limit-shape direction grid per axis"},
                                  {"shape_n", "0", "limit-shape lattice size (0: twice the largest n)"},
                                  {"shape_replicas", "200", "limit-shape Monte Carlo replicas"}};
  std::vector<Command> c;
  c.push_back({"sample", "draw a Wigner matrix (matrix CSV) or i.i.d. mu/nu variates",
               with(with({{"kind", "wigner", "wigner, mu or nu"},
                          {"n", "100", "matrix size"},
                          {"stream", "0", "RNG stream"},
                          {"count", "1000", "number of mu/nu draws"}},
                         ensemble_keys("1")),
                    common)});
  c.push_back({"spectrum", "eigenvalues of X/sqrt(n) + theta e1 e1^T",
               with(with({{"n", "200", "matrix size"},
                          {"stream", "0", "RNG stream"},
                          {"theta", "0", "rank-one spike"}},
                         ensemble_keys("1")),
                    common)});
  c.push_back({"freeconv", "density of the free convolution with the semicircle",
               with({{"atoms", "0", "comma-separated atoms with equal weights"},
                     {"measure", "", "atom,weight CSV file (overrides atoms)"},
                     {"eta", "0.001", "height of the evaluation line above the real axis"},
                     {"xmin", "-4", "grid start"},
                     {"xmax", "4", "grid end"},
                     {"points", "801", "grid size"}},
                    common)});
  c.push_back({"rate", "evaluate J, K, L or the symmetric closed form of I",
               with(with({{"kind", "J", "J, K, L or I"},
                          {"x", "2", "comma-separated evaluation points"},
                          {"c", "0", "constant c of J"},
                          {"c1", "0", "constant of K above tau(P)"},
                          {"cm1", "0", "constant of K below tau(P)"},
                          {"taup", "0", "tau(P) for K"},
                          {"d", "1", "polynomial degree for K"},
                          {"g11", "0", "g(1,...,1) for L"},
                          {"atoms", "-2,2", "symmetric atoms with equal weights for I"},
                          {"a", "auto", "coefficient a of min(b, a/2) for I (auto: a1)"}},
                         ensemble_keys("1")),
                    common)});
  c.push_back({"lpp", "last-passage times with a corner spike against the deterministic equivalent",
               with(with({{"n", "10,20", "comma-separated lattice sizes"},
                          {"alpha", "0.5", "weight law mu_alpha, alpha in (0, 1)"},
                          {"dim", "2", "dimension, 2 or 3"},
                          {"replicas", "100", "Monte Carlo replicas per n"},
                          {"theta", "0", "corner spike"}},
                         shape),
                    common)});
  c.push_back({"audit", "concentration, equivalent-error, tail-rate and replica-record audits",
               with(with(with({{"mode", "concentration", "concentration, error, tail or records"},
                               {"functional", "largest_eig", "esm_distance, largest_eig, trace_poly or lpp_time"},
                               {"kind", "eig", "error curve: esm, eig, poly or lpp"},
                               {"poly", "x1^3", "polynomial for trace_poly and poly"},
                               {"n", "200", "comma-separated sizes"},
                               {"replicas", "2000", "replicas per n"},
                               {"t", "0.25,0.5", "increasing deviation grid"},
                               {"kappa", "1", "scale kappa of the bound shapes"},
                               {"theta", "0", "deformation strength"},
                               {"x", "2", "tail threshold"},
                               {"dim", "2", "lattice dimension for lpp"}},
                              ensemble_keys("1")),
                         shape),
                    common)});
  c.push_back({"net", "greedy eps-nets of the l^p ball in the l^q metric",
               with({{"p", "0.5", "ball exponent p in (0, 2]"},
                     {"q", "2", "metric exponent q > p"},
                     {"eps", "0.1,0.08,0.06,0.05,0.04", "comma-separated radii"},
                     {"m", "16", "dimension"},
                     {"trials", "100", "consecutive covered probes that end a net"}},
                    common)});
  return c;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

class Settings {
 public:
  std::map<std::string, std::string> values;

  const std::string& str(const std::string& key) const { return values.at(key); }

  double real(const std::string& key) const { return parse_real(key, str(key)); }

  long long integer(const std::string& key) const { return parse_integer(key, str(key)); }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> v;
    for (const auto& s : split(str(key))) v.push_back(parse_real(key, s));
    require(!v.empty(), key + ": empty list");
    return v;
  }

  std::vector<int> ints(const std::string& key) const {
    std::vector<int> v;
    for (const auto& s : split(str(key))) {
      const auto x = parse_integer(key, s);
      require(x >= INT_MIN && x <= INT_MAX, key + ": value out of range");
      v.push_back(static_cast<int>(x));
    }
    require(!v.empty(), key + ": empty list");
    return v;
  }

  std::string canonical(const std::string& command) const {
    std::string s = "command=" + command + "\n";
    for (const auto& [k, v] : values)
      if (!kUnhashed.count(k)) s += k + "=" + v + "\n";
    return s;
  }

  std::string header(const std::string& command) const {
    const std::string text = canonical(command);
    std::string h = header_line(hex64(fnv1a(text)));
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) h += "\n# " + line;
    return h;
  }

  std::string hash(const std::string& command) const { return hex64(fnv1a(canonical(command))); }

 private:
  static double parse_real(const std::string& key, const std::string& s) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    require(!s.empty() && end == s.c_str() + s.size() && errno != ERANGE && !std::isnan(v),
            key + ": expected a number, got '" + s + "'");
    return v;
  }

  static long long parse_integer(const std::string& key, const std::string& s) {
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    require(!s.empty() && end == s.c_str() + s.size() && errno != ERANGE,
            key + ": expected an integer, got '" + s + "'");
    return v;
  }
};

void read_config_file(const std::string& path, const std::set<std::string>& known, Settings& s) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "config: cannot open '" + path + "'");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, path + ":" + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    require(known.count(key) > 0, path + ":" + std::to_string(number) + ": unknown key '" + key + "'");
    s.values[key] = trim(line.substr(eq + 1));
  }
}

WignerEnsemble ensemble(const Settings& s) {
  const long long beta = s.integer("beta");
  require(beta == 1 || beta == 2, "beta must be 1 or 2");
  auto e = WignerEnsemble::unit_variance(s.real("alpha"), static_cast<int>(beta), s.real("b"));
  if (s.str("a1") != "auto") e.a1 = s.real("a1");
  if (s.str("a2") != "auto") e.a2 = s.real("a2");
  e.validate();
  return e;
}

std::uint64_t seed_of(const Settings& s) {
  const long long v = s.integer("seed");
  require(v >= 0, "seed must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

unsigned threads_of(const Settings& s) {
  const long long v = s.integer("threads");
  require(v >= 1 && v <= 1024, "threads must lie in [1, 1024]");
  return static_cast<unsigned>(v);
}

int positive(const Settings& s, const std::string& key) {
  const long long v = s.integer(key);
  require(v >= 1 && v <= INT_MAX, key + " must be a positive integer");
  return static_cast<int>(v);
}

void cmd_sample(const Settings& s, std::ostream& out) {
  const std::string kind = s.str("kind");
  const auto seed = seed_of(s);
  const auto stream = static_cast<std::uint64_t>(s.integer("stream"));
  if (kind == "wigner") {
    const auto e = ensemble(s);
    write_matrix_csv(out, sample_wigner(e, static_cast<std::size_t>(positive(s, "n")), seed, stream), e.alpha);
    return;
  }
  require(kind == "mu" || kind == "nu", "kind must be wigner, mu or nu");
  const double alpha = s.real("alpha");
  const AlphaLaw law = kind == "mu" ? AlphaLaw::mu(alpha) : AlphaLaw::nu(alpha);
  const auto draws = law.sample(static_cast<std::size_t>(positive(s, "count")), seed, stream);
  out << "index,value\n";
  for (std::size_t i = 0; i < draws.size(); ++i) out << i << ',' << format_real(draws[i]) << '\n';
}

void cmd_spectrum(const Settings& s, std::ostream& out) {
  const auto e = ensemble(s);
  const auto n = static_cast<std::size_t>(positive(s, "n"));
  auto x = sample_wigner(e, n, seed_of(s), static_cast<std::uint64_t>(s.integer("stream")))
               .scaled(1.0 / std::sqrt(static_cast<double>(n)));
  HermitianMatrix spike(n, e.beta);
  spike.set(0, 0, s.real("theta"));
  const auto ev = spectrum(x + spike);
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < ev.size(); ++i) out << i << ',' << format_real(ev[i]) << '\n';
}

void cmd_freeconv(const Settings& s, std::ostream& out) {
  Measure1D nu = Measure1D::dirac(0.0);
  if (!s.str("measure").empty()) {
    std::ifstream in(s.str("measure"));
    require(static_cast<bool>(in), "measure: cannot open '" + s.str("measure") + "'");
    nu = read_measure_csv(in);
  } else {
    nu = Measure1D::uniform(s.reals("atoms"));
  }
  const double lo = s.real("xmin"), hi = s.real("xmax");
  const int points = positive(s, "points");
  require(hi > lo && points >= 2, "freeconv: need xmax > xmin and at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  const auto r = free_conv_semicircle(nu, s.real("eta"), grid, threads_of(s));
  out << "x,density,re_g,im_g\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    out << format_real(grid[i]) << ',' << format_real(r.density[i]) << ',' << format_real(r.points[i].g.real()) << ','
        << format_real(r.points[i].g.imag()) << '\n';
}

// `bare` prints a single value with no header or column names.
void cmd_rate(const Settings& s, std::ostream& out, bool bare) {
  RateParams p;
  const auto e = ensemble(s);
  p.alpha = e.alpha;
  p.b = e.b;
  p.a1 = e.a1;
  p.a2 = e.a2;
  p.constant_c = s.real("c");
  p.c1 = s.real("c1");
  p.c_minus1 = s.real("cm1");
  p.tauP = s.real("taup");
  p.g11 = s.real("g11");
  p.d = positive(s, "d");
  const std::string kind = s.str("kind");
  if (kind == "I") {
    std::optional<double> a;
    if (s.str("a") != "auto") a = s.real("a");
    const double v = rate_I_symmetric(Measure1D::uniform(s.reals("atoms")), p, a);
    if (bare) {
      out << format_real(v) << '\n';
    } else {
      out << "rate\n" << format_real(v) << '\n';
    }
    return;
  }
  double (*f)(double, const RateParams&) = nullptr;
  if (kind == "J") f = rate_J;
  if (kind == "K") f = rate_K;
  if (kind == "L") f = rate_L;
  require(f != nullptr, "kind must be J, K, L or I");
  const auto xs = s.reals("x");
  if (bare) {
    out << format_real(f(xs[0], p)) << '\n';
    return;
  }
  out << "x,rate\n";
  for (double x : xs) out << format_real(x) << ',' << format_real(f(x, p)) << '\n';
}

ExperimentConfig experiment(const Settings& s, bool with_ensemble) {
  ExperimentConfig c;
  if (with_ensemble) {
    c.ens = ensemble(s);
    c.lpp_alpha = c.ens.alpha;
    c.functional = parse_functional(s.str("functional"));
    c.poly = s.str("poly");
    c.t_grid = s.reals("t");
    c.kappa = s.real("kappa");
  } else {
    c.lpp_alpha = s.real("alpha");
  }
  c.lpp_dim = static_cast<int>(s.integer("dim"));
  c.ns = s.ints("n");
  c.replicas = positive(s, "replicas");
  c.seed = seed_of(s);
  c.threads = threads_of(s);
  return c;
}

ErrorCurveOptions curve_options(const Settings& s) {
  ErrorCurveOptions o;
  o.theta = s.real("theta");
  o.shape_grid = positive(s, "shape_grid");
  o.shape_n = static_cast<int>(s.integer("shape_n"));
  o.shape_replicas = positive(s, "shape_replicas");
  return o;
}

void cmd_lpp(const Settings& s, std::ostream& out) {
  const auto cfg = experiment(s, false);
  const std::string hash = s.hash("lpp");
  for (const auto& r : lpp_equivalent(cfg, curve_options(s))) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["alpha"] = cfg.lpp_alpha;
    j["seed"] = cfg.seed;
    j["T"] = r.T;
    j["T_det"] = r.T_det;
    j["g11_hat"] = r.g11_hat;
    j["T_stderr"] = r.T_stderr;
    j["g11_stderr"] = r.g11_stderr;
    j["replicas"] = cfg.replicas;
    j["config_hash"] = hash;
    out << j.dump() << '\n';
  }
}

void cmd_audit(const Settings& s, std::ostream& out, const std::string& header) {
  const auto cfg = experiment(s, true);
  const std::string mode = s.str("mode");
  if (mode == "concentration") {
    write_concentration_csv(out, header, concentration_audit(cfg));
  } else if (mode == "error") {
    write_error_csv(out, header, equivalent_error_curve(parse_error_kind(s.str("kind")), cfg, curve_options(s)));
  } else if (mode == "tail") {
    write_tail_csv(out, header, tail_rate(cfg, s.real("x")));
  } else if (mode == "records") {
    out << header << '\n';
    for (int n : cfg.ns) write_replica_records(out, s.hash("audit"), cfg, n, replica_values(cfg, n));
  } else {
    throw DomainError("mode must be concentration, error, tail or records");
  }
}

void cmd_net(const Settings& s, std::ostream& out) {
  const auto eps = s.reals("eps");
  const auto sizes = greedy_net(s.real("p"), s.real("q"), eps, positive(s, "m"), positive(s, "trials"), seed_of(s));
  out << "eps,size\n";
  for (std::size_t i = 0; i < eps.size(); ++i) out << format_real(eps[i]) << ',' << sizes[i] << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Large-deviation and concentration experiments for heavy-tailed Wigner matrices and last passage "
               "percolation",
               "ldplab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  const auto table = commands();
  std::map<std::string, std::map<std::string, std::string>> given;
  std::map<std::string, std::string> config_path;
  for (const auto& c : table) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path[c.name], "flat key=value file; flags override it")->type_name("FILE");
    for (const auto& k : c.keys) sub->add_option("--" + k.name, given[c.name][k.name], k.help + " [" + k.fallback + "]")->type_name("VALUE");
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 1;
  }

  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const Command& command = *std::find_if(table.begin(), table.end(), [&](const Command& c) { return c.name == name; });

  try {
    Settings s;
    std::set<std::string> known;
    for (const auto& k : command.keys) {
      s.values[k.name] = k.fallback;
      known.insert(k.name);
    }
    if (sub->get_option("--config")->count() > 0) read_config_file(config_path[name], known, s);
    for (const auto& k : command.keys)
      if (sub->get_option("--" + k.name)->count() > 0) s.values[k.name] = given[name][k.name];

    const std::string header = s.header(name);
    const bool to_file = !s.str("out").empty();
    std::ostringstream body;
    if (name == "rate") {
      const bool bare = !to_file && (s.str("kind") == "I" || split(s.str("x")).size() == 1);
      if (!bare) body << header << '\n';
      cmd_rate(s, body, bare);
    } else if (name == "audit") {
      cmd_audit(s, body, header);
    } else {
      body << header << '\n';
      if (name == "sample") cmd_sample(s, body);
      if (name == "spectrum") cmd_spectrum(s, body);
      if (name == "freeconv") cmd_freeconv(s, body);
      if (name == "lpp") cmd_lpp(s, body);
      if (name == "net") cmd_net(s, body);
    }

    if (to_file) {
      std::ofstream f(s.str("out"), std::ios::binary);
      require(static_cast<bool>(f), "out: cannot open '" + s.str("out") + "'");
      f << body.str();
      require(static_cast<bool>(f.flush()), "out: write failed");
    } else {
      out << body.str();
    }
    return 0;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ldp::cli
