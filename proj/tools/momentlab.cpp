// momentlab command-line driver.
//
// Exit codes: 0 success, 1 a check failed, 2 usage error, 3 resource limit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "momentlab/bounds.hpp"
#include "momentlab/errors.hpp"
#include "momentlab/experiments.hpp"
#include "momentlab/recovery.hpp"

using namespace momentlab;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

struct RunConfig {
  int n = 3;
  std::string n_range;
  int d = 5;
  std::string d_range = "5..8";
  int m = 0;  // 0: parameter-counting rank
  std::uint64_t seed = 42;
  std::uint64_t prime_seed = 1729;
  double tol = 1e-8;
  std::string out;
  std::string format = "json";
  bool format_given = false;
  unsigned workers = 1;
  double memory_budget_mb = 4096;

  int max_d = 8;
  int trials = 3;
  bool exploratory = false;
  std::vector<int> degrees{6};
  double perturb = 1e-3;
  std::string weights = "uniform";
  int n1 = 0;
  int n2 = 0;

  ExperimentConfig experiment() const {
    ExperimentConfig c;
    c.prime_seed = prime_seed;
    c.tol = tol;
    c.workers = workers;
    return c;
  }
};

std::vector<int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) return {std::stoi(text)};
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw DomainError("empty range '" + text + "'");
    std::vector<int> out;
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  } catch (const std::logic_error&) {
    throw DomainError("bad range '" + text + "' (expected a or a..b)");
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void check_budget(std::size_t rows, std::size_t cols, const RunConfig& cfg) {
  // Two prime engines and the float engine, 8 bytes per entry each.
  const double mb = 3.0 * static_cast<double>(rows) * static_cast<double>(cols) * 8.0 / (1024.0 * 1024.0);
  if (mb > cfg.memory_budget_mb) {
    std::ostringstream os;
    os << "estimated " << mb << " MB for a " << rows << " x " << cols << " matrix exceeds the budget of "
       << cfg.memory_budget_mb << " MB";
    throw ResourceLimit(os.str());
  }
}

json rational_json(const Rational& q) { return q.get_str(); }

json mixture_json(const MixtureParams<FloatRing>& mix) {
  json comps = json::array();
  for (const auto& c : mix.components)
    comps.push_back({{"weight", c.weight}, {"mean", c.params.mean}, {"sigma_upper", c.params.quad}});
  return comps;
}

int cmd_moment_table(const RunConfig& cfg) {
  if (cfg.max_d < 1 || cfg.max_d > 9) throw DomainError("moment-table: --max-d must lie in 1..9");
  Output out(cfg.out);
  for (int d = 1; d <= cfg.max_d; ++d) {
    const auto p = bivariate_moment_poly(d);
    if (cfg.format_given && cfg.format == "json") {
      std::vector<std::string> coeffs;
      for (const auto& c : p.coeffs) coeffs.push_back(c.get_str());
      out.stream() << json{{"d", d}, {"form", p.to_string()}, {"coefficients", coeffs}}.dump() << '\n';
    } else {
      out.stream() << "s_" << d << " = " << p.to_string() << '\n';
    }
  }
  return kOk;
}

int cmd_secant_scan(const RunConfig& cfg) {
  const auto ns = parse_range(cfg.n_range.empty() ? std::to_string(cfg.n) : cfg.n_range);
  if (cfg.d < 4) throw DomainError("secant-scan: --d must be at least 4");
  for (int n : ns) {
    if (n < 1) throw DomainError("secant-scan: n must be positive");
    const int m = cfg.m > 0 ? cfg.m : parameter_count_rank(n, cfg.d);
    check_budget(static_cast<std::size_t>(m) * gm_dimension(n), monomial_count(n, cfg.d), cfg);
  }

  std::vector<ExperimentRecord> records;
  json rows = json::array();
  bool failed = false;
  for (int n : ns) {
    const int m = cfg.m > 0 ? cfg.m : parameter_count_rank(n, cfg.d);
    try {
      if (m < 1) throw DomainError("parameter-counting rank is 0");
      records.push_back(secant_dimension(n, cfg.d, m, cfg.seed, cfg.experiment()));
      rows.push_back(to_json(records.back()));
    } catch (const Error& e) {
      failed = true;
      const json err{{"n", n}, {"d", cfg.d}, {"m", m}, {"error", e.what()}};
      std::cerr << err.dump() << '\n';
      rows.push_back(err);
    }
  }
  Output out(cfg.out);
  if (cfg.format == "csv")
    out.stream() << to_csv(records);
  else
    for (const auto& r : rows) out.stream() << r.dump() << '\n';
  return failed ? kCheckFailed : kOk;
}

int cmd_contact(const RunConfig& cfg) {
  Output out(cfg.out);
  bool ok = true;
  for (int d : parse_range(cfg.d_range)) {
    const auto r = contact_kernel(cfg.n, d, cfg.trials, cfg.seed, cfg.experiment(), cfg.exploratory);
    if (d >= 5 && !r.certified) ok = false;
    out.stream() << to_json(r).dump() << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_bounds(const RunConfig& cfg) {
  const auto r = bound_report(cfg.n, cfg.d, cfg.m > 0 ? std::optional<int>(cfg.m) : std::nullopt);
  json j{{"n", r.n},
         {"d", r.d},
         {"dim_forms", r.dim_forms.get_str()},
         {"dim_gm", r.dim_gm.get_str()},
         {"param_count_max_m", rational_json(r.param_count_max_m)},
         {"param_count_floor", r.param_count_floor.get_str()},
         {"certified_max_m", r.certified_max_m.get_str()}};
  if (r.m) j["m"] = *r.m;
  if (r.mm_margin) j["mm_margin"] = *r.mm_margin;
  if (r.generic_rank)
    j["generic_rank"] = {{"lower", r.generic_rank->lower.get_str()}, {"upper", r.generic_rank->upper.get_str()}};
  if (cfg.n >= 2) {
    const auto s = splitting_optimizer(cfg.n);
    const auto c = splitting_constraints(s.n1, s.n2);
    json split{{"n1", s.n1}, {"n2", s.n2}, {"m", s.m.get_str()}, {"c1", rational_json(c.c1)}, {"c2", rational_json(c.c2)}};
    // Show the closed-form polynomials whenever they disagree with the binomials.
    if (c.c1 != c.c1_polynomial) split["c1_polynomial"] = rational_json(c.c1_polynomial);
    if (c.c2 != c.c2_polynomial) split["c2_polynomial"] = rational_json(c.c2_polynomial);
    j["splitting"] = split;
  }
  Output out(cfg.out);
  out.stream() << j.dump() << '\n';
  return kOk;
}

int cmd_recover(const RunConfig& cfg) {
  if (cfg.weights != "uniform" && cfg.weights != "free") throw DomainError("recover: --weights is uniform or free");
  const auto mode = cfg.weights == "free" ? WeightsMode::free : WeightsMode::uniform_fixed;
  const int m = cfg.m > 0 ? cfg.m : 2;
  const auto truth = random_mixture(cfg.n, m, cfg.seed, mode);
  const auto problem = make_problem(truth, cfg.degrees, mode);
  const auto init = perturb(truth, cfg.perturb, cfg.seed + 1, mode);
  auto result = refine(init, problem);
  result.matched_error = match_components(result.mixture, truth).max_error;
  const json j{{"n", cfg.n},
               {"m", m},
               {"degrees", cfg.degrees},
               {"weights", cfg.weights},
               {"seed", cfg.seed},
               {"perturb", cfg.perturb},
               {"converged", result.converged},
               {"iterations", result.iterations},
               {"residual_norm", result.residual_norm},
               {"matched_error", result.matched_error},
               {"mixture", mixture_json(result.mixture)}};
  Output out(cfg.out);
  out.stream() << j.dump() << '\n';
  return result.converged ? kOk : kCheckFailed;
}

int cmd_koszul(const RunConfig& cfg) {
  const int m = cfg.m > 0 ? cfg.m : 2;
  check_budget(static_cast<std::size_t>(m) * gm_dimension(cfg.n), monomial_count(cfg.n, 4), cfg);
  const auto r = koszul_defect_check(cfg.n, m, cfg.seed, cfg.experiment());
  Output out(cfg.out);
  out.stream() << to_json(r).dump() << '\n';
  return r.matches_choose2 && r.koszul_vectors_in_kernel && r.koszul_rank == r.koszul_vectors ? kOk : kCheckFailed;
}

int cmd_split(const RunConfig& cfg) {
  const int m = cfg.m > 0 ? cfg.m : 1;
  const auto r = split_skewness(cfg.n1, cfg.n2, m, cfg.d, cfg.seed, cfg.experiment());
  Output out(cfg.out);
  out.stream() << to_json(r).dump() << '\n';
  return r.full_rank ? kOk : kCheckFailed;
}

void print_error(const char* kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian moment varieties: moment forms, secant dimensions, bounds and recovery"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;

  app.add_option("--seed", cfg.seed, "Sampling seed (MOMENTLAB_SEED overrides)")->capture_default_str();
  app.add_option("--prime-seed", cfg.prime_seed, "Seed choosing the rank primes")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Relative singular-value tolerance of the float engine")->capture_default_str();
  app.add_option("--out", cfg.out, "Output file (default stdout)");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--workers", cfg.workers, "Parallel block assembly")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--memory-budget-mb", cfg.memory_budget_mb, "Refuse runs above this estimate")->capture_default_str();

  auto* table = app.add_subcommand("moment-table", "Print s_d(l, q) for d = 1..max-d");
  table->add_option("--max-d", cfg.max_d)->capture_default_str();

  auto* scan = app.add_subcommand("secant-scan", "Secant dimensions at the parameter-counting rank");
  scan->add_option("--n", cfg.n);
  scan->add_option("--n-range", cfg.n_range, "a..b");
  scan->add_option("--d", cfg.d)->capture_default_str();
  scan->add_option("--m", cfg.m, "Fixed rank (default: parameter-counting rank)");

  auto* contact = app.add_subcommand("contact", "First-order contact kernel dimension");
  contact->add_option("--n", cfg.n)->capture_default_str();
  contact->add_option("--d-range", cfg.d_range, "a..b")->capture_default_str();
  contact->add_option("--trials", cfg.trials)->capture_default_str();
  contact->add_flag("--exploratory", cfg.exploratory, "Allow d = 4 (never certified)");

  auto* bounds = app.add_subcommand("bounds", "Closed-form thresholds");
  bounds->add_option("--n", cfg.n)->required();
  bounds->add_option("--d", cfg.d)->required();
  bounds->add_option("--m", cfg.m);

  auto* recover = app.add_subcommand("recover", "Local recovery from exact moments");
  recover->add_option("--n", cfg.n)->capture_default_str();
  recover->add_option("--m", cfg.m, "Components (default 2)");
  recover->add_option("--degrees", cfg.degrees)->delimiter(',')->capture_default_str();
  recover->add_option("--perturb", cfg.perturb)->capture_default_str();
  recover->add_option("--weights", cfg.weights, "uniform or free")->capture_default_str();

  auto* koszul = app.add_subcommand("koszul", "Degree-4 defect against the Koszul syzygies");
  koszul->add_option("--n", cfg.n)->capture_default_str();
  koszul->add_option("--m", cfg.m, "Components (default 2)");

  auto* split = app.add_subcommand("split", "Variable-splitting tangent-sum rank");
  split->add_option("--n1", cfg.n1)->required();
  split->add_option("--n2", cfg.n2)->required();
  split->add_option("--m", cfg.m)->required();
  split->add_option("--d", cfg.d)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  cfg.format_given = app.get_option("--format")->count() > 0;
  if (const char* env = std::getenv("MOMENTLAB_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::logic_error&) {
      print_error("usage", std::string("MOMENTLAB_SEED is not an unsigned integer: ") + env);
      return kUsage;
    }
  }

  try {
    if (*table) return cmd_moment_table(cfg);
    if (*scan) return cmd_secant_scan(cfg);
    if (*contact) return cmd_contact(cfg);
    if (*bounds) return cmd_bounds(cfg);
    if (*recover) return cmd_recover(cfg);
    if (*koszul) return cmd_koszul(cfg);
    if (*split) return cmd_split(cfg);
  } catch (const ResourceLimit& e) {
    print_error("resource_limit", e.what());
    return kResource;
  } catch (const DomainError& e) {
    print_error("domain", e.what());
    return kUsage;
  } catch (const DivergenceError& e) {
    print_error("divergence", e.what());
    return kCheckFailed;
  } catch (const ConsensusError& e) {
    print_error("consensus", e.what());
    return kCheckFailed;
  } catch (const std::exception& e) {
    print_error("error", e.what());
    return kCheckFailed;
  }
  return kUsage;
}
