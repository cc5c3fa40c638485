#include "momentlab/experiments.hpp"

#include <fstream>
#include <sstream>

#include "momentlab/bounds.hpp"

namespace momentlab {

namespace {

std::size_t choose2(std::size_t m) { return m * (m - (m > 0 ? 1 : 0)) / 2; }

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
  return out;
}

ExperimentRecord make_record(int n, int d, int m, std::uint64_t seed, std::uint64_t sample_seed, int attempts,
                             RankReport report) {
  ExperimentRecord r;
  r.n = n;
  r.d = d;
  r.m = m;
  r.seed = seed;
  r.sample_seed = sample_seed;
  r.attempts = attempts;
  r.secant_dimension = report.rank;
  r.expected_dimension = expected_secant_dimension(n, d, m);
  r.defect = r.expected_dimension - r.secant_dimension;
  r.engine_report = std::move(report);
  return r;
}

// Runs the consensus on fresh draws until the engines agree.
template <class Draw>
ExperimentRecord agreed_record(int n, int d, int m, std::uint64_t seed, const ExperimentConfig& cfg, Draw draw) {
  const RankEngine engine(cfg.prime_seed, cfg.tol);
  std::string last_error = "engines disagreed";
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    const std::uint64_t s = retry_seed(seed, attempt);
    const ParameterSample sample = draw(s);
    try {
      auto report = engine.consensus(secant_source(sample, d, cfg.workers));
      if (report.agreed) return make_record(n, d, m, seed, s, attempt + 1, std::move(report));
    } catch (const ConsensusError& e) {
      last_error = e.what();
    }
  }
  throw ConsensusError("no rank agreement for (n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                       ", m=" + std::to_string(m) + ") after " + std::to_string(cfg.max_retries + 1) +
                       " draws: " + last_error);
}

}  // namespace

std::size_t expected_secant_dimension(int n, int d, int m) {
  const std::size_t rows = static_cast<std::size_t>(m) * gm_dimension(n);
  return std::min<std::size_t>(rows, monomial_count(n, d));
}

int parameter_count_rank(int n, int d) {
  return static_cast<int>(monomial_count(n, d) / gm_dimension(n));
}

std::uint64_t retry_seed(std::uint64_t seed, int attempt) {
  return seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL;
}

MatrixSource secant_source(const ParameterSample& sample, int d, unsigned workers) {
  MatrixSource src;
  src.rows = static_cast<std::size_t>(sample.m) * gm_dimension(sample.n);
  src.cols = monomial_count(sample.n, d);
  src.modular = [sample, d, workers](const PrimeField& f) {
    return secant_matrix(sample.params(f), d, workers).rows;
  };
  src.floating = [sample, d, workers] { return to_eigen(secant_matrix(sample.params(FloatRing{}), d, workers).rows); };
  return src;
}

ExperimentRecord secant_dimension(int n, int d, int m, std::uint64_t seed, const ExperimentConfig& cfg) {
  if (n < 1 || d < 4 || m < 1) throw DomainError("secant_dimension: need n >= 1, d >= 4, m >= 1");
  return agreed_record(n, d, m, seed, cfg, [&](std::uint64_t s) { return draw_parameters(s, n, m, cfg.bound); });
}

std::vector<ExperimentRecord> max_rank_scan(const std::vector<int>& ns, int d, std::uint64_t seed,
                                            const ExperimentConfig& cfg) {
  if (d < 4 || d > 8) throw DomainError("max_rank_scan: d must lie in 4..8");
  std::vector<ExperimentRecord> out;
  for (int n : ns) {
    const int m = parameter_count_rank(n, d);
    if (m < 1) throw DomainError("max_rank_scan: parameter-count rank is 0 for n=" + std::to_string(n));
    out.push_back(secant_dimension(n, d, m, seed, cfg));
  }
  return out;
}

std::vector<Rational> koszul_vector(const std::vector<GaussianParams<RationalField>>& samples, std::size_t i,
                                    std::size_t j) {
  if (i == j || i >= samples.size() || j >= samples.size()) throw DomainError("koszul_vector: need distinct i, j");
  const int n = samples.front().n;
  const std::size_t br = gm_dimension(n);
  auto second_moment = [](const GaussianParams<RationalField>& p) {
    const auto l = p.linear_form();
    return multiply(l, l) + p.quadratic_form();
  };
  std::vector<Rational> v(br * samples.size(), 0);
  auto place = [&](std::size_t block, const DenseForm<RationalField>& f, int sign) {
    std::size_t r = block * br + static_cast<std::size_t>(n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b, ++r) {
        ExponentVector e(n, 0);
        ++e[a];
        ++e[b];
        v[r] = sign * f.coefficient(e);
      }
  };
  place(i, second_moment(samples[j]), 1);
  place(j, second_moment(samples[i]), -1);
  return v;
}

KoszulReport koszul_defect_check(int n, int m, std::uint64_t seed, const ExperimentConfig& cfg) {
  if (n < 1 || m < 1) throw DomainError("koszul_defect_check: need n, m >= 1");
  if (static_cast<std::size_t>(m) * gm_dimension(n) > monomial_count(n, 4))
    throw DomainError("koszul_defect_check: filling regime (m n(n+3)/2 > C(n+3,4))");
  KoszulReport out;
  out.record = secant_dimension(n, 4, m, seed, cfg);
  out.defect = out.record.defect;

  const auto samples = draw_parameters(out.record.sample_seed, n, m, cfg.bound).params(RationalField{});
  const auto secant = secant_matrix(samples, 4);
  out.koszul_vectors = choose2(static_cast<std::size_t>(m));
  Matrix<Rational> stacked(out.koszul_vectors, secant.rows.rows, Rational(0));
  bool in_kernel = true;
  std::size_t k = 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j, ++k) {
      const auto v = koszul_vector(samples, i, j);
      std::copy(v.begin(), v.end(), stacked.row(k).begin());
      for (std::size_t c = 0; c < secant.rows.cols && in_kernel; ++c) {
        Rational acc = 0;
        for (std::size_t r = 0; r < secant.rows.rows; ++r)
          if (sgn(v[r]) != 0) acc += v[r] * secant.rows(r, c);
        if (sgn(acc) != 0) in_kernel = false;
      }
    }
  out.koszul_vectors_in_kernel = in_kernel;
  out.koszul_rank = out.koszul_vectors == 0 ? 0 : RankEngine(cfg.prime_seed, cfg.tol).consensus(stacked).rank;
  out.matches_choose2 = out.defect == out.koszul_vectors;
  return out;
}

SplitReport split_skewness(int n1, int n2, int m, int d, std::uint64_t seed, const ExperimentConfig& cfg) {
  if (n1 < 1 || n2 < 1 || m < 1) throw DomainError("split_skewness: need n1, n2, m >= 1");
  if (d < 6 || d > 8) throw DomainError("split_skewness: d must lie in 6..8");
  const int n = n1 + n2;
  std::vector<bool> mean_mask(n, false), quad_mask(tri_size(n), false);
  for (int j = n1; j < n; ++j) mean_mask[j] = true;
  for (int a = 0; a < n1; ++a)
    for (int b = a; b < n1; ++b) quad_mask[tri_index(a, b, n)] = true;

  const auto record = agreed_record(n, d, m, seed, cfg, [&](std::uint64_t s) {
    return draw_parameters(s, n, m, cfg.bound, mean_mask, quad_mask);
  });
  const auto constraints = splitting_constraints(n1, n2);
  SplitReport r;
  r.n1 = n1;
  r.n2 = n2;
  r.m = m;
  r.d = d;
  r.rank = record.secant_dimension;
  r.full = static_cast<std::size_t>(m) * gm_dimension(n);
  r.full_rank = r.rank == r.full;
  r.beyond_constraints = Integer(m) > constraints.c1_floor || Integer(m) > constraints.c2_floor;
  r.engine_report = record.engine_report;
  return r;
}

ContactReport contact_kernel(int n, int d, int trials, std::uint64_t seed, const ExperimentConfig& cfg,
                             bool exploratory) {
  if (n < 2) throw DomainError("contact_kernel: need n >= 2");
  if (trials < 1) throw DomainError("contact_kernel: need at least one trial");
  if (d < 5 && !(exploratory && d == 4))
    throw DomainError("contact_kernel: certification needs d >= 5 (d = 4 only with exploratory output)");
  const PrimeField f(RankEngine(cfg.prime_seed, cfg.tol).primes().front());
  const std::size_t dirs = gm_dimension(n);

  // Direction basis: (X_j, 0) for each j, then (0, X_a X_b) for a <= b.
  std::vector<DenseForm<PrimeField>> linear, quadratic;
  for (int j = 0; j < n; ++j) linear.push_back(DenseForm<PrimeField>::variable(f, n, j));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) quadratic.push_back(multiply(linear[a], linear[b]));
  const DenseForm<PrimeField> zero1(f, n, 1), zero2(f, n, 2);

  ContactReport report;
  report.n = n;
  report.d = d;
  report.prime = f.modulus();
  report.euler_in_kernel = true;
  for (int t = 0; t < trials; ++t) {
    const auto p = draw_parameters(seed + static_cast<std::uint64_t>(t), n, 1, cfg.bound).params(f).front();
    const auto block = tangent_matrix(p, d);
    const ModMatrix annihilator = kernel_basis_modp(block.rows, f);
    const std::size_t kdim = annihilator.rows;

    ModMatrix dg(dirs * kdim, dirs, 0);
    for (std::size_t col = 0; col < dirs; ++col) {
      const bool is_linear = col < static_cast<std::size_t>(n);
      const auto& a = is_linear ? linear[col] : zero1;
      const auto& b = is_linear ? zero2 : quadratic[col - n];
      const auto d1 = differential(p, d - 1, a, b);
      const auto d2 = differential(p, d - 2, a, b);
      for (std::size_t g = 0; g < dirs; ++g) {
        const bool gen_linear = g < static_cast<std::size_t>(n);
        const auto moved = gen_linear ? multiply(d1, linear[g]) : multiply(d2, quadratic[g - n]);
        const auto proj = multiply_modp(annihilator, moved.coeffs(), f);
        for (std::size_t k = 0; k < kdim; ++k) dg(g * kdim + k, col) = proj[k];
      }
    }

    std::vector<std::uint32_t> euler(dirs, 0);
    const auto q2 = p.quadratic_form().scaled(std::int64_t{2});
    for (int j = 0; j < n; ++j) euler[j] = p.mean[j];
    std::size_t c = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b, ++c) {
        ExponentVector e(n, 0);
        ++e[a];
        ++e[b];
        euler[n + c] = q2.coefficient(e);
      }
    for (auto x : multiply_modp(dg, euler, f))
      if (x != 0) report.euler_in_kernel = false;

    report.kernel_dims.push_back(dirs - rank_modp(dg, f));
  }
  report.min_kernel_dim = *std::min_element(report.kernel_dims.begin(), report.kernel_dims.end());
  report.certified = d >= 5 && report.min_kernel_dim == 1;
  return report;
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records)
    os << r.n << ',' << r.m << ',' << r.secant_dimension << ',' << r.expected_dimension << '\n';
  return os.str();
}

void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit_csv: cannot open " + path.string());
  out << to_csv(records);
  if (!out) throw Error("emit_csv: write failed for " + path.string());
}

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw DomainError("parse_csv: missing or wrong header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, c, d;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || !std::getline(fields, c, ',') ||
        !std::getline(fields, d))
      throw DomainError("parse_csv: malformed row '" + line + "'");
    rows.push_back({std::stoi(a), std::stoi(b), std::stoul(c), std::stoul(d)});
  }
  return rows;
}

nlohmann::json to_json(const RankReport& r) {
  nlohmann::json engines = nlohmann::json::array();
  for (const auto& e : r.engines) engines.push_back({{"engine", e.engine}, {"parameter", e.parameter}, {"rank", e.rank}});
  return {{"rank", r.rank}, {"agreed", r.agreed}, {"flagged", r.flagged}, {"engines", engines}};
}

nlohmann::json to_json(const ExperimentRecord& r) {
  return {{"n", r.n},
          {"d", r.d},
          {"m", r.m},
          {"seed", r.seed},
          {"sample_seed", r.sample_seed},
          {"attempts", r.attempts},
          {"secant_dimension", r.secant_dimension},
          {"expected_dimension", r.expected_dimension},
          {"defect", r.defect},
          {"engine_report", to_json(r.engine_report)}};
}

nlohmann::json to_json(const KoszulReport& r) {
  return {{"record", to_json(r.record)},
          {"defect", r.defect},
          {"koszul_vectors", r.koszul_vectors},
          {"koszul_rank", r.koszul_rank},
          {"koszul_vectors_in_kernel", r.koszul_vectors_in_kernel},
          {"matches_choose2", r.matches_choose2}};
}

nlohmann::json to_json(const SplitReport& r) {
  return {{"n1", r.n1},         {"n2", r.n2},
          {"m", r.m},           {"d", r.d},
          {"rank", r.rank},     {"full", r.full},
          {"full_rank", r.full_rank}, {"beyond_constraints", r.beyond_constraints},
          {"engine_report", to_json(r.engine_report)}};
}

nlohmann::json to_json(const ContactReport& r) {
  return {{"n", r.n},
          {"d", r.d},
          {"prime", r.prime},
          {"kernel_dims", r.kernel_dims},
          {"kernel_dim", r.min_kernel_dim},
          {"euler_in_kernel", r.euler_in_kernel},
          {"certified", r.certified}};
}

}  // namespace momentlab
