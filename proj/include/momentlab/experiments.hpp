#pragma once

// Secant-dimension, degree-4 defect, variable-splitting and contact-locus
// experiments, plus their CSV/JSON records.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "momentlab/rank_engine.hpp"
#include "momentlab/tangent_secant.hpp"

namespace momentlab {

struct ExperimentConfig {
  std::uint64_t prime_seed = 1729;
  double tol = 1e-8;
  int bound = 10;
  unsigned workers = 1;
  /// Fresh-seed retries after a consensus disagreement.
  int max_retries = 3;
};

struct ExperimentRecord {
  int n = 0;
  int d = 0;
  int m = 0;
  std::uint64_t seed = 0;
  /// Seed of the accepted draw (differs from `seed` after a retry).
  std::uint64_t sample_seed = 0;
  int attempts = 1;
  std::size_t secant_dimension = 0;
  std::size_t expected_dimension = 0;
  std::size_t defect = 0;
  RankReport engine_report;
};

/// min(m * n(n+3)/2, C(n+d-1, d)).
std::size_t expected_secant_dimension(int n, int d, int m);

/// floor(C(n+d-1, d) / (n(n+3)/2)).
int parameter_count_rank(int n, int d);

/// Seed for the k-th retry of a draw.
std::uint64_t retry_seed(std::uint64_t seed, int attempt);

/// Matrix source building the secant matrix of `sample` directly in each
/// ring the engines need.
MatrixSource secant_source(const ParameterSample& sample, int d, unsigned workers = 1);

ExperimentRecord secant_dimension(int n, int d, int m, std::uint64_t seed, const ExperimentConfig& cfg = {});

/// One record per n at the parameter-counting rank; d in 4..8.
std::vector<ExperimentRecord> max_rank_scan(const std::vector<int>& ns, int d, std::uint64_t seed,
                                            const ExperimentConfig& cfg = {});

struct KoszulReport {
  ExperimentRecord record;
  std::size_t defect = 0;
  std::size_t koszul_vectors = 0;    // C(m, 2)
  std::size_t koszul_rank = 0;       // rank of the stacked Koszul vectors
  bool koszul_vectors_in_kernel = false;
  bool matches_choose2 = false;
};

/// Degree-4 defect and the explicit syzygies (l_j^2 + q_j) p_i = -(l_i^2 + q_i) p_j.
/// Requires the non-filling regime m n(n+3)/2 <= C(n+3, 4).
KoszulReport koszul_defect_check(int n, int m, std::uint64_t seed, const ExperimentConfig& cfg = {});

/// Left-kernel vector of the degree-4 secant matrix for the pair (i, j).
std::vector<Rational> koszul_vector(const std::vector<GaussianParams<RationalField>>& samples, std::size_t i,
                                    std::size_t j);

struct SplitReport {
  int n1 = 0;
  int n2 = 0;
  int m = 0;
  int d = 0;
  std::size_t rank = 0;
  std::size_t full = 0;  // m n(n+3)/2
  bool full_rank = false;
  /// m exceeds one of the splitting constraints; the run is informative only.
  bool beyond_constraints = false;
  RankReport engine_report;
};

/// Quadratic parts live in the first n1 variables, linear parts in the last n2.
SplitReport split_skewness(int n1, int n2, int m, int d, std::uint64_t seed, const ExperimentConfig& cfg = {});

struct ContactReport {
  int n = 0;
  int d = 0;
  std::uint32_t prime = 0;
  std::vector<std::size_t> kernel_dims;
  std::size_t min_kernel_dim = 0;
  bool euler_in_kernel = false;
  /// min_kernel_dim == 1 and d >= 5. A larger kernel is inconclusive.
  bool certified = false;
};

/// First-order tangential contact check at `trials` random points.
/// d < 5 throws unless `exploratory` is set (then certified is false).
ContactReport contact_kernel(int n, int d, int trials = 3, std::uint64_t seed = 42, const ExperimentConfig& cfg = {},
                             bool exploratory = false);

/// CSV columns n, rank (m), secant dimension, expected dimension.
inline constexpr const char* kCsvHeader = "n,rank,secant dimension,expected dimension";

struct CsvRow {
  int n = 0;
  int rank = 0;
  std::size_t secant_dimension = 0;
  std::size_t expected_dimension = 0;
};

std::string to_csv(const std::vector<ExperimentRecord>& records);
void emit_csv(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path);
std::vector<CsvRow> parse_csv(const std::string& text);

nlohmann::json to_json(const RankReport& r);
nlohmann::json to_json(const ExperimentRecord& r);
nlohmann::json to_json(const KoszulReport& r);
nlohmann::json to_json(const SplitReport& r);
nlohmann::json to_json(const ContactReport& r);

}  // namespace momentlab
