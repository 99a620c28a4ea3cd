#include "fnav/harness.hpp"

namespace fnav::harness {

double compute_sr(std::span<const EpisodeResult> results) {
  if (results.empty()) throw Error(ErrorCode::EmptyBenchmark, "SR over zero episodes");
  double sum = 0.0;
  for (const auto& r : results) sum += r.success ? 1.0 : 0.0;
  return sum / static_cast<double>(results.size());
}

double compute_spl(std::span<const EpisodeResult> results) {
  if (results.empty()) throw Error(ErrorCode::EmptyBenchmark, "SPL over zero episodes");
  double sum = 0.0;
  for (const auto& r : results) sum += r.spl_term();
  return sum / static_cast<double>(results.size());
}

}  // namespace fnav::harness
