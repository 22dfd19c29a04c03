#ifndef PMCDM_WEIGHT_SAMPLER_HPP
#define PMCDM_WEIGHT_SAMPLER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmcdm/hierarchy.hpp"
#include "pmcdm/rng.hpp"

namespace pmcdm {

enum class ConstraintMode {
  Literal,         // sample, normalize, keep (normalized minima may dip below min_weight)
  RejectResample,  // redraw rows whose normalized minimum falls below min_weight
};

std::string to_string(ConstraintMode mode);
ConstraintMode constraint_mode_from_string(std::string_view s);

inline constexpr std::uint64_t kDefaultSeed = 42;

struct SamplerConfig {
  int n_runs = 1000;
  std::uint64_t seed = kDefaultSeed;
  double min_weight = 0.1;  // must stay below 1/5 so five-indicator groups fit
  ConstraintMode mode = ConstraintMode::Literal;
};

struct WeightBounds {
  double low = 0.0;
  double high = 1.0;
};

/// Sampling interval for one weight in an m-indicator group:
/// [min_weight, 1 + min_weight - min_weight * m]. Only m in {2..5} admits
/// a nonempty interval under the 0.1 floor.
WeightBounds weight_bounds(int m, double min_weight);

/// Latin hypercube draw: one uniform sample inside each of the n equal-width
/// strata of [low, high], returned in randomly permuted order.
std::vector<double> lhs_samples(int n, double low, double high, RandomStream& stream);

/// n_runs x m row-major block of normalized weights for one criterion.
/// m == 1 yields the all-ones column. Column streams derive from
/// (seed, criterion id, column), so blocks are schedule-independent.
std::vector<double> sample_criterion_weights(std::string_view criterion_id, int m,
                                             const SamplerConfig& config,
                                             int redraw_cap = 10000);

/// Row scaled so it sums to 1.
void normalize_row(std::span<double> row);

/// The stream behind one raw (pre-normalization) column; exposed so tests
/// can regenerate the stratified draws the matrix was built from.
RandomStream criterion_column_stream(std::uint64_t seed, std::string_view criterion_id,
                                     int column);

struct WeightMatrix {
  struct Block {
    std::string criterion_id;
    int offset = 0;  // first column of the block
    int width = 0;   // m

    bool operator==(const Block&) const = default;
  };

  int n_runs = 0;
  std::vector<std::string> indicator_ids;  // column order == tree order
  std::vector<Block> blocks;
  std::vector<double> cells;  // row-major n_runs x indicator count

  int columns() const { return static_cast<int>(indicator_ids.size()); }
  std::span<const double> row(int run) const {
    return {cells.data() + static_cast<std::size_t>(run) * columns(),
            static_cast<std::size_t>(columns())};
  }
  const Block* block_for(std::string_view criterion_id) const;

  bool operator==(const WeightMatrix&) const = default;
};

/// Concatenates per-criterion blocks in tree order.
WeightMatrix build_weight_matrix(const DecisionTree& tree, const SamplerConfig& config);

/// CSV dump: header run,<indicator id>... with 17 significant digits.
std::string weight_matrix_csv(const WeightMatrix& matrix);

}  // namespace pmcdm

#endif
