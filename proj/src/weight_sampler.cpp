#include "pmcdm/weight_sampler.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "pmcdm/error.hpp"

namespace pmcdm {

std::string to_string(ConstraintMode mode) {
  return mode == ConstraintMode::Literal ? "literal" : "reject-resample";
}

ConstraintMode constraint_mode_from_string(std::string_view s) {
  if (s == "literal") return ConstraintMode::Literal;
  if (s == "reject-resample" || s == "reject") return ConstraintMode::RejectResample;
  throw Error(ErrorKind::Parse, "unknown constraint mode: '" + std::string(s) + "'");
}

WeightBounds weight_bounds(int m, double min_weight) {
  if (m < 2 || m > 5)
    throw Error(ErrorKind::Domain,
                "weight bounds defined for m in {2..5}, got m=" + std::to_string(m));
  if (!(min_weight >= 0.0 && min_weight < 0.2))
    throw Error(ErrorKind::Domain, "min_weight must lie in [0, 0.2)");
  WeightBounds bounds;
  bounds.low = min_weight;
  bounds.high = 1.0 + min_weight - min_weight * static_cast<double>(m);
  return bounds;
}

std::vector<double> lhs_samples(int n, double low, double high, RandomStream& stream) {
  if (n < 1) throw Error(ErrorKind::Domain, "lhs_samples needs n >= 1");
  if (!(low < high)) throw Error(ErrorKind::Domain, "lhs_samples needs low < high");

  const double width = (high - low) / static_cast<double>(n);
  std::vector<double> samples(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    samples[static_cast<std::size_t>(i)] =
        low + (static_cast<double>(i) + stream.next_double()) * width;

  // Per-column permutation; without it every column would be rank-identical
  // and the normalized weights would collapse toward 1/m.
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(stream.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(samples[static_cast<std::size_t>(i)], samples[j]);
  }
  return samples;
}

void normalize_row(std::span<double> row) {
  double sum = 0.0;
  for (double w : row) sum += w;
  if (!(sum > 0.0)) throw Error(ErrorKind::Domain, "cannot normalize a nonpositive row");
  for (double& w : row) w /= sum;
}

RandomStream criterion_column_stream(std::uint64_t seed, std::string_view criterion_id,
                                     int column) {
  return derive_stream(seed, "lhs:" + std::string(criterion_id),
                       static_cast<std::uint64_t>(column));
}

std::vector<double> sample_criterion_weights(std::string_view criterion_id, int m,
                                             const SamplerConfig& config,
                                             int redraw_cap) {
  if (config.n_runs < 1) throw Error(ErrorKind::Domain, "n_runs must be >= 1");
  if (m < 1 || m > 5)
    throw Error(ErrorKind::Domain,
                "criterion " + std::string(criterion_id) + ": m out of range");

  const auto n = static_cast<std::size_t>(config.n_runs);
  const auto width = static_cast<std::size_t>(m);
  std::vector<double> block(n * width, 1.0);
  if (m == 1) return block;  // sum-to-one forces the single weight to 1

  const WeightBounds bounds = weight_bounds(m, config.min_weight);
  for (int col = 0; col < m; ++col) {
    RandomStream stream = criterion_column_stream(config.seed, criterion_id, col);
    const std::vector<double> column =
        lhs_samples(config.n_runs, bounds.low, bounds.high, stream);
    for (std::size_t run = 0; run < n; ++run)
      block[run * width + static_cast<std::size_t>(col)] = column[run];
  }

  for (std::size_t run = 0; run < n; ++run) {
    const std::span<double> row(block.data() + run * width, width);
    normalize_row(row);
    if (config.mode == ConstraintMode::Literal) continue;

    // Fresh uniform redraws, streamed per row so the result does not depend
    // on which other rows needed redrawing.
    int attempts = 0;
    RandomStream redraw = derive_stream(config.seed,
                                        "resample:" + std::string(criterion_id), run);
    while (*std::min_element(row.begin(), row.end()) < config.min_weight) {
      if (++attempts > redraw_cap)
        throw Error(ErrorKind::Domain,
                    "criterion " + std::string(criterion_id) +
                        ": redraw cap exceeded; min_weight " +
                        std::to_string(config.min_weight) + " is infeasible for m=" +
                        std::to_string(m));
      for (double& w : row)
        w = bounds.low + redraw.next_double() * (bounds.high - bounds.low);
      normalize_row(row);
    }
  }
  return block;
}

const WeightMatrix::Block* WeightMatrix::block_for(std::string_view criterion_id) const {
  for (const auto& block : blocks)
    if (block.criterion_id == criterion_id) return &block;
  return nullptr;
}

WeightMatrix build_weight_matrix(const DecisionTree& tree, const SamplerConfig& config) {
  WeightMatrix matrix;
  matrix.n_runs = config.n_runs;

  struct Pending {
    std::string criterion_id;
    int m = 0;
    std::vector<double> block;
  };
  std::vector<Pending> pending;
  for (const auto& req : tree.requirements) {
    for (const auto& crit : req.criteria) {
      Pending p;
      p.criterion_id = crit.id;
      p.m = static_cast<int>(crit.indicators.size());
      pending.push_back(std::move(p));
      for (const auto& ind : crit.indicators) matrix.indicator_ids.push_back(ind.id);
    }
  }

  // Blocks are keyed by (seed, criterion id), so this loop could run in any
  // order or in parallel without changing the result.
  for (auto& p : pending)
    p.block = sample_criterion_weights(p.criterion_id, p.m, config);

  const auto columns = static_cast<std::size_t>(matrix.columns());
  matrix.cells.assign(static_cast<std::size_t>(config.n_runs) * columns, 0.0);
  int offset = 0;
  for (const auto& p : pending) {
    matrix.blocks.push_back({p.criterion_id, offset, p.m});
    const auto width = static_cast<std::size_t>(p.m);
    for (std::size_t run = 0; run < static_cast<std::size_t>(config.n_runs); ++run)
      for (std::size_t j = 0; j < width; ++j)
        matrix.cells[run * columns + static_cast<std::size_t>(offset) + j] =
            p.block[run * width + j];
    offset += p.m;
  }
  return matrix;
}

std::string weight_matrix_csv(const WeightMatrix& matrix) {
  std::ostringstream out;
  out << "run";
  for (const auto& id : matrix.indicator_ids) out << ',' << id;
  out << '\n';
  char buf[32];
  for (int run = 0; run < matrix.n_runs; ++run) {
    out << run;
    for (double w : matrix.row(run)) {
      std::snprintf(buf, sizeof buf, "%.17g", w);
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace pmcdm
