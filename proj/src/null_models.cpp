#include "compnet/null_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace compnet {

std::string_view model_name(const NullModel& model) {
  return std::holds_alternative<ErModel>(model) ? "er" : "bicm";
}

ErModel fit_er(const BinaryBipartite& matrix) {
  return ErModel{density(matrix), matrix.n_rows(), matrix.n_cols(), matrix.row_labels(),
                 matrix.col_labels()};
}

double bicm_residual(const Dense<double>& probabilities, std::span<const std::size_t> row_degrees,
                     std::span<const std::size_t> col_degrees) {
  std::vector<double> col_sum(probabilities.cols(), 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < probabilities.rows(); ++i) {
    double row_sum = 0.0;
    const auto row = probabilities.row(i);
    for (std::size_t a = 0; a < row.size(); ++a) {
      row_sum += row[a];
      col_sum[a] += row[a];
    }
    worst = std::max(worst, std::abs(row_sum - static_cast<double>(row_degrees[i])));
  }
  for (std::size_t a = 0; a < col_sum.size(); ++a)
    worst = std::max(worst, std::abs(col_sum[a] - static_cast<double>(col_degrees[a])));
  return worst;
}

namespace {

enum class Status { free, full, empty };

}  // namespace

BicmModel fit_bicm(const BinaryBipartite& matrix, const BicmOptions& options) {
  if (matrix.links() == 0) throw InputError("BiCM needs at least one link");
  if (!(options.damping >= 0.0 && options.damping < 1.0))
    throw InputError("BiCM damping must lie in [0, 1)");

  const std::size_t nr = matrix.n_rows();
  const std::size_t nc = matrix.n_cols();
  const auto k_rows = matrix.row_degrees();
  const auto k_cols = matrix.col_degrees();

  // Peel off rows/columns whose (remaining) degree is 0 or the maximum:
  // their probabilities are forced to 0 or 1 and their multipliers sit at
  // the boundary. Removing one can force another, so repeat until stable.
  std::vector<Status> row_status(nr, Status::free);
  std::vector<Status> col_status(nc, Status::free);
  // Peel step of each line. A cell is decided by whichever of its row and
  // column was peeled first (an empty row peeled before a full column is
  // still empty there).
  constexpr std::size_t never = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> row_step(nr, never), col_step(nc, never);
  std::size_t step = 0;
  std::vector<double> row_target(nr), col_target(nc);
  auto count = [](const std::vector<Status>& status, Status which) {
    return static_cast<double>(std::count(status.begin(), status.end(), which));
  };
  for (bool changed = true; changed;) {
    changed = false;
    const double full_cols = count(col_status, Status::full);
    const double free_cols = count(col_status, Status::free);
    for (std::size_t i = 0; i < nr; ++i) {
      if (row_status[i] != Status::free) continue;
      row_target[i] = static_cast<double>(k_rows[i]) - full_cols;
      if (row_target[i] <= 0.0 || row_target[i] >= free_cols) {
        row_status[i] = row_target[i] <= 0.0 ? Status::empty : Status::full;
        row_step[i] = step;
        changed = true;
      }
    }
    const double full_rows = count(row_status, Status::full);
    const double free_rows = count(row_status, Status::free);
    for (std::size_t a = 0; a < nc; ++a) {
      if (col_status[a] != Status::free) continue;
      col_target[a] = static_cast<double>(k_cols[a]) - full_rows;
      if (col_target[a] <= 0.0 || col_target[a] >= free_rows) {
        col_status[a] = col_target[a] <= 0.0 ? Status::empty : Status::full;
        col_step[a] = step + 1;
        changed = true;
      }
    }
    step += 2;
  }

  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < nr; ++i)
    if (row_status[i] == Status::free) rows.push_back(i);
  for (std::size_t a = 0; a < nc; ++a)
    if (col_status[a] == Status::free) cols.push_back(a);

  BicmModel model;
  model.rows = matrix.row_labels();
  model.cols = matrix.col_labels();
  constexpr double inf = std::numeric_limits<double>::infinity();
  model.x.assign(nr, 0.0);
  model.y.assign(nc, 0.0);
  for (std::size_t i = 0; i < nr; ++i)
    if (row_status[i] == Status::full) model.x[i] = inf;
  for (std::size_t a = 0; a < nc; ++a)
    if (col_status[a] == Status::full) model.y[a] = inf;

  if (!rows.empty() && !cols.empty()) {
    double total = 0.0;
    for (std::size_t i : rows) total += row_target[i];
    const double scale = 1.0 / std::sqrt(total);
    std::vector<double> x(rows.size()), y(cols.size());
    std::vector<double> tx(rows.size()), ty(cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) tx[r] = row_target[rows[r]], x[r] = tx[r] * scale;
    for (std::size_t c = 0; c < cols.size(); ++c) ty[c] = col_target[cols[c]], y[c] = ty[c] * scale;

    std::vector<double> row_p(rows.size()), row_q(rows.size());
    std::vector<double> col_p(cols.size()), col_q(cols.size());
    // Iterate past `tol` towards tol * 1e-3 so that individual
    // probabilities, not just their sums, are accurate; stop polishing once
    // the residual stalls at rounding level.
    const double polish = options.tol * 1e-3;
    double residual = inf, best = inf;
    std::size_t iter = 0, stalled = 0;
    for (;; ++iter) {
      std::fill(col_p.begin(), col_p.end(), 0.0);
      std::fill(col_q.begin(), col_q.end(), 0.0);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        double sp = 0.0, sq = 0.0;
        const double xr = x[r];
        for (std::size_t c = 0; c < cols.size(); ++c) {
          const double inv = 1.0 / (1.0 + xr * y[c]);
          const double pc = xr * y[c] * inv;
          sp += pc;
          sq += y[c] * inv;
          col_p[c] += pc;
          col_q[c] += xr * inv;
        }
        row_p[r] = sp;
        row_q[r] = sq;
      }
      residual = 0.0;
      for (std::size_t r = 0; r < rows.size(); ++r)
        residual = std::max(residual, std::abs(row_p[r] - tx[r]));
      for (std::size_t c = 0; c < cols.size(); ++c)
        residual = std::max(residual, std::abs(col_p[c] - ty[c]));
      if (residual < best) {
        stalled = residual < 0.99 * best ? 0 : stalled + 1;
        best = residual;
      } else {
        ++stalled;
      }
      if (residual < polish || iter >= options.max_iter) break;
      if (residual < options.tol && stalled >= 20) break;

      const double keep = options.damping;
      for (std::size_t r = 0; r < rows.size(); ++r)
        x[r] = keep * x[r] + (1.0 - keep) * tx[r] / row_q[r];
      for (std::size_t c = 0; c < cols.size(); ++c)
        y[c] = keep * y[c] + (1.0 - keep) * ty[c] / col_q[c];
    }
    model.iterations = iter;
    if (!(residual < options.tol))
      throw ConvergenceError("BiCM fixed-point iteration did not converge (residual " +
                                 std::to_string(residual) + ")",
                             residual, iter);
    for (std::size_t r = 0; r < rows.size(); ++r) model.x[rows[r]] = x[r];
    for (std::size_t c = 0; c < cols.size(); ++c) model.y[cols[c]] = y[c];
  }

  model.probabilities = Dense<double>(nr, nc, 0.0);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t a = 0; a < nc; ++a) {
      double& p = model.probabilities(i, a);
      if (row_step[i] != never || col_step[a] != never) {
        const Status decided = row_step[i] < col_step[a] ? row_status[i] : col_status[a];
        p = decided == Status::full ? 1.0 : 0.0;
      } else {
        const double xy = model.x[i] * model.y[a];
        p = xy / (1.0 + xy);
      }
    }
  model.residual = bicm_residual(model.probabilities, k_rows, k_cols);
  return model;
}

// Sampling

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// 53-bit uniform in [0, 1); independent of the standard library's
// distribution implementations, so samples are reproducible everywhere.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

BinaryBipartite sample(const ErModel& model, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Dense<std::uint8_t> cells(model.n_rows, model.n_cols, 0);
  for (auto& c : cells.values()) c = uniform01(gen) < model.p ? 1 : 0;
  Labels rows = model.rows ? model.rows : index_labels("r", model.n_rows);
  Labels cols = model.cols ? model.cols : index_labels("c", model.n_cols);
  return BinaryBipartite(std::move(rows), std::move(cols), std::move(cells));
}

BinaryBipartite sample(const BicmModel& model, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const auto& prob = model.probabilities;
  Dense<std::uint8_t> cells(prob.rows(), prob.cols(), 0);
  const auto p = prob.values();
  auto out = cells.values();
  for (std::size_t k = 0; k < p.size(); ++k) out[k] = uniform01(gen) < p[k] ? 1 : 0;
  Labels rows = model.rows ? model.rows : index_labels("r", prob.rows());
  Labels cols = model.cols ? model.cols : index_labels("c", prob.cols());
  return BinaryBipartite(std::move(rows), std::move(cols), std::move(cells));
}

BinaryBipartite sample(const NullModel& model, std::uint64_t seed) {
  return std::visit([seed](const auto& m) { return sample(m, seed); }, model);
}

}  // namespace compnet
