#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "compnet/nestedness.hpp"

namespace compnet {

namespace {

struct Adjacency {
  std::vector<std::vector<std::size_t>> row_cols;
  std::vector<std::vector<std::size_t>> col_rows;

  explicit Adjacency(const BinaryBipartite& m)
      : row_cols(m.n_rows()), col_rows(m.n_cols()) {
    for (std::size_t i = 0; i < m.n_rows(); ++i)
      for (std::size_t a = 0; a < m.n_cols(); ++a)
        if (m(i, a)) {
          row_cols[i].push_back(a);
          col_rows[a].push_back(i);
        }
  }
};

// Scale so the mean over all entries (empty ones included, as zeros) is 1.
// Values are kept strictly positive: very unbalanced matrices can drive
// some fitnesses towards zero, and a hard zero would turn the next
// complexity update into 1/inf.
void normalize(std::vector<double>& v, const std::vector<std::vector<std::size_t>>& support) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double scale = static_cast<double>(v.size()) / sum;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (support[k].empty()) {
      v[k] = 0.0;
      continue;
    }
    v[k] = std::max(v[k] * scale, std::numeric_limits<double>::min());
  }
}

void step(const Adjacency& adj, const std::vector<double>& fitness,
          const std::vector<double>& complexity, std::vector<double>& next_fitness,
          std::vector<double>& next_complexity) {
  next_fitness.assign(fitness.size(), 0.0);
  next_complexity.assign(complexity.size(), 0.0);
  for (std::size_t i = 0; i < adj.row_cols.size(); ++i) {
    double s = 0.0;
    for (std::size_t a : adj.row_cols[i]) s += complexity[a];
    next_fitness[i] = s;
  }
  for (std::size_t a = 0; a < adj.col_rows.size(); ++a) {
    if (adj.col_rows[a].empty()) continue;
    double s = 0.0;
    for (std::size_t i : adj.col_rows[a]) s += 1.0 / fitness[i];
    next_complexity[a] = 1.0 / s;
  }
  normalize(next_fitness, adj.row_cols);
  normalize(next_complexity, adj.col_rows);
}

double max_relative_change(const std::vector<double>& before, const std::vector<double>& after) {
  double worst = 0.0;
  for (std::size_t k = 0; k < before.size(); ++k) {
    if (before[k] == 0.0) continue;
    worst = std::max(worst, std::abs(after[k] - before[k]) / before[k]);
  }
  return worst;
}

}  // namespace

FitnessComplexity fitness_complexity(const BinaryBipartite& matrix,
                                     const FitnessComplexityOptions& options) {
  if (matrix.links() == 0) throw InputError("Fitness-Complexity needs at least one link");
  const Adjacency adj(matrix);

  FitnessComplexity state;
  state.fitness.assign(matrix.n_rows(), 1.0);
  state.complexity.assign(matrix.n_cols(), 1.0);
  normalize(state.fitness, adj.row_cols);
  normalize(state.complexity, adj.col_rows);

  std::vector<double> next_fitness;
  std::vector<double> next_complexity;
  while (state.iterations < options.max_iter) {
    step(adj, state.fitness, state.complexity, next_fitness, next_complexity);
    ++state.iterations;
    const double change = std::max(max_relative_change(state.fitness, next_fitness),
                                   max_relative_change(state.complexity, next_complexity));
    state.fitness.swap(next_fitness);
    state.complexity.swap(next_complexity);
    if (change < options.tol) {
      state.converged = true;
      break;
    }
  }
  return state;
}

FitnessComplexity fitness_complexity_step(const BinaryBipartite& matrix,
                                          const FitnessComplexity& current) {
  if (current.fitness.size() != matrix.n_rows() || current.complexity.size() != matrix.n_cols())
    throw InputError("fitness/complexity vectors do not match the matrix");
  const Adjacency adj(matrix);
  FitnessComplexity next;
  step(adj, current.fitness, current.complexity, next.fitness, next.complexity);
  next.iterations = current.iterations + 1;
  next.converged = current.converged;
  return next;
}

Ordering Ordering::identity(std::size_t n_rows, std::size_t n_cols) {
  Ordering o;
  o.rows.resize(n_rows);
  o.cols.resize(n_cols);
  std::iota(o.rows.begin(), o.rows.end(), std::size_t{0});
  std::iota(o.cols.begin(), o.cols.end(), std::size_t{0});
  return o;
}

Ordering pack_order(const BinaryBipartite& matrix, PackingMethod method,
                    const FitnessComplexityOptions& fc_options) {
  Ordering order = Ordering::identity(matrix.n_rows(), matrix.n_cols());
  const auto k_rows = matrix.row_degrees();
  const auto k_cols = matrix.col_degrees();

  if (method == PackingMethod::degree || matrix.links() == 0) {
    std::stable_sort(order.rows.begin(), order.rows.end(),
                     [&](std::size_t a, std::size_t b) { return k_rows[a] > k_rows[b]; });
    std::stable_sort(order.cols.begin(), order.cols.end(),
                     [&](std::size_t a, std::size_t b) { return k_cols[a] > k_cols[b]; });
    return order;
  }

  const FitnessComplexity fc = fitness_complexity(matrix, fc_options);
  std::stable_sort(order.rows.begin(), order.rows.end(), [&](std::size_t a, std::size_t b) {
    return fc.fitness[a] > fc.fitness[b];
  });
  std::stable_sort(order.cols.begin(), order.cols.end(), [&](std::size_t a, std::size_t b) {
    const bool empty_a = k_cols[a] == 0;
    const bool empty_b = k_cols[b] == 0;
    if (empty_a != empty_b) return empty_b;
    return fc.complexity[a] < fc.complexity[b];
  });
  return order;
}

}  // namespace compnet
