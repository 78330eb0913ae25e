#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "compnet/community.hpp"

namespace compnet {

namespace {

// Weighted graph for one aggregation level. The diagonal holds the weight
// internal to an aggregated node (counted in both directions).
struct LevelGraph {
  std::size_t n = 0;
  std::vector<double> w;
  std::vector<double> k;
  double two_m = 0.0;

  double at(std::size_t i, std::size_t j) const { return w[i * n + j]; }
};

LevelGraph from_projection(const Projection& p) {
  LevelGraph g;
  g.n = p.size();
  g.w.assign(p.weights.values().begin(), p.weights.values().end());
  g.k = p.strength;
  g.two_m = 2.0 * p.total_weight;
  return g;
}

// Graph whose nodes are the communities of `community` (ids 0..count-1).
LevelGraph aggregate(const LevelGraph& g, const std::vector<std::size_t>& community,
                     std::size_t count) {
  LevelGraph out;
  out.n = count;
  out.w.assign(count * count, 0.0);
  out.k.assign(count, 0.0);
  out.two_m = g.two_m;
  for (std::size_t i = 0; i < g.n; ++i) {
    out.k[community[i]] += g.k[i];
    for (std::size_t j = 0; j < g.n; ++j) {
      const double w = g.at(i, j);
      if (w != 0.0) out.w[community[i] * count + community[j]] += w;
    }
  }
  return out;
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& gen) {
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[gen() % i]);
}

// Moves single nodes to the neighbouring community with the largest
// modularity gain until a full sweep changes nothing. Returns whether any
// node moved.
bool local_moving(const LevelGraph& g, std::vector<std::size_t>& community, std::mt19937_64& gen) {
  std::vector<double> total(g.n, 0.0);
  std::vector<std::size_t> members(g.n, 0);
  for (std::size_t i = 0; i < g.n; ++i) {
    total[community[i]] += g.k[i];
    ++members[community[i]];
  }

  std::vector<std::size_t> order(g.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, gen);

  std::vector<double> link(g.n, 0.0);
  std::vector<std::size_t> touched;
  touched.reserve(g.n);
  bool any_move = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::size_t i : order) {
      const std::size_t from = community[i];
      for (std::size_t j = 0; j < g.n; ++j) {
        if (j == i) continue;
        const double w = g.at(i, j);
        if (w == 0.0) continue;
        const std::size_t c = community[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }

      // Gain of joining c, up to a positive factor: link_c - tot_c k_i / 2m.
      const double ki = g.k[i];
      total[from] -= ki;
      --members[from];
      std::size_t best = from;
      double best_gain = link[from] - total[from] * ki / g.two_m;
      const double eps = 1e-12 * (std::abs(best_gain) + ki);
      for (std::size_t c : touched) {
        const double gain = link[c] - total[c] * ki / g.two_m;
        if (gain > best_gain + eps) {
          best_gain = gain;
          best = c;
        }
      }
      // Leaving for an empty community has gain 0.
      if (members[from] > 0 && best_gain < -eps) {
        for (std::size_t c = 0; c < g.n; ++c)
          if (members[c] == 0) {
            best = c;
            break;
          }
      }
      total[best] += ki;
      ++members[best];
      community[i] = best;
      if (best != from) moved = any_move = true;

      for (std::size_t c : touched) link[c] = 0.0;
      link[from] = 0.0;
      touched.clear();
    }
  }
  return any_move;
}

// Louvain passes starting from `assignment` (singletons for a fresh run).
std::vector<std::size_t> louvain_run(const LevelGraph& base, std::vector<std::size_t> assignment,
                                     std::mt19937_64& gen) {

  for (;;) {
    // Aggregate by the current assignment and let communities merge.
    std::size_t count = canonicalize_labels(assignment);
    bool merged = false;
    for (;;) {
      const LevelGraph level = aggregate(base, assignment, count);
      std::vector<std::size_t> community(level.n);
      std::iota(community.begin(), community.end(), std::size_t{0});
      if (!local_moving(level, community, gen)) break;
      const std::size_t next_count = canonicalize_labels(community);
      for (auto& a : assignment) a = community[a];
      merged = next_count < count;
      count = next_count;
      if (!merged) break;
    }
    // Single-node refinement on the original graph; stop when it is stable.
    if (!local_moving(base, assignment, gen)) break;
  }
  canonicalize_labels(assignment);
  return assignment;
}

// Vertex-mover sweeps: every node moves once, each time to the best
// community available (possibly lowering Q), then the best prefix of the
// sequence is kept. Escapes optima that need a swap or a chain of moves.
// Repeats while a sweep improves Q, at most n times.
void vertex_mover(const LevelGraph& g, std::vector<std::size_t>& labels) {
  const std::size_t n = g.n;
  canonicalize_labels(labels);
  std::vector<double> link(n * n, 0.0);  // link[i * n + c]: weight from i into c
  std::vector<double> total(n, 0.0);
  std::vector<std::size_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    total[labels[i]] += g.k[i];
    ++size[labels[i]];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) link[i * n + labels[j]] += g.at(i, j);
  }
  auto apply = [&](std::size_t i, std::size_t to) {
    const std::size_t from = labels[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double w = g.at(i, j);
      if (w == 0.0 || j == i) continue;
      link[j * n + from] -= w;
      link[j * n + to] += w;
    }
    total[from] -= g.k[i];
    total[to] += g.k[i];
    --size[from];
    ++size[to];
    labels[i] = to;
  };

  // Gains are in weight units; one unit of Q is two_m / 2 of them.
  const double tol = 1e-12 * g.two_m;
  std::vector<std::size_t> active;
  for (std::size_t sweep = 0; sweep < n; ++sweep) {
    std::vector<bool> locked(n, false);
    std::vector<std::pair<std::size_t, std::size_t>> moves;  // (node, previous label)
    double gain = 0.0, best_gain = 0.0;
    std::size_t best_len = 0;
    for (std::size_t step = 0; step < n; ++step) {
      active.clear();
      std::size_t empty = n;
      for (std::size_t c = 0; c < n; ++c) {
        if (size[c] > 0) active.push_back(c);
        else if (empty == n) empty = c;
      }
      if (empty != n) active.push_back(empty);

      double pick_gain = -std::numeric_limits<double>::infinity();
      std::size_t pick = n, pick_to = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (locked[i]) continue;
        const std::size_t from = labels[i];
        const double ki = g.k[i];
        const double stay = link[i * n + from] - (total[from] - ki) * ki / g.two_m;
        for (std::size_t c : active) {
          if (c == from || (size[c] == 0 && size[from] == 1)) continue;
          const double d = link[i * n + c] - total[c] * ki / g.two_m - stay;
          if (d > pick_gain) {
            pick_gain = d;
            pick = i;
            pick_to = c;
          }
        }
      }
      if (pick == n) break;
      moves.emplace_back(pick, labels[pick]);
      apply(pick, pick_to);
      locked[pick] = true;
      gain += pick_gain;
      if (gain > best_gain + tol) {
        best_gain = gain;
        best_len = moves.size();
      }
    }
    while (moves.size() > best_len) {
      apply(moves.back().first, moves.back().second);
      moves.pop_back();
    }
    if (best_len == 0) break;
  }
  canonicalize_labels(labels);
}

// Kick for the iterated search: merge two random communities, scatter one
// into singletons, or reassign a random quarter of the nodes.
std::vector<std::size_t> perturb(std::vector<std::size_t> labels, std::mt19937_64& gen) {
  const std::size_t n = labels.size();
  const std::size_t count = canonicalize_labels(labels);
  switch (gen() % 3) {
    case 0:
      if (count >= 2) {
        const std::size_t a = gen() % count;
        std::size_t b = gen() % (count - 1);
        if (b >= a) ++b;
        for (auto& l : labels)
          if (l == b) l = a;
        break;
      }
      [[fallthrough]];
    case 1: {
      const std::size_t a = gen() % count;
      std::size_t next = count;
      bool first = true;
      for (auto& l : labels)
        if (l == a) {
          if (!first) l = next++;
          first = false;
        }
      break;
    }
    default:
      for (std::size_t k = 0; k < std::max<std::size_t>(2, n / 4); ++k)
        labels[gen() % n] = gen() % (count + 1);
      break;
  }
  return labels;
}

}  // namespace

Partition optimize_modularity(const Projection& graph, const ModularityOptions& options) {
  const std::size_t n = graph.size();
  Partition best;
  best.labels.resize(n);
  std::iota(best.labels.begin(), best.labels.end(), std::size_t{0});
  best.n_communities = n;
  best.modularity = 0.0;
  if (graph.total_weight <= 0.0 || n == 0) return best;

  const LevelGraph base = from_projection(graph);
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  bool have = false;
  std::vector<std::size_t> singletons(n);
  std::iota(singletons.begin(), singletons.end(), std::size_t{0});
  for (std::size_t r = 0; r < restarts; ++r) {
    std::mt19937_64 gen(derive_seed(options.seed, r));
    auto labels = louvain_run(base, singletons, gen);
    vertex_mover(base, labels);
    const double q = modularity(graph, labels);
    if (!have || q > best.modularity) {
      best.labels = std::move(labels);
      best.modularity = q;
      have = true;
    }
  }
  // Iterated local search from the best partition. Equal-quality results
  // replace the incumbent so the search can drift across plateaus.
  std::mt19937_64 gen(derive_seed(options.seed, restarts));
  for (std::size_t r = 0; r < restarts; ++r) {
    auto labels = louvain_run(base, perturb(best.labels, gen), gen);
    vertex_mover(base, labels);
    const double q = modularity(graph, labels);
    if (q >= best.modularity - 1e-14 * std::abs(best.modularity)) {
      if (q > best.modularity) best.modularity = q;
      best.labels = std::move(labels);
    }
  }
  vertex_mover(base, best.labels);
  best.modularity = modularity(graph, best.labels);
  best.n_communities = canonicalize_labels(best.labels);
  return best;
}

}  // namespace compnet
