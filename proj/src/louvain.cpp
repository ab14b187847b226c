#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include "multifuse/netanalysis.hpp"

namespace multifuse {

int Partition::count() const {
  return community.empty() ? 0 : *std::max_element(community.begin(), community.end()) + 1;
}

namespace {

constexpr double kMinGain = 1e-12;

std::vector<int> renumber_by_first_appearance(std::span<const int> community) {
  std::vector<int> remap(community.size() + 1, -1);
  std::vector<int> out(community.size());
  int next = 0;
  for (std::size_t i = 0; i < community.size(); ++i) {
    int& slot = remap[static_cast<std::size_t>(community[i])];
    if (slot < 0) slot = next++;
    out[i] = slot;
  }
  return out;
}

// std::uniform_int_distribution is implementation-defined; this is not.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % range;
}

std::vector<int> shuffled_order(int n, std::mt19937_64& rng) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(bounded(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  return order;
}

/// Weighted graph where self_loop[i] holds the weight of ordered pairs inside
/// node i (nonzero only after aggregation) and degree[i] includes it.
struct Graph {
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> degree;
  double total = 0.0;  // 2W

  int size() const { return static_cast<int>(adj.size()); }
};

Graph graph_from_similarity(const Eigen::MatrixXd& s) {
  const auto n = static_cast<int>(s.rows());
  Graph g;
  g.adj.resize(static_cast<std::size_t>(n));
  g.self_loop.assign(static_cast<std::size_t>(n), 0.0);
  g.degree.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || s(i, j) == 0.0) continue;
      g.adj[static_cast<std::size_t>(i)].emplace_back(j, s(i, j));
      g.degree[static_cast<std::size_t>(i)] += s(i, j);
    }
    g.total += g.degree[static_cast<std::size_t>(i)];
  }
  return g;
}

/// Local-move phase. Returns true if any node changed community.
bool move_nodes(const Graph& g, double resolution, std::mt19937_64& rng, std::vector<int>& comm) {
  const int n = g.size();
  std::vector<double> tot(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) tot[static_cast<std::size_t>(comm[i])] += g.degree[i];

  std::vector<double> link(static_cast<std::size_t>(n), 0.0);
  std::vector<int> touched;
  bool any_move = false;
  const double scale = resolution / g.total;
  for (bool moved = true; moved;) {
    moved = false;
    for (int i : shuffled_order(n, rng)) {
      const auto iu = static_cast<std::size_t>(i);
      const int home = comm[iu];
      const double ki = g.degree[iu];
      touched.clear();
      touched.push_back(home);
      link[static_cast<std::size_t>(home)] = 0.0;
      for (const auto& [j, w] : g.adj[iu]) {
        const int c = comm[static_cast<std::size_t>(j)];
        if (link[static_cast<std::size_t>(c)] == 0.0 &&
            std::find(touched.begin(), touched.end(), c) == touched.end()) {
          touched.push_back(c);
        }
        link[static_cast<std::size_t>(c)] += w;
      }
      tot[static_cast<std::size_t>(home)] -= ki;

      const auto score = [&](int c) {
        return link[static_cast<std::size_t>(c)] - scale * tot[static_cast<std::size_t>(c)] * ki;
      };
      int best = home;
      double best_score = score(home);
      for (int c : touched) {
        const double sc = score(c);
        if (sc > best_score + kMinGain) {
          best = c;
          best_score = sc;
        }
      }
      tot[static_cast<std::size_t>(best)] += ki;
      for (int c : touched) link[static_cast<std::size_t>(c)] = 0.0;
      if (best != home) {
        comm[iu] = best;
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

Graph aggregate(const Graph& g, std::span<const int> comm, int count) {
  Graph out;
  out.adj.resize(static_cast<std::size_t>(count));
  out.self_loop.assign(static_cast<std::size_t>(count), 0.0);
  out.degree.assign(static_cast<std::size_t>(count), 0.0);
  out.total = g.total;
  std::vector<std::vector<double>> w(static_cast<std::size_t>(count),
                                     std::vector<double>(static_cast<std::size_t>(count), 0.0));
  for (int i = 0; i < g.size(); ++i) {
    const auto ci = static_cast<std::size_t>(comm[static_cast<std::size_t>(i)]);
    out.self_loop[ci] += g.self_loop[static_cast<std::size_t>(i)];
    out.degree[ci] += g.degree[static_cast<std::size_t>(i)];
    for (const auto& [j, wij] : g.adj[static_cast<std::size_t>(i)]) {
      const auto cj = static_cast<std::size_t>(comm[static_cast<std::size_t>(j)]);
      if (ci == cj) {
        out.self_loop[ci] += wij;
      } else {
        w[ci][cj] += wij;
      }
    }
  }
  for (int a = 0; a < count; ++a) {
    for (int b = 0; b < count; ++b) {
      if (w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0.0) {
        out.adj[static_cast<std::size_t>(a)].emplace_back(
            b, w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
      }
    }
  }
  return out;
}

}  // namespace

double modularity(const Eigen::MatrixXd& s, std::span<const int> community, double resolution) {
  const Eigen::Index n = s.rows();
  if (static_cast<Eigen::Index>(community.size()) != n) {
    throw Error(ErrorKind::InvalidInput, "partition covers " + std::to_string(community.size()) +
                                             " nodes, graph has " + std::to_string(n));
  }
  if (!(resolution > 0.0)) throw Error(ErrorKind::InvalidParameter, "resolution must be positive");
  int count = 0;
  for (int c : community) {
    if (c < 0) throw Error(ErrorKind::InvalidInput, "negative community index");
    count = std::max(count, c + 1);
  }
  std::vector<double> inside(static_cast<std::size_t>(count), 0.0);
  std::vector<double> tot(static_cast<std::size_t>(count), 0.0);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ci = static_cast<std::size_t>(community[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = s(i, j);
      tot[ci] += w;
      total += w;
      if (community[static_cast<std::size_t>(j)] == community[static_cast<std::size_t>(i)]) {
        inside[ci] += w;
      }
    }
  }
  if (!(total > 0.0)) return 0.0;
  double q = 0.0;
  for (std::size_t c = 0; c < inside.size(); ++c) {
    const double frac = tot[c] / total;
    q += inside[c] / total - resolution * frac * frac;
  }
  return q;
}

double modularity(const SimilarityLayer& s, const Partition& p, double resolution) {
  if (p.labels != s.labels()) {
    throw Error(ErrorKind::InvalidInput, "partition labels do not match the network");
  }
  return modularity(s.matrix(), p.community, resolution);
}

Partition louvain_communities(const SimilarityLayer& s, double resolution, std::uint64_t seed) {
  if (!(resolution > 0.0)) throw Error(ErrorKind::InvalidParameter, "resolution must be positive");
  const Eigen::MatrixXd& m = s.matrix();
  Graph g = graph_from_similarity(m);
  if (!(g.total > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "graph has no positive off-diagonal weight");
  }
  const auto n = static_cast<std::size_t>(s.size());
  std::mt19937_64 rng(seed);

  std::vector<int> membership(n);
  std::iota(membership.begin(), membership.end(), 0);
  double current = modularity(m, membership, resolution);

  while (true) {
    std::vector<int> comm(static_cast<std::size_t>(g.size()));
    std::iota(comm.begin(), comm.end(), 0);
    if (!move_nodes(g, resolution, rng, comm)) break;
    comm = renumber_by_first_appearance(comm);
    const int count = *std::max_element(comm.begin(), comm.end()) + 1;

    std::vector<int> candidate(n);
    for (std::size_t i = 0; i < n; ++i) {
      candidate[i] = comm[static_cast<std::size_t>(membership[i])];
    }
    const double q = modularity(m, candidate, resolution);
    if (q - current <= kMinGain) break;
    membership = std::move(candidate);
    current = q;
    if (count == g.size()) break;
    g = aggregate(g, comm, count);
  }

  Partition p{s.labels(), renumber_by_first_appearance(membership), 0.0};
  p.modularity = modularity(m, p.community, resolution);
  return p;
}

}  // namespace multifuse
