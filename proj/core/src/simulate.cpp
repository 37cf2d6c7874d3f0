#include <algorithm>
#include <random>
#include <thread>

#include "nestfold/error.hpp"
#include "nestfold/walk.hpp"

namespace nestfold {

namespace {

// splitmix64 finalizer; decorrelates neighbouring (seed, path) pairs before
// they seed the engine.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream of one path, derived from (seed, path index) alone.
std::mt19937_64 path_stream(std::uint64_t seed, long long path) {
  return std::mt19937_64(mix(seed ^ mix(static_cast<std::uint64_t>(path))));
}

int worker_count(const SimulationConfig& c) {
  int t = c.threads > 0 ? c.threads : static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, t);
}

// Runs path(id, rng, worker) for every path id over contiguous chunks.
template <typename Body>
void parallel_blocks(std::uint64_t seed, long long count, int workers, Body path) {
  workers = static_cast<int>(std::min<long long>(workers, std::max<long long>(count, 1)));
  auto run = [&](long long first, long long last, int w) {
    for (long long id = first; id < last; ++id) {
      auto rng = path_stream(seed, id);
      path(id, rng, w);
    }
  };
  if (workers <= 1) {
    run(0, count, 0);
    return;
  }
  std::vector<std::thread> pool;
  const long long chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long first = std::min(count, w * chunk);
    const long long last = std::min(count, first + chunk);
    pool.emplace_back([=, &run] { run(first, last, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SimulationResult simulate_paths(const GridGraph& grid, const FoldIndex& fold, int start,
                                const SimulationConfig& config) {
  if (config.count < 0 || config.steps < 0) throw DomainError("negative path count or length");
  if (start < 0 || start >= grid.vertex_count()) throw DomainError("start vertex outside the grid");
  const int workers = worker_count(config);
  std::vector<std::vector<long long>> hist(workers, std::vector<long long>(fold.size(), 0));
  std::vector<long long> escaped(workers, 0);
  std::vector<std::vector<PathRecord>> archives(workers);

  parallel_blocks(config.seed, config.count, workers, [&](long long path, std::mt19937_64& rng, int w) {
    const bool keep = path < config.archive_paths;
    int v = start;
    bool gone = false;
    if (keep) archives[w].push_back({path, 0, v, fold.folded(v)});
    for (int step = 1; step <= config.steps; ++step) {
      const auto nb = grid.neighbors(v);
      std::uniform_int_distribution<int> pick(0, static_cast<int>(nb.size()) - 1);
      v = nb[pick(rng)];
      if (keep) archives[w].push_back({path, step, v, fold.folded(v)});
      if (grid.is_frontier(v)) {
        gone = true;
        break;
      }
    }
    if (gone) {
      ++escaped[w];
    } else {
      ++hist[w][fold.folded(v)];
    }
  });

  SimulationResult out;
  out.folded_histogram.assign(fold.size(), 0);
  for (int w = 0; w < workers; ++w) {
    for (int i = 0; i < fold.size(); ++i) out.folded_histogram[i] += hist[w][i];
    out.escaped += escaped[w];
    out.archive.insert(out.archive.end(), archives[w].begin(), archives[w].end());
  }
  return out;
}

FirstHitSample simulate_first_hits(const GridGraph& grid, const std::vector<int>& vertex_labels,
                                   int start, const SimulationConfig& config, int horizon) {
  if (start < 0 || start >= grid.vertex_count()) throw DomainError("start vertex outside the grid");
  const int k = grid.spec().k;
  const int workers = worker_count(config);
  std::vector<std::vector<long long>> counts(workers, std::vector<long long>(k, 0));
  std::vector<long long> unfinished(workers, 0);
  parallel_blocks(config.seed, config.count, workers, [&](long long, std::mt19937_64& rng, int w) {
    int v = start;
    bool hit = false;
    for (int step = 1; step <= horizon; ++step) {
      const auto nb = grid.neighbors(v);
      std::uniform_int_distribution<int> pick(0, static_cast<int>(nb.size()) - 1);
      v = nb[pick(rng)];
      if (v != start && vertex_labels[v] >= 0) {
        ++counts[w][vertex_labels[v]];
        hit = true;
        break;
      }
      if (grid.is_frontier(v)) break;
    }
    if (!hit) ++unfinished[w];
  });
  FirstHitSample out;
  out.label_counts.assign(k, 0);
  for (int w = 0; w < workers; ++w) {
    for (int a = 0; a < k; ++a) out.label_counts[a] += counts[w][a];
    out.unfinished += unfinished[w];
  }
  return out;
}

}  // namespace nestfold
