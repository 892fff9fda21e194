#include "bpcc/graphgen.hpp"

#include <random>

namespace bpcc {

Dag random_structured_dag(uint64_t seed, int max_vertices) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> ids;
  std::vector<Edge> edges;

  int counter = 0;
  auto fresh = [&]() {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "v%03d", counter++);
    ids.emplace_back(buf);
    return ids.back();
  };

  std::string tail = fresh(); // START
  int budget = max_vertices - 1;

  while (budget > 0) {
    bool block = budget >= 4 && std::uniform_int_distribution<int>(0, 2)(rng) == 0;
    if (block) {
      int branches = std::uniform_int_distribution<int>(2, std::min(3, (budget - 2)))(rng);
      std::string fork = fresh();
      edges.emplace_back(tail, fork);
      --budget;
      int spare = budget - branches - 1; // room beyond one vertex per branch plus merge
      std::vector<std::string> tails;
      for (int b = 0; b < branches; ++b) {
        int len = 1;
        if (spare > 0) {
          int extra = std::uniform_int_distribution<int>(0, std::min(2, spare))(rng);
          len += extra;
          spare -= extra;
        }
        std::string t = fork;
        for (int i = 0; i < len; ++i) {
          std::string v = fresh();
          edges.emplace_back(t, v);
          t = v;
          --budget;
        }
        tails.push_back(t);
      }
      std::string merge = fresh();
      --budget;
      for (const auto& t : tails) edges.emplace_back(t, merge);
      tail = merge;
    } else {
      int len = std::uniform_int_distribution<int>(1, std::min(3, budget))(rng);
      for (int i = 0; i < len; ++i) {
        std::string v = fresh();
        edges.emplace_back(tail, v);
        tail = v;
        --budget;
      }
    }
  }
  return make_dag(ids, edges);
}

} // namespace bpcc
