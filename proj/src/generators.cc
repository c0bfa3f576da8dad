#include <cmath>
#include <random>

#include "critnet/errors.h"
#include "critnet/netmodel.h"

namespace critnet {

Topology GenerateRandomTopology(int num_nodes, const WaxmanParams& params, uint64_t seed) {
  if (num_nodes < 3) throw ValidationError("random topology needs at least 3 nodes");
  if (!(params.alpha > 0) || !(params.beta > 0) || params.beta > 1) {
    throw ValidationError("Waxman parameters need alpha > 0 and 0 < beta <= 1");
  }
  if (params.min_degree > num_nodes - 1) {
    throw ValidationError("min_degree exceeds num_nodes - 1");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    std::vector<double> x(num_nodes), y(num_nodes);
    for (int i = 0; i < num_nodes; ++i) {
      x[i] = unit(rng);
      y[i] = unit(rng);
    }
    double max_distance = 0.0;
    for (int i = 0; i < num_nodes; ++i) {
      for (int j = i + 1; j < num_nodes; ++j) {
        max_distance = std::max(max_distance, std::hypot(x[i] - x[j], y[i] - y[j]));
      }
    }
    std::vector<Link> links;
    std::vector<int> degree(num_nodes, 0);
    for (int i = 0; i < num_nodes; ++i) {
      for (int j = i + 1; j < num_nodes; ++j) {
        double distance = std::hypot(x[i] - x[j], y[i] - y[j]);
        double p = params.beta * std::exp(-distance / (params.alpha * max_distance));
        if (unit(rng) < p) {
          links.push_back({i, j, 1.0});
          ++degree[i];
          ++degree[j];
        }
      }
    }
    if (*std::min_element(degree.begin(), degree.end()) < params.min_degree) continue;
    Topology topology(num_nodes, std::move(links));
    if (topology.IsConnected()) return topology;
  }
  throw ValidationError("no connected Waxman graph found within " +
                        std::to_string(params.max_attempts) + " attempts");
}

TrafficMatrix GenerateGravityTm(const Topology& topology, double total_volume, uint64_t seed,
                                const GravityOptions& options) {
  if (!(total_volume > 0) || !std::isfinite(total_volume)) {
    throw ValidationError("total volume must be positive");
  }
  const int n = topology.num_nodes();
  if (n < 2) throw ValidationError("gravity model needs at least 2 nodes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(-1.0, 0.0);
  std::vector<double> mass(n, 1.0);
  if (!options.uniform_masses) {
    for (double& m : mass) m = std::pow(10.0, exponent(rng));
  }
  double weight_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) weight_sum += mass[i] * mass[j];
    }
  }
  TrafficMatrix tm(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) tm.Set(i, j, total_volume * mass[i] * mass[j] / weight_sum);
    }
  }
  return tm;
}

Topology AssignRandomCapacities(const Topology& topology, double base_capacity, uint64_t seed) {
  if (!(base_capacity > 0) || !std::isfinite(base_capacity)) {
    throw ValidationError("base capacity must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> quarter(1, 4);
  std::vector<double> capacities(topology.num_links());
  for (double& c : capacities) c = base_capacity * quarter(rng) / 4.0;
  return topology.WithCapacities(capacities);
}

}  // namespace critnet
