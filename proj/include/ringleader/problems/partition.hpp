#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ringleader/errors.hpp"
#include "ringleader/rng.hpp"

namespace ringleader {

// Equal-size non-IID split: each client gets exactly trimmed_size / clients
// samples, with class proportions drawn from Dirichlet(alpha, ..., alpha).
struct DirichletPartition {
  double alpha = 0.0;
  std::size_t clients = 0;
  std::size_t classes = 0;
  std::size_t trimmed_size = 0;
  std::vector<std::vector<std::size_t>> class_counts;  // [client][class]
  std::vector<std::vector<std::size_t>> samples;       // [client] -> dataset indices

  std::size_t per_client() const { return clients == 0 ? 0 : trimmed_size / clients; }
};

// alpha == +inf gives the uniform limit.
inline std::vector<double> sample_dirichlet(std::size_t k, double alpha, Rng& rng) {
  std::vector<double> p(k, 1.0 / static_cast<double>(k));
  if (std::isinf(alpha)) return p;
  if (!(alpha > 0.0)) throw ConfigurationError("Dirichlet concentration must be positive");
  std::gamma_distribution<double> gamma(alpha, 1.0);
  double total = 0.0;
  for (auto& v : p) {
    v = gamma(rng);
    total += v;
  }
  if (!(total > 0.0)) {
    // every gamma draw underflowed (tiny alpha): all mass on one class
    std::fill(p.begin(), p.end(), 0.0);
    p[rng.below(k)] = 1.0;
    return p;
  }
  for (auto& v : p) v /= total;
  return p;
}

// Largest-remainder rounding of proportions * total; entries sum to total.
inline std::vector<std::size_t> round_to_total(std::span<const double> proportions, std::size_t total) {
  std::vector<std::size_t> out(proportions.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < proportions.size(); ++c) {
    const double exact = proportions[c] * static_cast<double>(total);
    out[c] = static_cast<std::size_t>(std::floor(exact));
    assigned += out[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; assigned < total; ++j, ++assigned) {
    ++out[remainders[j % remainders.size()].second];
  }
  return out;
}

// Serves requests client by client. A class pool that runs dry gives what it
// has; the shortfall is topped up from the class with the most remaining
// samples (lowest index on ties). Returns realized counts.
inline std::vector<std::vector<std::size_t>> allocate_with_topup(
    const std::vector<std::vector<std::size_t>>& requests, std::vector<std::size_t> pool_sizes) {
  std::vector<std::vector<std::size_t>> realized;
  realized.reserve(requests.size());
  for (const auto& request : requests) {
    if (request.size() != pool_sizes.size()) {
      throw ConfigurationError("allocation request has the wrong number of classes");
    }
    std::vector<std::size_t> got(pool_sizes.size(), 0);
    std::size_t wanted = 0;
    std::size_t taken = 0;
    for (std::size_t c = 0; c < pool_sizes.size(); ++c) {
      wanted += request[c];
      got[c] = std::min(request[c], pool_sizes[c]);
      pool_sizes[c] -= got[c];
      taken += got[c];
    }
    while (taken < wanted) {
      const auto it = std::max_element(pool_sizes.begin(), pool_sizes.end());
      if (*it == 0) throw ConfigurationError("class pools exhausted before all requests were met");
      const std::size_t c = static_cast<std::size_t>(it - pool_sizes.begin());
      const std::size_t t = std::min(wanted - taken, *it);
      got[c] += t;
      *it -= t;
      taken += t;
    }
    realized.push_back(std::move(got));
  }
  return realized;
}

inline DirichletPartition dirichlet_partition(std::span<const std::size_t> labels, std::size_t classes,
                                              std::size_t clients, double alpha, std::uint64_t seed) {
  if (classes < 2) throw ConfigurationError("partition: need at least two classes");
  if (clients < 1) throw ConfigurationError("partition: need at least one client");
  const std::size_t trimmed = labels.size() - labels.size() % clients;
  if (trimmed == 0) throw ConfigurationError("partition: fewer samples than clients");
  Rng rng(seed);

  std::vector<std::vector<std::size_t>> pools(classes);
  for (std::size_t j = 0; j < trimmed; ++j) {
    if (labels[j] >= classes) throw ConfigurationError("partition: label out of range");
    pools[labels[j]].push_back(j);
  }
  for (auto& pool : pools) {
    for (std::size_t j = pool.size(); j > 1; --j) std::swap(pool[j - 1], pool[rng.below(j)]);
  }

  DirichletPartition out;
  out.alpha = alpha;
  out.clients = clients;
  out.classes = classes;
  out.trimmed_size = trimmed;
  std::vector<std::vector<std::size_t>> requests;
  for (std::size_t j = 0; j < clients; ++j) {
    const auto p = sample_dirichlet(classes, alpha, rng);
    requests.push_back(round_to_total(p, out.per_client()));
  }
  std::vector<std::size_t> pool_sizes;
  for (const auto& pool : pools) pool_sizes.push_back(pool.size());
  out.class_counts = allocate_with_topup(requests, pool_sizes);

  std::vector<std::size_t> cursor(classes, 0);
  out.samples.resize(clients);
  for (std::size_t j = 0; j < clients; ++j) {
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t t = 0; t < out.class_counts[j][c]; ++t) {
        out.samples[j].push_back(pools[c][cursor[c]++]);
      }
    }
  }
  return out;
}

}  // namespace ringleader
