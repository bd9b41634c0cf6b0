#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace groupwalk {

// A labelling of n items; only the induced partition matters.
using Partition = std::vector<std::int64_t>;

struct Contingency {
  // counts[i][j] = items in row cluster i and column cluster j. Clusters are
  // ordered by first appearance in the respective partition.
  std::vector<std::vector<std::int64_t>> counts;
  std::vector<std::int64_t> row_sums;
  std::vector<std::int64_t> col_sums;
  std::int64_t n = 0;
};

// Throws ContractViolation on a length mismatch or empty partitions.
Contingency contingency(const Partition& u, const Partition& v);

// Natural-log entropy of the clustering given by cluster sizes.
double entropy(const std::vector<std::int64_t>& sizes, std::int64_t n);

double mutual_information(const Contingency& table);

// Expected MI under the hypergeometric (fixed-marginals permutation) model,
// summed exactly over every feasible cell count.
double expected_mutual_information(const Contingency& table);

// (MI - E[MI]) / (max(H(u), H(v)) - E[MI]). When the denominator vanishes
// returns 1 for identical partitions, otherwise 0. Can be slightly negative.
double ami(const Partition& u, const Partition& v);

// Arithmetic mean of per-frame AMI over (prediction, truth) pairs.
double sequence_score(const std::vector<std::pair<Partition, Partition>>& frames);

}  // namespace groupwalk
