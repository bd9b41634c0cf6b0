#include "groupwalk/eval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "groupwalk/error.hpp"

namespace groupwalk {

namespace {

constexpr double kDegenerate = 1e-12;

std::vector<std::size_t> dense_index(const Partition& p, std::size_t& clusters) {
  std::unordered_map<std::int64_t, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(p.size());
  for (std::int64_t l : p) {
    out.push_back(ids.try_emplace(l, ids.size()).first->second);
  }
  clusters = ids.size();
  return out;
}

double log_factorial(std::int64_t k) { return std::lgamma(static_cast<double>(k) + 1.0); }

}  // namespace

Contingency contingency(const Partition& u, const Partition& v) {
  if (u.size() != v.size()) {
    throw ContractViolation("contingency: partitions cover different numbers of items");
  }
  if (u.empty()) {
    throw ContractViolation("contingency: partitions are empty");
  }
  std::size_t ru = 0;
  std::size_t rv = 0;
  const auto iu = dense_index(u, ru);
  const auto iv = dense_index(v, rv);

  Contingency t;
  t.n = static_cast<std::int64_t>(u.size());
  t.counts.assign(ru, std::vector<std::int64_t>(rv, 0));
  t.row_sums.assign(ru, 0);
  t.col_sums.assign(rv, 0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    ++t.counts[iu[k]][iv[k]];
    ++t.row_sums[iu[k]];
    ++t.col_sums[iv[k]];
  }
  return t;
}

double entropy(const std::vector<std::int64_t>& sizes, std::int64_t n) {
  const auto total = static_cast<double>(n);
  double h = 0.0;
  for (std::int64_t s : sizes) {
    if (s > 0) {
      const double p = static_cast<double>(s) / total;
      h -= p * std::log(p);
    }
  }
  return h;
}

double mutual_information(const Contingency& t) {
  const auto n = static_cast<double>(t.n);
  double mi = 0.0;
  for (std::size_t i = 0; i < t.row_sums.size(); ++i) {
    for (std::size_t j = 0; j < t.col_sums.size(); ++j) {
      const auto nij = static_cast<double>(t.counts[i][j]);
      if (nij > 0.0) {
        const double a = static_cast<double>(t.row_sums[i]);
        const double b = static_cast<double>(t.col_sums[j]);
        mi += nij / n * std::log(n * nij / (a * b));
      }
    }
  }
  return mi;
}

double expected_mutual_information(const Contingency& t) {
  const std::int64_t n = t.n;
  const auto nd = static_cast<double>(n);
  const double log_n_fact = log_factorial(n);
  double emi = 0.0;
  for (std::int64_t a : t.row_sums) {
    for (std::int64_t b : t.col_sums) {
      const std::int64_t lo = std::max<std::int64_t>(1, a + b - n);
      const std::int64_t hi = std::min(a, b);
      const double fixed = log_factorial(a) + log_factorial(b) + log_factorial(n - a) +
                           log_factorial(n - b) - log_n_fact;
      for (std::int64_t nij = lo; nij <= hi; ++nij) {
        const auto x = static_cast<double>(nij);
        const double log_p = fixed - log_factorial(nij) - log_factorial(a - nij) -
                             log_factorial(b - nij) - log_factorial(n - a - b + nij);
        emi += x / nd * std::log(nd * x / (static_cast<double>(a) * static_cast<double>(b))) *
               std::exp(log_p);
      }
    }
  }
  return emi;
}

double ami(const Partition& u, const Partition& v) {
  const Contingency t = contingency(u, v);
  // Identical partitions (up to relabelling) give a one-to-one table.
  const bool identical = t.row_sums.size() == t.col_sums.size() &&
                         std::all_of(t.counts.begin(), t.counts.end(), [](const auto& row) {
                           return std::count_if(row.begin(), row.end(),
                                                [](std::int64_t c) { return c > 0; }) == 1;
                         });
  if (identical) {
    return 1.0;
  }
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double h = std::max(entropy(t.row_sums, t.n), entropy(t.col_sums, t.n));
  const double denom = h - emi;
  if (std::abs(denom) <= kDegenerate) {
    return 0.0;
  }
  return (mi - emi) / denom;
}

double sequence_score(const std::vector<std::pair<Partition, Partition>>& frames) {
  if (frames.empty()) {
    throw ContractViolation("sequence_score needs at least one frame");
  }
  double sum = 0.0;
  for (const auto& [z, g] : frames) {
    sum += ami(z, g);
  }
  return sum / static_cast<double>(frames.size());
}

}  // namespace groupwalk
