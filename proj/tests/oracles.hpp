#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Union-find over nodes joined by weights >= threshold (off-diagonal only).
// Returns a canonical labelling (first node 1, next new component 2, ...).
inline std::vector<int> connected_components(const Eigen::MatrixXd& w, double threshold) {
  const auto n = static_cast<std::size_t>(w.rows());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >= threshold) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::map<std::size_t, int> label;
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(label.try_emplace(find(i), static_cast<int>(label.size()) + 1).first->second);
  }
  return out;
}

template <typename L>
std::vector<int> canonical(const std::vector<L>& labels) {
  std::map<L, int> seen;
  std::vector<int> out;
  for (const L& l : labels) {
    out.push_back(seen.try_emplace(l, static_cast<int>(seen.size()) + 1).first->second);
  }
  return out;
}

// MI straight from the definition over a map-based joint histogram.
template <typename L>
double mutual_information(const std::vector<L>& u, const std::vector<L>& v) {
  const double n = static_cast<double>(u.size());
  std::map<std::pair<L, L>, double> joint;
  std::map<L, double> pu;
  std::map<L, double> pv;
  for (std::size_t i = 0; i < u.size(); ++i) {
    joint[{u[i], v[i]}] += 1.0;
    pu[u[i]] += 1.0;
    pv[v[i]] += 1.0;
  }
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    mi += c / n * std::log(c * n / (pu[key.first] * pv[key.second]));
  }
  return mi;
}

template <typename L>
double entropy(const std::vector<L>& u) {
  std::map<L, double> c;
  for (const L& l : u) {
    c[l] += 1.0;
  }
  double h = 0.0;
  for (const auto& [k, cnt] : c) {
    const double p = cnt / static_cast<double>(u.size());
    h -= p * std::log(p);
  }
  return h;
}

// AMI_max with E[MI] averaged over all n! item permutations of v.
template <typename L>
double ami_by_permutation(const std::vector<L>& u, const std::vector<L>& v) {
  std::vector<std::size_t> perm(v.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double sum = 0.0;
  double count = 0.0;
  std::vector<L> shuffled(v.size());
  do {
    for (std::size_t i = 0; i < v.size(); ++i) {
      shuffled[i] = v[perm[i]];
    }
    sum += mutual_information(u, shuffled);
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double emi = sum / count;
  const double mi = mutual_information(u, v);
  const double h = std::max(entropy(u), entropy(v));
  return (mi - emi) / (h - emi);
}

// Exhaustive minimum of the k-means objective over all 2-partitions of rows.
inline std::vector<int> best_two_partition(const Eigen::MatrixXd& pts) {
  const auto n = static_cast<int>(pts.rows());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    if (mask & 1u) {
      continue;  // fix point 0 in cluster 0 to skip mirrored masks
    }
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      labels[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    }
    double cost = 0.0;
    for (int c = 0; c < 2; ++c) {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(pts.cols());
      int cnt = 0;
      for (int i = 0; i < n; ++i) {
        if (labels[static_cast<std::size_t>(i)] == c) {
          mean += pts.row(i);
          ++cnt;
        }
      }
      mean /= cnt;
      for (int i = 0; i < n; ++i) {
        if (labels[static_cast<std::size_t>(i)] == c) {
          cost += (pts.row(i) - mean).squaredNorm();
        }
      }
    }
    if (cost < best) {
      best = cost;
      best_labels = labels;
    }
  }
  return best_labels;
}

inline Eigen::MatrixXd random_spd(int dim, std::mt19937_64& gen, double ridge = 0.5) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      a(i, j) = nd(gen);
    }
  }
  return a * a.transpose() + ridge * Eigen::MatrixXd::Identity(dim, dim);
}

struct MonteCarloKl {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// E_p[ln p(x) - ln q(x)] with x ~ N(mean0, cov0).
inline MonteCarloKl monte_carlo_kl(const Eigen::VectorXd& mean0, const Eigen::MatrixXd& cov0,
                                   const Eigen::VectorXd& mean1, const Eigen::MatrixXd& cov1,
                                   std::size_t samples, std::mt19937_64& gen) {
  const auto dim = mean0.size();
  const Eigen::MatrixXd l0 = cov0.llt().matrixL();
  const Eigen::MatrixXd inv0 = cov0.inverse();
  const Eigen::MatrixXd inv1 = cov1.inverse();
  const double logdet0 = std::log(cov0.determinant());
  const double logdet1 = std::log(cov1.determinant());
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::VectorXd z(dim);
  Eigen::VectorXd d0(dim);
  Eigen::VectorXd d1(dim);
  Eigen::VectorXd tmp(dim);
  const Eigen::VectorXd shift = mean0 - mean1;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      z(i) = nd(gen);
    }
    d0.noalias() = l0 * z;
    d1 = d0 + shift;
    tmp.noalias() = inv0 * d0;
    const double q0 = d0.dot(tmp);
    tmp.noalias() = inv1 * d1;
    const double q1 = d1.dot(tmp);
    const double r = -0.5 * (logdet0 + q0) + 0.5 * (logdet1 + q1);
    sum += r;
    sum_sq += r * r;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = (sum_sq / n - mean * mean) * n / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

// Random graph made of `blocks` groups over n nodes. Intra-block weights lie
// in [intra_lo, 1], inter-block weights in [0, inter_hi]. Returns block ids.
inline Eigen::MatrixXd near_block_graph(int n, int blocks, double intra_lo, double inter_hi,
                                        std::mt19937_64& gen, std::vector<int>& block_of) {
  std::uniform_real_distribution<double> intra(intra_lo, 1.0);
  std::uniform_real_distribution<double> inter(0.0, inter_hi);
  block_of.assign(static_cast<std::size_t>(n), 0);
  // Every block non-empty: first `blocks` nodes seed the blocks, the rest are random.
  std::uniform_int_distribution<int> pick(0, blocks - 1);
  for (int i = 0; i < n; ++i) {
    block_of[static_cast<std::size_t>(i)] = i < blocks ? i : pick(gen);
  }
  std::shuffle(block_of.begin(), block_of.end(), gen);
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool same = block_of[static_cast<std::size_t>(i)] == block_of[static_cast<std::size_t>(j)];
      const double v = same ? intra(gen) : (inter_hi > 0.0 ? inter(gen) : 0.0);
      w(i, j) = v;
      w(j, i) = v;
    }
  }
  return w;
}

}  // namespace oracle
