#include "groupwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "groupwalk/error.hpp"
#include "groupwalk/kmeans.hpp"

namespace groupwalk {

namespace {

using Index = Eigen::Index;


double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (i != j) {
        sum += a(i, j) * a(i, j);
      }
    }
  }
  return std::sqrt(sum);
}

// A <- P^T A P and V <- V P for the rotation that zeroes a(p, q).
void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, Index p, Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) {
    return;
  }
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::isinf(theta * theta)) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Index k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double peak = v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    // Components within round-off of the peak count as ties.
    if (std::abs(v(i)) >= peak * (1.0 - 1e-9)) {
      if (v(i) < 0.0) {
        v = -v;
      }
      return;
    }
  }
}

}  // namespace

Eigen::MatrixXd laplacian(const SimilarityGraph& g) {
  const Index n = g.size();
  Eigen::MatrixXd l = -g.weights;
  for (Index i = 0; i < n; ++i) {
    // Degree minus the self-loop, i.e. the off-diagonal row sum.
    double degree = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) {
        degree += g.weights(i, j);
      }
    }
    l(i, i) = degree;
  }
  return l;
}

Spectrum eig_sym(const Eigen::MatrixXd& input, const JacobiOptions& opts) {
  if (input.rows() != input.cols()) {
    throw ContractViolation("eig_sym needs a square matrix");
  }
  if (!input.allFinite()) {
    throw NumericError("eig_sym: matrix has non-finite entries");
  }
  const double fro = input.norm();
  if ((input - input.transpose()).norm() > 1e-9 * std::max(fro, 1.0)) {
    throw ContractViolation("eig_sym needs a symmetric matrix");
  }

  const Index n = input.rows();
  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = opts.tolerance * fro;

  int sweeps = 0;
  double off = off_diagonal_norm(a);
  while (off > target) {
    if (sweeps == opts.max_sweeps) {
      std::ostringstream msg;
      msg << "eig_sym: no convergence after " << sweeps << " sweeps (n = " << n
          << ", off-diagonal norm " << off << ", Frobenius norm " << fro << ", diagonal range ["
          << a.diagonal().minCoeff() << ", " << a.diagonal().maxCoeff() << "])";
      throw NumericError(msg.str());
    }
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        rotate(a, v, p, q);
      }
    }
    ++sweeps;
    off = off_diagonal_norm(a);
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index l, Index r) { return a(l, l) < a(r, r); });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src);
    out.eigenvectors.col(k) = v.col(src);
    fix_sign(out.eigenvectors.col(k));
  }
  return out;
}

int eigengap_select(const Eigen::VectorXd& eigenvalues, double coefficient,
                    double flat_spectrum) {
  const Index n = eigenvalues.size();
  if (n < 1) {
    throw ContractViolation("eigengap_select needs at least one eigenvalue");
  }
  if (n == 1) {
    return 1;
  }
  const Eigen::VectorXd gaps = eigenvalues.tail(n - 1) - eigenvalues.head(n - 1);
  const double total = gaps.sum();
  if (total <= flat_spectrum) {
    return static_cast<int>(n);
  }
  const double threshold = coefficient / static_cast<double>(n) * total;
  for (Index i = 0; i < n - 1; ++i) {
    if (gaps(i) >= threshold) {
      return static_cast<int>(i + 1);
    }
  }
  return static_cast<int>(n);
}

std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::unordered_map<int, int> remap;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    out.push_back(remap.try_emplace(l, static_cast<int>(remap.size()) + 1).first->second);
  }
  return out;
}

FrameClustering spectral_cluster(const SimilarityGraph& g, const SpectralOptions& opts) {
  if (g.size() < 1 || static_cast<std::size_t>(g.size()) != g.ids.size()) {
    throw ContractViolation("spectral_cluster needs a non-empty graph with one id per node");
  }
  const Spectrum spectrum = eig_sym(laplacian(g), opts.jacobi);
  const int m = eigengap_select(spectrum.eigenvalues, opts.eigengap_coefficient, opts.flat_spectrum);

  const Eigen::MatrixXd embedding = spectrum.eigenvectors.leftCols(m);
  const KMeansResult km =
      kmeans(embedding, m, opts.seed, {opts.kmeans_restarts, opts.kmeans_max_iterations});

  FrameClustering out;
  out.ids = g.ids;
  out.labels = canonical_labels(km.labels);
  out.m = m;
  out.eigenvalues = spectrum.eigenvalues;
  return out;
}

}  // namespace groupwalk
