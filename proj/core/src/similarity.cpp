#include "groupwalk/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "groupwalk/error.hpp"

namespace groupwalk {

namespace {

struct Factor {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_det = 0.0;
};

// Returns false if `cov` is not positive-definite.
bool factorize(const Eigen::MatrixXd& cov, Factor& out) {
  out.llt.compute(cov);
  if (out.llt.info() != Eigen::Success) {
    return false;
  }
  const Eigen::VectorXd diag = out.llt.matrixLLT().diagonal();
  if ((diag.array() <= 0.0).any()) {
    return false;
  }
  out.log_det = 2.0 * diag.array().log().sum();
  return true;
}

double kl_from_factors(const Eigen::VectorXd& mean0, const Eigen::MatrixXd& cov0,
                       const Factor& f0, const Eigen::VectorXd& mean1, const Factor& f1) {
  const auto k = static_cast<double>(mean0.size());
  const double trace_term = f1.llt.solve(cov0).trace();
  const Eigen::VectorXd diff = mean1 - mean0;
  const Eigen::VectorXd half = f1.llt.matrixL().solve(diff);
  const double maha = half.squaredNorm();
  const double kl = 0.5 * (trace_term + maha - k + f1.log_det - f0.log_det);
  // Round-off can leave a tiny negative value for identical inputs.
  return std::max(kl, 0.0);
}

Factor factor_or_throw(const TrackState& t) {
  Factor f;
  if (!factorize(t.cov, f)) {
    throw NumericError("covariance of track " + std::to_string(t.id) + " is not positive-definite");
  }
  return f;
}

}  // namespace

void SimilarityParams::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ContractViolation("similarity parameters a and b must be finite and > 0");
  }
}

double gaussian_kl(const Eigen::VectorXd& mean0, const Eigen::MatrixXd& cov0,
                   const Eigen::VectorXd& mean1, const Eigen::MatrixXd& cov1) {
  const auto k = mean0.size();
  if (mean1.size() != k || cov0.rows() != k || cov0.cols() != k || cov1.rows() != k ||
      cov1.cols() != k) {
    throw ContractViolation("gaussian_kl: dimension mismatch");
  }
  Factor f0;
  Factor f1;
  if (!factorize(cov0, f0)) {
    throw NumericError("gaussian_kl: first covariance is not positive-definite");
  }
  if (!factorize(cov1, f1)) {
    throw NumericError("gaussian_kl: second covariance is not positive-definite");
  }
  return kl_from_factors(mean0, cov0, f0, mean1, f1);
}

double gaussian_kl(const TrackState& p, const TrackState& q) {
  const Factor fp = factor_or_throw(p);
  const Factor fq = factor_or_throw(q);
  return kl_from_factors(p.mean, p.cov, fp, q.mean, fq);
}

double symmetric_kl(const TrackState& p, const TrackState& q) {
  const Factor fp = factor_or_throw(p);
  const Factor fq = factor_or_throw(q);
  const double pq = kl_from_factors(p.mean, p.cov, fp, q.mean, fq);
  const double qp = kl_from_factors(q.mean, q.cov, fq, p.mean, fp);
  return 0.5 * pq + 0.5 * qp;
}

double scale_factor(const TrackState& p, const TrackState& q, const SimilarityParams& params) {
  for (const TrackState* t : {&p, &q}) {
    if (!(t->width() > 0.0) || !(t->height() > 0.0)) {
      throw NumericError("filtered box size of track " + std::to_string(t->id) +
                         " is not positive (filter divergence)");
    }
  }
  const double root_p = std::sqrt(p.width() * p.height());
  const double root_q = std::sqrt(q.width() * q.height());
  return params.a * (root_p + root_q) / 2.0 + params.b;
}

double similarity_from(double divergence, double scale) {
  // Clamped to the smallest normal double so every weight stays in (0, 1].
  return std::max(std::exp(-divergence / scale), std::numeric_limits<double>::min());
}

double similarity(const TrackState& p, const TrackState& q, const SimilarityParams& params) {
  return similarity_from(symmetric_kl(p, q), scale_factor(p, q, params));
}

SimilarityGraph build_graph(std::span<const TrackState> tracks, const SimilarityParams& params) {
  if (tracks.empty()) {
    throw ContractViolation("build_graph needs at least one track");
  }
  std::vector<const TrackState*> order;
  order.reserve(tracks.size());
  for (const TrackState& t : tracks) {
    order.push_back(&t);
  }
  std::sort(order.begin(), order.end(),
            [](const TrackState* l, const TrackState* r) { return l->id < r->id; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i]->id == order[i - 1]->id) {
      throw ContractViolation("build_graph: duplicate track id " + std::to_string(order[i]->id));
    }
  }

  const auto n = static_cast<Eigen::Index>(order.size());
  SimilarityGraph g;
  g.ids.reserve(order.size());
  for (const TrackState* t : order) {
    g.ids.push_back(t->id);
  }
  g.weights = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = similarity(*order[i], *order[j], params);
      g.weights(i, j) = s;
      g.weights(j, i) = s;
    }
  }
  return g;
}

}  // namespace groupwalk
