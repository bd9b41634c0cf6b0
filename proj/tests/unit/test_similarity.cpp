#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "groupwalk/error.hpp"
#include "groupwalk/similarity.hpp"
#include "oracles.hpp"

using namespace groupwalk;

namespace {

TrackState make_state(TrackId id, StateVector mean, StateMatrix cov) {
  TrackState s;
  s.id = id;
  s.mean = mean;
  s.cov = cov;
  return s;
}

TrackState box(TrackId id, double x, double y, double w, double h, double vx = 0.0,
               double vy = 0.0, double var = 4.0) {
  StateVector m;
  m << x, y, w, h, vx, vy, 0, 0;
  return make_state(id, m, var * StateMatrix::Identity());
}

TrackState random_track(TrackId id, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(5.0, 60.0);
  StateVector m;
  for (int i = 0; i < 8; ++i) {
    m(i) = u(gen);
  }
  return make_state(id, m, oracle::random_spd(8, gen));
}

}  // namespace

TEST(GaussianKl, IdenticalGaussiansGiveZero) {
  std::mt19937_64 gen(1);
  const TrackState p = random_track(1, gen);
  EXPECT_LT(gaussian_kl(p, p), 1e-10);
  EXPECT_LT(symmetric_kl(p, p), 1e-10);
}

TEST(GaussianKl, EqualIdentityCovarianceMeanShift) {
  // Trace and log-det terms cancel: KL = |delta|^2 / 2 = 25 / 2.
  StateVector m0 = StateVector::Zero();
  StateVector m1 = StateVector::Zero();
  m1(0) = 3.0;
  m1(1) = 4.0;
  const TrackState p = make_state(1, m0, StateMatrix::Identity());
  const TrackState q = make_state(2, m1, StateMatrix::Identity());
  EXPECT_NEAR(gaussian_kl(p, q), 12.5, 1e-12);
  EXPECT_NEAR(gaussian_kl(q, p), 12.5, 1e-12);
  EXPECT_NEAR(symmetric_kl(p, q), 12.5, 1e-12);
}

TEST(GaussianKl, MatchesMonteCarloOn2D) {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd c0 = oracle::random_spd(2, gen);
    const Eigen::MatrixXd c1 = oracle::random_spd(2, gen);
    const Eigen::Vector2d m0(nd(gen), nd(gen));
    const Eigen::Vector2d m1(nd(gen), nd(gen));
    const double kl = gaussian_kl(m0, c0, m1, c1);
    const auto mc = oracle::monte_carlo_kl(m0, c0, m1, c1, 200000, gen);
    EXPECT_NEAR(kl, mc.estimate, 4.0 * mc.standard_error) << "trial " << trial;
  }
}

TEST(GaussianKl, MonteCarloResidualsAreStandardNormal) {
  // Unbiased closed form: (kl - estimate) / se should be ~N(0, 1) across pairs.
  std::mt19937_64 gen(99);
  std::normal_distribution<double> nd(0.0, 1.0);
  constexpr int kPairs = 400;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int trial = 0; trial < kPairs; ++trial) {
    const Eigen::MatrixXd c0 = oracle::random_spd(2, gen);
    const Eigen::MatrixXd c1 = oracle::random_spd(2, gen);
    const Eigen::Vector2d m0(nd(gen), nd(gen));
    const Eigen::Vector2d m1(nd(gen), nd(gen));
    const auto mc = oracle::monte_carlo_kl(m0, c0, m1, c1, 20000, gen);
    const double z = (gaussian_kl(m0, c0, m1, c1) - mc.estimate) / mc.standard_error;
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / kPairs;
  EXPECT_LT(std::abs(mean), 0.2);
  EXPECT_NEAR(sum_sq / kPairs - mean * mean, 1.0, 0.25);
}

TEST(GaussianKl, NonPositiveDefiniteNamesTrack) {
  TrackState p = box(1, 0, 0, 10, 10);
  TrackState q = box(77, 1, 1, 10, 10);
  q.cov(3, 3) = -1.0;
  try {
    symmetric_kl(p, q);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("77"), std::string::npos);
  }
}

TEST(GaussianKl, GenericFormChecksDimensions) {
  EXPECT_THROW(gaussian_kl(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2),
                           Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3)),
               ContractViolation);
}

TEST(SymmetricKl, IsSymmetricAndNonNegative) {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 50; ++i) {
    const TrackState p = random_track(1, gen);
    const TrackState q = random_track(2, gen);
    const double pq = symmetric_kl(p, q);
    EXPECT_EQ(pq, symmetric_kl(q, p));
    EXPECT_GT(pq, 0.0);
    EXPECT_NEAR(pq, 0.5 * gaussian_kl(p, q) + 0.5 * gaussian_kl(q, p), 1e-9 * pq);
  }
}

TEST(ScaleFactor, DirectEvaluation) {
  const SimilarityParams params{8.0, 10.0};
  EXPECT_DOUBLE_EQ(scale_factor(box(1, 0, 0, 10, 10), box(2, 5, 5, 10, 10), params), 90.0);
}

TEST(ScaleFactor, SmallSlopeApproachesOffset) {
  const SimilarityParams params{1e-12, 10.0};
  EXPECT_NEAR(scale_factor(box(1, 0, 0, 40, 80), box(2, 0, 0, 30, 60), params), 10.0, 1e-9);
}

TEST(ScaleFactor, DoublingSidesDoublesSlopeTerm) {
  const SimilarityParams params{3.0, 7.0};
  const double k1 = scale_factor(box(1, 0, 0, 12, 30), box(2, 0, 0, 20, 45), params);
  const double k2 = scale_factor(box(1, 0, 0, 24, 60), box(2, 0, 0, 40, 90), params);
  EXPECT_NEAR(k2 - params.b, 2.0 * (k1 - params.b), 1e-12);
}

TEST(ScaleFactor, MonotoneInAreaAndBoundedBelowByOffset) {
  const SimilarityParams params{2.0, 5.0};
  double last = 0.0;
  for (double w = 1.0; w < 100.0; w *= 1.5) {
    const double k = scale_factor(box(1, 0, 0, w, 2 * w), box(2, 0, 0, 10, 10), params);
    EXPECT_GE(k, params.b);
    EXPECT_GT(k, last);
    last = k;
  }
}

TEST(ScaleFactor, DivergedSizeIsNumericError) {
  const SimilarityParams params;
  EXPECT_THROW(scale_factor(box(1, 0, 0, -3, 10), box(2, 0, 0, 10, 10), params), NumericError);
}

TEST(Similarity, DirectEvaluation) {
  EXPECT_EQ(similarity_from(0.0, 90.0), 1.0);
  EXPECT_NEAR(similarity_from(9.0, 90.0), 0.904837418, 1e-6);
  EXPECT_GT(similarity_from(1e6, 1.0), 0.0);
  EXPECT_LT(similarity_from(1e6, 1.0), 1e-300);
}

TEST(Similarity, IdenticalMotionIsOne) {
  const TrackState p = box(1, 3, 4, 10, 20, 1, 1);
  EXPECT_EQ(similarity(p, p, SimilarityParams{}), 1.0);
}

TEST(Similarity, DecreasesWithMeanDifference) {
  const SimilarityParams params;
  const TrackState p = box(1, 0, 0, 20, 40);
  double last = 1.0;
  for (double dx = 0.5; dx < 50.0; dx *= 1.7) {
    const double s = similarity(p, box(2, dx, 0, 20, 40), params);
    EXPECT_LT(s, last);
    last = s;
  }
  last = 1.0;
  for (double dv = 0.25; dv < 10.0; dv *= 1.7) {
    const double s = similarity(p, box(2, 0, 0, 20, 40, dv), params);
    EXPECT_LT(s, last);
    last = s;
  }
}

TEST(Similarity, IncreasesWithScaleForPositiveDivergence) {
  const TrackState p = box(1, 0, 0, 20, 40);
  const TrackState q = box(2, 6, 0, 20, 40);
  EXPECT_LT(similarity(p, q, {2.0, 10.0}), similarity(p, q, {4.0, 10.0}));
  EXPECT_LT(similarity(p, q, {2.0, 10.0}), similarity(p, q, {2.0, 20.0}));
}

TEST(Similarity, DependsOnDivergenceOverSizeRatio) {
  // b ~ 0 and Sigma = var * I: -ln s = (|delta|^2 / (2 var)) / (a sqrt(wh)).
  // Scaling |delta| by c, var by c and sqrt(wh) by c keeps that ratio fixed.
  const SimilarityParams params{5.0, 1e-12};
  const TrackState p = box(1, 0, 0, 10, 10, 0, 0, 9.0);
  const TrackState q = box(2, 4, 0, 10, 10, 0, 0, 9.0);
  const double base = similarity(p, q, params);
  EXPECT_NEAR(-std::log(base), (16.0 / 18.0) / (5.0 * 10.0), 1e-9);
  for (double c : {0.5, 2.0, 3.0}) {
    const TrackState ps = box(1, 0, 0, 10 * c, 10 * c, 0, 0, 9.0 * c);
    const TrackState qs = box(2, 4 * c, 0, 10 * c, 10 * c, 0, 0, 9.0 * c);
    EXPECT_NEAR(similarity(ps, qs, params), base, 1e-12) << "c = " << c;
  }
}

TEST(Similarity, JointScalingOfOffsetSpreadAndSizeRescalesExponent) {
  // Scaling |delta|, sigma and sqrt(wh) all by c leaves the divergence fixed
  // and multiplies k by c, so s(c) = s(1)^(1/c).
  const SimilarityParams params{5.0, 1e-12};
  const double base = similarity(box(1, 0, 0, 10, 10, 0, 0, 9.0), box(2, 4, 0, 10, 10, 0, 0, 9.0),
                                 params);
  for (double c : {0.5, 2.0, 3.0}) {
    const double scaled = similarity(box(1, 0, 0, 10 * c, 10 * c, 0, 0, 9.0 * c * c),
                                     box(2, 4 * c, 0, 10 * c, 10 * c, 0, 0, 9.0 * c * c), params);
    EXPECT_NEAR(std::log(scaled), std::log(base) / c, 1e-12);
  }
}

TEST(BuildGraph, SingleTrack) {
  const std::vector<TrackState> tracks{box(4, 0, 0, 10, 10)};
  const SimilarityGraph g = build_graph(tracks, SimilarityParams{});
  ASSERT_EQ(g.size(), 1);
  EXPECT_EQ(g.weights(0, 0), 1.0);
  EXPECT_EQ(g.ids, std::vector<TrackId>{4});
}

TEST(BuildGraph, IdenticalStatesAreFullyConnected) {
  const std::vector<TrackState> tracks{box(1, 5, 5, 10, 10), box(2, 5, 5, 10, 10)};
  const SimilarityGraph g = build_graph(tracks, SimilarityParams{});
  EXPECT_EQ(g.weights, Eigen::MatrixXd::Ones(2, 2));
}

TEST(BuildGraph, FiveTracksSymmetricUnitDiagonalSortedIds) {
  std::mt19937_64 gen(4);
  std::vector<TrackState> tracks;
  for (TrackId id : {9, 3, 7, 1, 5}) {
    TrackState t = random_track(id, gen);
    tracks.push_back(t);
  }
  const SimilarityParams params{8.0, 10.0};
  const SimilarityGraph g = build_graph(tracks, params);
  EXPECT_EQ(g.ids, (std::vector<TrackId>{1, 3, 5, 7, 9}));
  for (Eigen::Index i = 0; i < 5; ++i) {
    EXPECT_EQ(g.weights(i, i), 1.0);
    for (Eigen::Index j = 0; j < 5; ++j) {
      EXPECT_EQ(g.weights(i, j), g.weights(j, i));
      EXPECT_GT(g.weights(i, j), 0.0);
      EXPECT_LE(g.weights(i, j), 1.0);
    }
  }
  // Weight (1, 3) is the pair with ids 1 and 3.
  auto find = [&](TrackId id) -> const TrackState& {
    for (const auto& t : tracks) {
      if (t.id == id) return t;
    }
    throw std::logic_error("missing");
  };
  EXPECT_EQ(g.weights(0, 1), similarity(find(1), find(3), params));
}

TEST(BuildGraph, RejectsEmptyAndDuplicates) {
  EXPECT_THROW(build_graph(std::vector<TrackState>{}, SimilarityParams{}), ContractViolation);
  const std::vector<TrackState> dup{box(1, 0, 0, 10, 10), box(1, 5, 0, 10, 10)};
  EXPECT_THROW(build_graph(dup, SimilarityParams{}), ContractViolation);
}

TEST(SimilarityParams, RejectNonPositive) {
  EXPECT_THROW((SimilarityParams{0.0, 1.0}.validate()), ContractViolation);
  EXPECT_THROW((SimilarityParams{1.0, -1.0}.validate()), ContractViolation);
  EXPECT_NO_THROW((SimilarityParams{8.0, 10.0}.validate()));
}
