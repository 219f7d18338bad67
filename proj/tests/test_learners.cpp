#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "ensbfc/environment.hpp"
#include "ensbfc/learners.hpp"
#include "ensbfc/ridge.hpp"

using namespace ensbfc;

namespace {

std::vector<Observation> sample_observations(const Environment& env, std::size_t count,
                                             std::uint64_t seed, int only_arm = -1) {
  Rng rng(seed);
  std::vector<Observation> out;
  for (std::size_t i = 0; i < count; ++i) {
    Context x = env.sample_context(rng);
    const std::size_t a = only_arm >= 0 ? static_cast<std::size_t>(only_arm) : uniform_index(rng, 2);
    const double y = env.sample_reward(a, x, rng);
    out.push_back({std::move(x), a, y});
  }
  return out;
}

// Solves (lambda I + Phi' Phi) theta = Phi' y from the stacked data with a QR
// decomposition, independent of the incremental model.
Eigen::VectorXd batch_ridge(const std::vector<Eigen::VectorXd>& rows, const std::vector<double>& y,
                            double lambda) {
  const auto p = rows.front().size();
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd stacked(n + p, p);
  Eigen::VectorXd target = Eigen::VectorXd::Zero(n + p);
  for (Eigen::Index i = 0; i < n; ++i) {
    stacked.row(i) = rows[static_cast<std::size_t>(i)].transpose();
    target[i] = y[static_cast<std::size_t>(i)];
  }
  stacked.bottomRows(p) = std::sqrt(lambda) * Eigen::MatrixXd::Identity(p, p);
  return stacked.colPivHouseholderQr().solve(target);
}

}  // namespace

TEST_CASE("rate exponents") {
  CHECK(LinUcbLearner(ActionCount(2), 4).rate_exponent() == 0.5);
  CHECK(EpsGreedyLearner(ActionCount(2)).rate_exponent() == doctest::Approx(1.0 / 3.0));
  CHECK(Ucb1Learner(ActionCount(2)).rate_exponent() == 0.5);
}

TEST_CASE("LinUCB with no data breaks the tie toward the first arm") {
  LinUcbLearner learner(ActionCount(2), 4);
  Rng rng(1);
  const auto env = make_env2();
  const auto pi = learner.propose();
  for (int i = 0; i < 50; ++i) CHECK(pi->prob(0, env->sample_context(rng)) == 1.0);
}

TEST_CASE("LinUCB with alpha 0 follows a least-squares fit of the trained arm") {
  const auto env = make_env2();
  LinUcbLearner learner(ActionCount(2), 4, /*alpha=*/0.0, /*lambda=*/1.0);
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> ys;
  for (const auto& o : sample_observations(*env, 10000, 7, 0)) {
    learner.update(o);
    rows.push_back(LinUcbLearner::features(o.context));
    ys.push_back(o.reward);
  }
  const Eigen::VectorXd theta = batch_ridge(rows, ys, 1.0);
  CHECK((learner.model(0).coefficients() - theta).norm() < 1e-8);

  const auto pi = learner.propose();
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const Context x = env->sample_context(rng);
    const double fitted = theta.dot(LinUcbLearner::features(x));
    if (std::abs(fitted) < 1e-9) continue;
    CHECK(pi->prob(fitted > 0.0 ? 0 : 1, x) == 1.0);
  }
}

TEST_CASE("LinUCB with a huge width picks the less explored direction") {
  const auto env = make_env2();
  LinUcbLearner learner(ActionCount(2), 4, 1e9);
  const auto data = sample_observations(*env, 60, 3);
  for (const auto& o : data) learner.update(o);
  const auto pi = learner.propose();
  const Eigen::MatrixXd inv0 = learner.model(0).inverse_design();
  const Eigen::MatrixXd inv1 = learner.model(1).inverse_design();
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    const Context x = env->sample_context(rng);
    const Eigen::VectorXd z = LinUcbLearner::features(x);
    const double w0 = z.dot(inv0 * z), w1 = z.dot(inv1 * z);
    if (std::abs(w0 - w1) < 1e-6 * std::max(w0, w1)) continue;
    CHECK(pi->prob(w0 > w1 ? 0 : 1, x) == 1.0);
  }
}

TEST_CASE("LinUCB update is a rank-one ridge update") {
  LinUcbLearner learner(ActionCount(2), 4, 1.0, 2.0);
  const Context x{0.5, -1.0, 2.0, 0.25};
  learner.update({x, 1, 0.8});
  const Eigen::VectorXd z = LinUcbLearner::features(x);
  const Eigen::MatrixXd expected = 2.0 * Eigen::MatrixXd::Identity(5, 5) + z * z.transpose();
  CHECK((learner.model(1).design() - expected).norm() == 0.0);
  CHECK((learner.model(1).response() - 0.8 * z).norm() == 0.0);
  CHECK((learner.model(0).design() - 2.0 * Eigen::MatrixXd::Identity(5, 5)).norm() == 0.0);
  CHECK(learner.internal_time() == 1);
  CHECK(learner.model(1).design().llt().info() == Eigen::Success);
}

TEST_CASE("epsilon schedule") {
  EpsGreedyLearner learner(ActionCount(2));
  CHECK(learner.exploration_rate(1) == 1.0);
  CHECK(learner.exploration_rate(8) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(learner.exploration_rate(1000) == doctest::Approx(0.1).epsilon(1e-14));
  for (std::uint64_t t : {1ULL, 2ULL, 100ULL, 1000000ULL}) {
    CHECK(learner.exploration_rate(t) > 0.0);
    CHECK(learner.exploration_rate(t) <= 1.0);
  }
  CHECK_THROWS_AS(learner.exploration_rate(0), std::domain_error);

  const Context x{1.0, 1.0, 0.0, 0.0};
  CHECK(learner.propose()->prob(0, x) == 0.5);
  CHECK(learner.propose()->prob(1, x) == 0.5);
}

TEST_CASE("epsilon-greedy at round 1000 puts 0.95 on the greedy arm") {
  const auto env = make_env1();
  EpsGreedyLearner learner(ActionCount(2));
  for (const auto& o : sample_observations(*env, 999, 4)) learner.update(o);
  const auto pi = learner.propose();
  const Context x{-1, -1, 0, 0};  // arm 2 is better here (0.8 vs 0.1)
  CHECK(pi->prob(1, x) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(pi->prob(0, x) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("epsilon-greedy fit equals the batch ridge solution") {
  const auto env = make_env1();
  EpsGreedyLearner learner(ActionCount(2));
  std::vector<Eigen::VectorXd> rows[2];
  std::vector<double> ys[2];
  for (const auto& o : sample_observations(*env, 5000, 5)) {
    learner.update(o);
    rows[o.action].push_back(EpsGreedyLearner::features(o.context));
    ys[o.action].push_back(o.reward);
  }
  for (std::size_t a = 0; a < 2; ++a) {
    const Eigen::VectorXd oracle = batch_ridge(rows[a], ys[a], 1e-6);
    CHECK((learner.model(a).coefficients() - oracle).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(learner.model(a).coefficients().allFinite());
  }
}

TEST_CASE("quadrant features") {
  using V = Eigen::Vector4d;
  CHECK(EpsGreedyLearner::features(Context{-1, -1, 0, 0}) == V(1, 1, 0, 0));
  CHECK(EpsGreedyLearner::features(Context{-1, 0, 0, 0}) == V(1, 0, 1, 0));
  CHECK(EpsGreedyLearner::features(Context{0, -1, 0, 0}) == V(1, 0, 0, 0));
  CHECK(EpsGreedyLearner::features(Context{0, 0, 9, 9}) == V(1, 0, 0, 1));
}

TEST_CASE("UCB1 plays each arm once, then counts only the played arm") {
  Ucb1Learner learner(ActionCount(3));
  const Context x{0.0};
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(learner.propose()->prob(a, x) == 1.0);
    learner.update({x, a, 0.1 * static_cast<double>(a)});
  }
  CHECK(learner.propose()->prob(2, x) == 1.0);  // highest mean, equal bonuses
  learner.update({x, 2, 1.0});
  CHECK(learner.pulls(2) == 2);
  CHECK(learner.pulls(0) == 1);
  CHECK(learner.reward_sum(2) == doctest::Approx(1.2));
  CHECK(learner.pulls(0) + learner.pulls(1) + learner.pulls(2) == learner.internal_time());
}

TEST_CASE("update validation and internal time") {
  LinUcbLearner learner(ActionCount(2), 4);
  CHECK_THROWS_AS(learner.update({Context{0, 0, 0, 0}, 2, 1.0}), std::domain_error);
  CHECK_THROWS_AS(learner.update({Context{0, 0, 0, 0}, 0, INFINITY}), std::domain_error);
  CHECK(learner.internal_time() == 0);
  learner.update({Context{0, 0, 0, 0}, 0, 1.0});
  CHECK(learner.internal_time() == 1);
}

TEST_CASE("identical histories give identical policies") {
  const auto env = make_env2();
  const auto data = sample_observations(*env, 500, 8);
  for (const char* id : {"linucb", "epsgreedy", "ucb1"}) {
    auto a = make_learner({id, {}}, ActionCount(2), 4);
    auto b = make_learner({id, {}}, ActionCount(2), 4);
    for (const auto& o : data) {
      a->update(o);
      b->update(o);
    }
    Rng rng(2);
    const auto pa = a->propose(), pb = b->propose();
    CHECK(pa == a->propose());
    for (int i = 0; i < 100; ++i) {
      const Context x = env->sample_context(rng);
      CHECK(pa->prob(0, x) == pb->prob(0, x));
      CHECK(pa->prob(1, x) == pb->prob(1, x));
    }
  }
}

TEST_CASE("learner registry") {
  auto l = make_learner({"linucb", {{"alpha", 0.3}}}, ActionCount(2), 4);
  CHECK(l->id() == "linucb");
  CHECK(dynamic_cast<LinUcbLearner&>(*l).alpha() == 0.3);
  CHECK_THROWS_AS(make_learner({"linucb", {{"gamma", 1}}}, ActionCount(2), 4), ConfigError);
  CHECK_THROWS_AS(make_learner({"thompson", {}}, ActionCount(2), 4), ConfigError);
  CHECK_THROWS_AS(make_learner({"epsgreedy", {{"exponent", 0.9}}}, ActionCount(2), 4),
                  ConfigError);
  const auto list = parse_learner_list("linucb, epsgreedy,ucb1");
  REQUIRE(list.size() == 3);
  CHECK(list[1].id == "epsgreedy");
  CHECK_THROWS_AS(parse_learner_list("linucb,,ucb1"), ConfigError);
}

TEST_CASE("ridge model rejects non-positive regularization") {
  CHECK_THROWS(RidgeModel(3, 0.0).coefficients());
  CHECK(RidgeModel(3, 1.0).coefficients().isZero());
}
