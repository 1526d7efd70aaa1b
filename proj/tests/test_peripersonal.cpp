#include <doctest.h>

#include <numeric>
#include <random>

#include "hrc/peripersonal.hpp"
#include "test_util.hpp"

using namespace hrc;

namespace {

BodyPointSet set_of(std::vector<Vector3d> pts, BodySource s = BodySource::kHuman) { return {std::move(pts), s}; }

// Straight transcription of the three metrics, for comparison.
struct Reference {
  double min_d, mean_min, weighted;
};

Reference reference(const BodyPointSet& h, const BodyPointSet& r) {
  std::vector<double> d;
  for (const auto& p : h.points) {
    double best = 1e300;
    for (const auto& s : r.points) best = std::min(best, (p - s).norm());
    d.push_back(best);
  }
  const double sum = std::accumulate(d.begin(), d.end(), 0.0);
  Reference out{*std::min_element(d.begin(), d.end()), sum / d.size(), 0.0};
  for (double x : d) out.weighted += (1.0 - x / sum) * x;
  out.weighted /= d.size();
  return out;
}

BodyPointSet random_set(std::mt19937_64& rng, int n, const Vector3d& center) {
  std::normal_distribution<double> g(0.0, 0.3);
  BodyPointSet s;
  for (int i = 0; i < n; ++i) s.points.push_back(center + Vector3d(g(rng), g(rng), g(rng)));
  return s;
}

}  // namespace

TEST_CASE("min and mean-min distance examples") {
  const auto a = set_of({{0, 0, 0}, {1, 0, 0}});
  CHECK(min_distance_comfort(a, a) == 0.0);
  CHECK(mean_min_comfort(a, a) == 0.0);
  CHECK(min_distance_comfort(set_of({{0, 0, 0}}), set_of({{3, 4, 0}})) == doctest::Approx(5.0));
  CHECK(min_distance_comfort(a, set_of({{3, 0, 0}})) == doctest::Approx(2.0));
  CHECK(mean_min_comfort(a, set_of({{3, 0, 0}})) == doctest::Approx(2.5));
  CHECK(mean_min_comfort(set_of({{0, 0, 0}}), set_of({{3, 4, 0}})) == doctest::Approx(5.0));
}

TEST_CASE("point weights and weighted comfort examples") {
  const auto w = point_weights(std::vector<double>{3.0, 2.0});
  CHECK(w[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(w[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(weighted_comfort(std::vector<double>{3.0, 2.0}) == doctest::Approx(1.2).epsilon(1e-15));

  const std::vector<double> equal(5, 0.7);
  for (double x : point_weights(equal)) CHECK(x == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(weighted_comfort(equal) == doctest::Approx(0.7 * 4.0 / 5.0).epsilon(1e-15));

  const auto lone = point_weights(std::vector<double>{0.9, 0.0, 0.0});
  CHECK(lone[0] == 0.0);
  CHECK(lone[1] == 1.0);
  CHECK(weighted_comfort(std::vector<double>{0.4}) == 0.0);
  CHECK_THROWS_AS(point_weights(std::vector<double>{0.0, 0.0}), std::domain_error);

  // the (3, 2) example built from actual points
  const auto h = set_of({{0, 0, 0}, {1, 0, 0}});
  const auto r = set_of({{3, 0, 0}}, BodySource::kRobot);
  CHECK(weighted_comfort(h, r) == doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("metric properties on random point sets") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> kd(0.1, 4.0);
  for (int c = 0; c < 1000; ++c) {
    const auto h = random_set(rng, 2 + c % 40, {0, 0, 0});
    const auto r = random_set(rng, 1 + c % 30, {0.8, 0.2, 0.0});
    const Reference ref = reference(h, r);
    const double mn = min_distance_comfort(h, r);
    const double mm = mean_min_comfort(h, r);
    const double wc = weighted_comfort(h, r);
    CHECK(std::abs(mn - ref.min_d) < 1e-9);
    CHECK(std::abs(mm - ref.mean_min) < 1e-9);
    CHECK(std::abs(wc - ref.weighted) < 1e-9);
    CHECK(wc <= mm + 1e-12);
    CHECK(mn <= mm + 1e-12);
    const auto w = point_weights(h, r);
    CHECK(std::abs(std::accumulate(w.begin(), w.end(), 0.0) - (h.points.size() - 1.0)) < 1e-9);

    const Pose t = test::random_pose(rng);
    BodyPointSet ht = h, rt = r;
    for (auto& p : ht.points) p = t.apply(p);
    for (auto& p : rt.points) p = t.apply(p);
    CHECK(std::abs(weighted_comfort(ht, rt) - wc) < 1e-9);
    CHECK(std::abs(mean_min_comfort(ht, rt) - mm) < 1e-9);
    CHECK(std::abs(min_distance_comfort(ht, rt) - mn) < 1e-9);

    const double k = kd(rng);
    BodyPointSet hk = h, rk = r;
    for (auto& p : hk.points) p *= k;
    for (auto& p : rk.points) p *= k;
    CHECK(std::abs(weighted_comfort(hk, rk) - k * wc) < 1e-9);
    CHECK(std::abs(mean_min_comfort(hk, rk) - k * mm) < 1e-9);
    CHECK(std::abs(min_distance_comfort(hk, rk) - k * mn) < 1e-9);
  }
}

TEST_CASE("body points follow the chain") {
  const ChainModel m = test::planar_chain({1.0, 1.0});
  const PointTemplate tmpl = {{"l1", {1.0, 0, 0}}, {"base", {0, 0, 0.5}}, {"l0", {0.5, 0, 0}}};
  const auto zero = body_points(m, Eigen::Vector2d(0, 0), Pose::identity(), tmpl);
  CHECK((zero.points[0] - Vector3d(2, 0, 0)).norm() < 1e-12);
  CHECK((zero.points[1] - Vector3d(0, 0, 0.5)).norm() < 1e-12);
  CHECK((zero.points[2] - Vector3d(0.5, 0, 0)).norm() < 1e-12);

  const auto bent = body_points(m, Eigen::Vector2d(kPi / 2, 0), Pose::identity(), {{"l1", {1.0, 0, 0}}});
  CHECK((bent.points[0] - Vector3d(0, 2, 0)).norm() < 1e-12);

  const Vector3d t(0.3, -2.0, 1.0);
  const auto moved = body_points(m, Eigen::Vector2d(0.4, -0.2), Pose::from_translation(t), tmpl);
  const auto still = body_points(m, Eigen::Vector2d(0.4, -0.2), Pose::identity(), tmpl);
  for (std::size_t i = 0; i < tmpl.size(); ++i) CHECK((moved.points[i] - still.points[i] - t).norm() < 1e-12);

  CHECK_THROWS_AS(body_points(m, Eigen::Vector2d(0, 0), Pose::identity(), {{"nope", Vector3d::Zero()}}),
                  std::invalid_argument);
}
