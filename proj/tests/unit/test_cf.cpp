#include <doctest.h>

#include <cmath>
#include <random>

#include "cf_fixtures.hpp"
#include "cfx/cf/generate.hpp"
#include "cfx/cf/gradient_search.hpp"
#include "cfx/cf/evolutionary_search.hpp"
#include "cfx/cf/objective.hpp"
#include "cfx/cf/sparsity.hpp"
#include "cfx/tabular/stats.hpp"
#include "cfx/tabular/synth.hpp"
#include "helpers.hpp"

using namespace cfx;
using cfx::test::kind_of_throw;

namespace {

// Cofactor expansion; fine for the tiny matrices used here.
double oracle_det(const SquareMatrix& m) {
  if (m.n == 1) return m(0, 0);
  double det = 0;
  for (std::size_t c = 0; c < m.n; ++c) {
    SquareMatrix minor(m.n - 1);
    for (std::size_t i = 1; i < m.n; ++i)
      for (std::size_t j = 0, jj = 0; j < m.n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    det += (c % 2 ? -1.0 : 1.0) * m(0, c) * oracle_det(minor);
  }
  return det;
}

Instance random_hamd(std::mt19937_64& rng) {
  const auto s = hamd17_schema();
  Instance x{std::vector<double>(17)};
  for (std::size_t f = 0; f < 17; ++f)
    x[f] = std::uniform_int_distribution<int>(0, s.feature(f).max_level)(rng);
  return x;
}

const TrainedModel& forest_model() {
  static const TrainedModel model = [] {
    auto cfg = standard_synth_config();
    cfg.rows = 600;
    ModelConfig mc;
    mc.forest.n_trees = 30;
    return train_model(synth_generate(cfg, 21), mc, 22);
  }();
  return model;
}

}  // namespace

TEST_CASE("distance worked examples") {
  FeatureSchema three({FeatureSpec{"a", FeatureKind::Ordinal, 2, 0, 0, true, ""},
                       FeatureSpec{"b", FeatureKind::Ordinal, 2, 0, 0, true, ""},
                       FeatureSpec{"c", FeatureKind::Ordinal, 2, 0, 0, true, ""}});
  const std::vector<double> ones(3, 1.0);
  CHECK(distance(Instance{{0, 1, 2}}, Instance{{0, 1, 2}}, three, ones) == 0.0);
  CHECK(distance(Instance{{0, 1, 2}}, Instance{{0, 1, 2}}, three, ones, DistanceMode::OrdinalAsContinuous) == 0.0);
  CHECK(distance(Instance{{0, 1, 2}}, Instance{{0, 2, 2}}, three, ones) == doctest::Approx(1.0 / 3));

  FeatureSchema cont({FeatureSpec{"x", FeatureKind::Continuous, 1, 0.0, 10.0, true, ""}});
  CHECK(distance(Instance{{1.0}}, Instance{{5.0}}, cont, std::vector<double>{2.0},
                 DistanceMode::OrdinalAsContinuous) == 2.0);
}

TEST_CASE("an explicit weight on an empty part is a mode mismatch") {
  const auto s = hamd17_schema();
  const std::vector<double> mads(17, 1.0);
  CHECK(kind_of_throw([&] { DistanceMetric(s, mads, DistanceMode::OrdinalAsCategorical, PartWeights{1.0, {}}); }) ==
        ErrorKind::ModeMismatch);
  CHECK(kind_of_throw([&] { DistanceMetric(s, mads, DistanceMode::OrdinalAsContinuous, PartWeights{{}, 1.0}); }) ==
        ErrorKind::ModeMismatch);
  DistanceMetric ok(s, mads, DistanceMode::OrdinalAsCategorical, PartWeights{0.0, 2.0});
  auto a = test::zeros(), b = test::zeros();
  b[0] = 1;
  CHECK(ok(a, b) == doctest::Approx(2.0 / 17));
}

TEST_CASE("distance is a semimetric on every pair of a small schema") {
  const auto s = test::small_schema();
  const auto all = test::all_instances(s, {0.0, 3.5});
  const std::vector<double> mads{1.0, 2.0, 1.0, 0.5};
  for (auto mode : {DistanceMode::OrdinalAsCategorical, DistanceMode::OrdinalAsContinuous}) {
    const DistanceMetric m(s, mads, mode);
    for (const auto& a : all)
      for (const auto& b : all) {
        const double d = m(a, b);
        CHECK(d >= 0.0);
        CHECK(d == m(b, a));
        CHECK((d == 0.0) == (a == b));
      }
  }
}

TEST_CASE("hinge loss") {
  CHECK(hinge_loss(0.8, 1) == doctest::Approx(0.2));
  CHECK(hinge_loss(0.8, 0) == doctest::Approx(1.8));
  CHECK(hinge_loss(1.0, 1) == 0.0);
  for (int i = 0; i < 100; ++i) {
    const double p = i / 100.0, q = (i + 1) / 100.0;
    CHECK(hinge_loss(q, 1) <= hinge_loss(p, 1));
    CHECK(hinge_loss(q, 0) >= hinge_loss(p, 0));
  }
}

TEST_CASE("dpp diversity identities") {
  FeatureSchema one({FeatureSpec{"a", FeatureKind::Ordinal, 2, 0, 0, true, ""}});
  const DistanceMetric m(one, {1.0});
  const std::vector<Instance> single{Instance{{1}}};
  CHECK(dpp_diversity(single, m) == 1.0);
  const std::vector<Instance> same{Instance{{1}}, Instance{{1}}};
  CHECK(dpp_diversity(same, m) == 0.0);
  const std::vector<Instance> apart{Instance{{0}}, Instance{{2}}};
  CHECK(m(apart[0], apart[1]) == 1.0);
  CHECK(std::abs(dpp_diversity(apart, m) - 0.75) <= 1e-12);
  CHECK(kind_of_throw([&] { dpp_diversity(std::vector<Instance>{}, m); }) == ErrorKind::BadQuery);
}

TEST_CASE("dpp diversity lies in [0, 1] and matches cofactor expansion") {
  const auto s = hamd17_schema();
  std::mt19937_64 rng(9);
  for (auto mode : {DistanceMode::OrdinalAsCategorical, DistanceMode::OrdinalAsContinuous}) {
    const DistanceMetric m(s, std::vector<double>(17, 1.0), mode);
    for (int trial = 0; trial < 60; ++trial) {
      std::vector<Instance> cfs;
      const int k = 1 + trial % 6;
      for (int i = 0; i < k; ++i) cfs.push_back(random_hamd(rng));
      if (trial % 7 == 3 && k > 1) cfs[k - 1] = cfs[0];
      const double det = dpp_diversity(cfs, m);
      CHECK(det >= 0.0);
      CHECK(det <= 1.0);
      CHECK(det == doctest::Approx(oracle_det(dpp_kernel(cfs, m))).epsilon(1e-9));
      if (trial % 7 == 3 && k > 1) CHECK(det == 0.0);
    }
  }
}

TEST_CASE("dice objective substitution") {
  const std::vector<double> h{0.2, 0.4}, d{1, 2};
  CHECK(std::abs(dice_objective(h, d, 0.5, 1.0, 0.75) - 0.3) <= 1e-12);
  CHECK(dice_objective(h, d, 0.0, 0.0, 0.75) == doctest::Approx(0.3));
}

TEST_CASE("duplicating a counterfactual removes the diversity credit") {
  const auto model = test::linear_level_model(test::only(0, 1.0), -2.5);
  const auto origin = test::zeros();
  auto a = origin, b = origin;
  a[0] = 3;
  b[0] = 4;
  b[5] = 1;
  const DistanceMetric m(model.schema(), model.mads());
  const double lambda1 = 0.5, lambda2 = 1.0;
  const auto objective = [&](const std::vector<Instance>& set) {
    std::vector<double> probs;
    for (const auto& x : set) probs.push_back(model.predict_instance(x));
    return dice_objective(set, probs, origin, 1, lambda1, lambda2, m);
  };
  // recompute both configurations by hand
  const double pa = model.predict_instance(a), pb = model.predict_instance(b);
  const double dab = m(a, b);
  const double distinct = (hinge_loss(pa, 1) + hinge_loss(pb, 1)) / 2 + lambda1 * (m(a, origin) + m(b, origin)) / 2 -
                          lambda2 * (1 - 1 / ((1 + dab) * (1 + dab)));
  const double duplicate = hinge_loss(pa, 1) + lambda1 * m(a, origin);
  CHECK(objective({a, b}) == doctest::Approx(distinct));
  CHECK(objective({a, a}) == doctest::Approx(duplicate));

  // twin with identical hinge and distance: the rise is exactly lambda2 * dpp of the pair
  auto c = a, t = a;
  c[4] = 1;
  t[5] = 1;
  const double pair_dpp = dpp_diversity(std::vector<Instance>{c, t}, m);
  CHECK(pair_dpp > 0.0);
  CHECK(objective({c, c}) - objective({c, t}) == doctest::Approx(lambda2 * pair_dpp));
}

TEST_CASE("relaxed objective gradient matches central differences") {
  const auto schema = hamd17_schema();
  const OneHotEncoder enc(schema);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0, 0.5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(enc.width());
    for (auto& x : w) x = g(rng);
    const LogisticModel lm(w, g(rng));
    std::vector<double> mads(17);
    for (auto& m : mads) m = 0.5 + u(rng);
    const auto mode = trial % 2 ? DistanceMode::OrdinalAsContinuous : DistanceMode::OrdinalAsCategorical;
    const DistanceMetric metric(schema, mads, mode);
    const Instance origin = random_hamd(rng);
    const RelaxedObjective obj(lm, enc, metric, origin, static_cast<Label>(trial % 2), 0.7);
    std::vector<double> e(enc.width());
    for (std::size_t f = 0; f < 17; ++f) {
      const auto& sl = enc.slot(f);
      double sum = 0;
      for (std::size_t k = 0; k < sl.width; ++k) sum += (e[sl.offset + k] = u(rng));
      for (std::size_t k = 0; k < sl.width; ++k) e[sl.offset + k] /= sum;
    }
    const auto grad = obj.gradient(e);
    const double h = 1e-6;
    double num = 0, den = 0;
    for (std::size_t c = 0; c < e.size(); ++c) {
      auto ep = e, em = e;
      ep[c] += h;
      em[c] -= h;
      const double fd = (obj.value(ep) - obj.value(em)) / (2 * h);
      num += (fd - grad[c]) * (fd - grad[c]);
      den += fd * fd;
    }
    CHECK(std::sqrt(num / den) < 1e-5);
  }
}

TEST_CASE("simplex projection") {
  std::vector<double> v{0.5, 0.5, 0.5};
  project_to_simplex(v);
  for (double x : v) CHECK(x == doctest::Approx(1.0 / 3));
  std::vector<double> w{2.0, -1.0, 0.0};
  project_to_simplex(w);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(0.0));
  CHECK(w[2] == doctest::Approx(0.0));
}

TEST_CASE("gradient search reaches the closed-form threshold on a one-feature model") {
  // logit = 1.3 * ham01 - 3.5 : class 1 iff ham01 >= 3.5 / 1.3, i.e. ham01 >= 3
  const auto model = test::linear_level_model(test::only(0, 1.3), -3.5);
  const int threshold = static_cast<int>(std::ceil(3.5 / 1.3));
  CFQuery q;
  q.origin = test::zeros();
  q.origin[5] = 1;
  q.target_class = 1;
  q.seed = 3;
  const auto set = generate_single_cf(q, model);
  REQUIRE(set.cfs.size() == 1);
  const auto& cf = set.cfs[0];
  CHECK(cf.valid);
  CHECK(cf.values[0] == threshold);
  for (std::size_t f = 1; f < 17; ++f) CHECK(cf.values[f] == q.origin[f]);
  REQUIRE(cf.diff.size() == 1);
  CHECK(cf.diff[0].feature == "ham01");
  CHECK(cf.diff[0].delta == threshold);
  CHECK(resolve_optimizer(q, model) == Optimizer::Gradient);
}

TEST_CASE("gradient search failure modes") {
  const auto constant = test::linear_level_model(std::vector<double>(17, 0.0), 0.0);
  CFQuery q;
  q.origin = test::zeros();
  q.target_class = 0;
  q.budget = 3000;
  CHECK(kind_of_throw([&] { generate_single_cf(q, constant); }) == ErrorKind::NoCounterfactualFound);
  q.target_class = 1;
  CHECK(kind_of_throw([&] { generate_single_cf(q, constant); }) == ErrorKind::TargetEqualsPrediction);
  CHECK(kind_of_throw([&] { generate_diverse_cfs(q, constant); }) == ErrorKind::TargetEqualsPrediction);
  q.k = 2;
  q.target_class = 0;
  CHECK(kind_of_throw([&] { generate_single_cf(q, constant); }) == ErrorKind::BadQuery);
}

TEST_CASE("gradient search keeps immutable features") {
  const auto model = test::linear_level_model([] {
    auto s = test::only(0, 1.0);
    s[9] = 1.0;
    return s;
  }(), -3.5);
  CFQuery q;
  q.origin = test::zeros();
  q.immutable = {"ham01"};
  const auto set = generate_single_cf(q, model);
  REQUIRE(set.cfs.size() == 1);
  CHECK(set.cfs[0].values[0] == 0);
  CHECK(set.cfs[0].values[9] == 4);
}

TEST_CASE("sparsity pass reverts gratuitous changes only") {
  const auto model = test::linear_level_model(test::only(0, 1.0), -2.5);
  const auto origin = test::zeros();
  const DistanceMetric m(model.schema(), model.mads());

  auto x = origin;
  x[0] = 4;
  x[15] = 2;
  const auto cf = make_counterfactual(x, model.predict_instance(x), origin, 1, m, model.schema());
  const auto out = sparsity_pass(cf, origin, 1, model, m);
  CHECK(out.values[15] == 0);
  CHECK(out.values[0] == 4);
  CHECK(out.valid);

  // both changes needed: logit = ham01 + ham02 - 3.5
  auto two = test::only(0, 1.0);
  two[1] = 1.0;
  const auto model2 = test::linear_level_model(two, -3.5);
  auto y = origin;
  y[0] = 2;
  y[1] = 2;
  const auto cf2 = make_counterfactual(y, model2.predict_instance(y), origin, 1, m, model2.schema());
  CHECK(sparsity_pass(cf2, origin, 1, model2, m).values == y);
}

TEST_CASE("sparsity pass never increases distance and keeps validity") {
  const auto& model = forest_model();
  const DistanceMetric m(model.schema(), model.mads());
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 60; ++trial) {
    const auto origin = random_hamd(rng);
    const auto x = random_hamd(rng);
    const Label target = 1 - model.predict_class(origin);
    if (model.predict_class(x) != target) continue;
    ++checked;
    const auto cf = make_counterfactual(x, model.predict_instance(x), origin, target, m, model.schema());
    const auto out = sparsity_pass(cf, origin, target, model, m);
    CHECK(out.valid);
    CHECK(model.predict_class(out.values) == target);
    CHECK(out.distance_to_origin <= cf.distance_to_origin);
  }
  CHECK(checked > 10);
}

TEST_CASE("diverse search honours immutability and returns valid sets") {
  const auto& model = forest_model();
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    CFQuery q;
    q.origin = random_hamd(rng);
    q.target_class = 1 - model.predict_class(q.origin);
    q.k = 5;
    q.immutable = {"ham10"};
    q.seed = trial;
    const auto set = generate_diverse_cfs(q, model);
    CHECK(!set.cfs.empty());
    CHECK(set.cfs.size() <= 5);
    CHECK(set.partial == (set.cfs.size() < 5));
    for (const auto& cf : set.cfs) {
      CHECK(cf.values[9] == q.origin[9]);
      CHECK(cf.valid);
      CHECK(model.predict_class(cf.values) == q.target_class);
      for (const auto& d : cf.diff) {
        CHECK(d.feature != "ham10");
        CHECK(d.delta == d.new_value - d.old_value);
      }
    }
  }
}

TEST_CASE("features the model ignores stay at the origin") {
  auto slope = std::vector<double>(17, 0.4);
  slope[15] = 0.0;
  const auto model = test::linear_level_model(slope, -6.0);
  CFQuery q;
  q.origin = test::zeros();
  q.origin[15] = 1;
  q.k = 6;
  q.seed = 12;
  const auto set = generate_diverse_cfs(q, model);
  REQUIRE(!set.cfs.empty());
  for (const auto& cf : set.cfs) CHECK(cf.values[15] == 1);
}

TEST_CASE("counterfactual sets are byte-identical for a fixed seed") {
  const auto& model = forest_model();
  std::mt19937_64 rng(15);
  CFQuery q;
  q.origin = random_hamd(rng);
  q.target_class = 1 - model.predict_class(q.origin);
  q.k = 4;
  q.seed = 99;
  const auto a = nlohmann::json(generate_counterfactuals(q, model)).dump();
  const auto b = nlohmann::json(generate_counterfactuals(q, model)).dump();
  CHECK(a == b);
}

TEST_CASE("query json validation") {
  const auto s = hamd17_schema();
  nlohmann::json j{{"values", std::vector<int>(17, 0)}, {"k", 3}, {"seed", 18446744073709551615ULL}};
  const auto q = query_from_json(j, s);
  CHECK(q.k == 3);
  CHECK(q.seed == 18446744073709551615ULL);
  j["k"] = -1;
  CHECK(kind_of_throw([&] { query_from_json(j, s); }) == ErrorKind::BadQuery);
  j["k"] = 2;
  j["values"][2] = 99;
  try {
    query_from_json(j, s);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.feature() == std::optional<std::string>("ham03"));
  }
  nlohmann::json values = nlohmann::json::object();
  for (const auto& f : s.features()) values[f.name] = 0;
  values["ham01"] = 2;
  nlohmann::json named{{"values", values}};
  const auto q2 = query_from_json(named, s);
  CHECK(q2.origin[0] == 2);
  CHECK(q2.origin[1] == 0);
  named["values"].erase("ham02");
  try {
    query_from_json(named, s);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInstance);
    CHECK(e.feature() == std::optional<std::string>("ham02"));
  }
  named["values"]["ham02"] = 0;
  named["immutable"] = {"ham99"};
  CHECK(kind_of_throw([&] { query_from_json(named, s); }) == ErrorKind::BadQuery);
}
