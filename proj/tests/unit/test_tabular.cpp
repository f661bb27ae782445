#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "cfx/tabular/encoding.hpp"
#include "cfx/tabular/resampling.hpp"
#include "cfx/tabular/stats.hpp"
#include "cfx/tabular/synth.hpp"
#include "helpers.hpp"

using namespace cfx;
using cfx::test::kind_of_throw;

namespace {

// Median by full sort, kept separate from the library's nth_element path.
double oracle_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double oracle_mad(const std::vector<double>& v) {
  const double m = oracle_median(v);
  std::vector<double> dev;
  for (double x : v) dev.push_back(std::abs(x - m));
  return oracle_median(dev);
}

}  // namespace

TEST_CASE("hamd17 schema layout") {
  const auto s = hamd17_schema();
  REQUIRE(s.size() == 17);
  const std::set<int> five = {1, 2, 3, 7, 8, 9, 10, 11, 15};
  for (int i = 1; i <= 17; ++i) {
    const auto& f = s.feature(i - 1);
    CHECK(f.kind == FeatureKind::Ordinal);
    CHECK(f.max_level == (five.count(i) ? 4 : 2));
    CHECK(f.default_mutable);
  }
  CHECK(s.feature(0).name == "ham01");
  CHECK(s.feature(16).name == "ham17");
  CHECK(s.label_name() == "label");
  CHECK(OneHotEncoder(s).width() == 9 * 5 + 8 * 3);
}

TEST_CASE("schema validation names the offending feature") {
  const auto s = hamd17_schema();
  Instance x{std::vector<double>(17, 0.0)};
  x[2] = 99;
  try {
    s.validate(x);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfRangeValue);
    CHECK(e.feature() == std::optional<std::string>("ham03"));
  }
  x[2] = 1.5;
  CHECK(kind_of_throw([&] { s.validate(x); }) == ErrorKind::NonIntegerOrdinal);
  CHECK(kind_of_throw([&] { s.validate(Instance{{1.0, 2.0}}); }) == ErrorKind::InvalidInstance);
  CHECK(kind_of_throw([] { FeatureSchema(std::vector<FeatureSpec>{}); }) == ErrorKind::InvalidSchema);
}

TEST_CASE("schema json round trip keeps the fingerprint") {
  const auto s = test::small_schema();
  const nlohmann::json j = s;
  const auto back = j.get<FeatureSchema>();
  CHECK(back == s);
  CHECK(back.fingerprint() == s.fingerprint());
  CHECK(s.fingerprint().size() == 16);
  CHECK(s.fingerprint() != hamd17_schema().fingerprint());
}

TEST_CASE("one-hot encode/decode is a bijection on every instance of a small schema") {
  const auto s = test::small_schema();
  const OneHotEncoder enc(s);
  CHECK(enc.width() == 3 + 5 + 2 + 1);
  const auto all = test::all_instances(s, {0.0, 2.5, 10.0});
  CHECK(all.size() == 3 * 5 * 2 * 3);
  std::set<std::vector<double>> images;
  for (const auto& x : all) {
    const auto e = one_hot_encode(x, s);
    REQUIRE(e.size() == enc.width());
    for (std::size_t f = 0; f < s.size(); ++f) {
      const auto& slot = enc.slot(f);
      if (s.feature(f).kind == FeatureKind::Continuous) {
        CHECK(e.bits[slot.offset] == x[f]);
        continue;
      }
      double sum = 0;
      for (std::size_t k = 0; k < slot.width; ++k) {
        CHECK((e.bits[slot.offset + k] == 0.0 || e.bits[slot.offset + k] == 1.0));
        sum += e.bits[slot.offset + k];
      }
      CHECK(sum == 1.0);
      CHECK(e.bits[slot.offset + static_cast<std::size_t>(x[f])] == 1.0);
    }
    CHECK(decode_one_hot(e, s) == x);
    images.insert(e.bits);
  }
  CHECK(images.size() == all.size());
}

TEST_CASE("decode rejects anything that is not one-hot") {
  const auto s = test::small_schema(false);
  const OneHotEncoder enc(s);
  for (const auto& x : test::all_instances(s)) {
    const auto e = enc.encode(x);
    for (std::size_t c = 0; c < e.size(); ++c) {
      auto bad = e;
      bad.bits[c] = 1.0 - bad.bits[c];
      try {
        (void)enc.decode(bad);
        FAIL("flipping a bit must break the encoding");
      } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::NotOneHot);
        CHECK(err.feature() == s.feature(enc.feature_of(c)).name);
      }
    }
  }
  EncodedInstance half{std::vector<double>(enc.width(), 0.0)};
  half.bits[0] = 0.5;
  half.bits[1] = 0.5;
  CHECK(kind_of_throw([&] { enc.decode(half); }) == ErrorKind::NotOneHot);
  CHECK(kind_of_throw([&] { enc.decode(EncodedInstance{{1.0}}); }) == ErrorKind::WidthMismatch);
}

TEST_CASE("column bookkeeping") {
  const OneHotEncoder enc(test::small_schema());
  CHECK(enc.feature_of(0) == 0);
  CHECK(enc.level_of(2) == 2);
  CHECK(enc.feature_of(3) == 1);
  CHECK(enc.level_of(3) == 0);
  CHECK(enc.feature_of(10) == 3);
  CHECK(enc.level_of(10) == -1);
}

TEST_CASE("MAD worked examples") {
  CHECK(raw_mad(std::vector<double>{1, 2, 3, 4, 100}) == 1.0);
  CHECK(raw_mad(std::vector<double>{0, 0, 4, 4}) == 2.0);
  CHECK(raw_mad(std::vector<double>{2, 2, 2}) == 0.0);

  FeatureSchema s({FeatureSpec{"x", FeatureKind::Ordinal, 4, 0, 0, true, ""}});
  Dataset constant{s, {Instance{{2}}, Instance{{2}}, Instance{{2}}}, {0, 1, 0}};
  CHECK(mad(constant, "x") == 1.0);
  Dataset empty{s, {}, {}};
  CHECK(kind_of_throw([&] { mad(empty, "x"); }) == ErrorKind::EmptyDataset);
}

TEST_CASE("MAD agrees with a sort-based oracle and is shift/scale equivariant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + trial % 23);
    for (auto& x : v) x = std::round(u(rng));
    CHECK(raw_mad(v) == doctest::Approx(oracle_mad(v)));
    CHECK(median(v) == doctest::Approx(oracle_median(v)));
    const double a = 2.5, b = 17.0;
    std::vector<double> w;
    for (double x : v) w.push_back(a * x + b);
    CHECK(raw_mad(w) == doctest::Approx(a * raw_mad(v)));
    for (auto& x : w) x = -x;
    CHECK(raw_mad(w) == doctest::Approx(a * raw_mad(v)));
  }
}

TEST_CASE("SMOTE balances classes with valid rows and keeps originals first") {
  const auto s = test::small_schema(false);
  const auto all = test::all_instances(s);
  Dataset d{s, {}, {}};
  for (std::size_t i = 0; i < all.size(); ++i) {
    d.rows.push_back(all[i]);
    d.labels.push_back(i % 5 == 0 ? 1 : 0);
  }
  for (int k : {1, 3, 5, 50}) {
    const auto out = smote_oversample(d, k, 11);
    CHECK(out.count_label(0) == out.count_label(1));
    CHECK(out.size() == 2 * d.count_label(0));
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(out.rows[i] == d.rows[i]);
      CHECK(out.labels[i] == d.labels[i]);
    }
    for (std::size_t i = d.size(); i < out.size(); ++i) {
      CHECK(s.is_valid(out.rows[i]));
      CHECK(out.labels[i] == 1);
    }
    CHECK(smote_oversample(d, k, 11).rows == out.rows);
  }
}

TEST_CASE("SMOTE synthetic rows lie on the segment between neighbours") {
  FeatureSchema s({FeatureSpec{"x", FeatureKind::Ordinal, 2, 0, 0, true, ""},
                   FeatureSpec{"y", FeatureKind::Ordinal, 2, 0, 0, true, ""}});
  Dataset d{s, {Instance{{0, 0}}, Instance{{2, 2}}}, {1, 1}};
  for (int i = 0; i < 8; ++i) {
    d.rows.push_back(Instance{{1, 0}});
    d.labels.push_back(0);
  }
  const auto out = smote_oversample(d, 1, 3);
  REQUIRE(out.size() == 16);
  for (std::size_t i = 10; i < out.size(); ++i) {
    CHECK(out.rows[i][0] == out.rows[i][1]);
    CHECK(s.is_valid(out.rows[i]));
  }
}

TEST_CASE("SMOTE edge cases") {
  FeatureSchema s({FeatureSpec{"x", FeatureKind::Ordinal, 2, 0, 0, true, ""}});
  Dataset balanced{s, {Instance{{0}}, Instance{{1}}}, {0, 1}};
  CHECK(smote_oversample(balanced, 5, 1).rows == balanced.rows);
  Dataset lonely{s, {Instance{{0}}, Instance{{1}}, Instance{{2}}}, {0, 0, 1}};
  CHECK(kind_of_throw([&] { smote_oversample(lonely, 5, 1); }) == ErrorKind::TooFewMinoritySamples);
  Dataset ok{s, {Instance{{0}}, Instance{{1}}, Instance{{2}}, Instance{{2}}, Instance{{0}}}, {0, 0, 0, 1, 1}};
  CHECK(kind_of_throw([&] { smote_oversample(ok, 0, 1); }) == ErrorKind::BadConfig);
}

TEST_CASE("k-fold split is a partition for every small (n, k)") {
  for (std::size_t n = 2; n <= 25; ++n) {
    for (int k = 2; k <= static_cast<int>(std::min<std::size_t>(n, 10)); ++k) {
      const auto folds = kfold_split(n, k, 1234 + n);
      REQUIRE(folds.size() == static_cast<std::size_t>(k));
      std::vector<int> seen(n, 0);
      for (int f = 0; f < k; ++f) {
        const auto& fold = folds[f];
        const std::size_t expected = n / k + (static_cast<std::size_t>(f) < n % k ? 1 : 0);
        CHECK(fold.validation.size() == expected);
        CHECK(fold.train.size() == n - expected);
        std::set<std::size_t> v(fold.validation.begin(), fold.validation.end());
        for (auto t : fold.train) CHECK(v.count(t) == 0);
        for (auto i : fold.validation) ++seen[i];
      }
      for (int c : seen) CHECK(c == 1);
    }
  }
  CHECK(kind_of_throw([] { kfold_split(5, 1, 0); }) == ErrorKind::BadFoldCount);
  CHECK(kind_of_throw([] { kfold_split(5, 6, 0); }) == ErrorKind::BadFoldCount);
  CHECK(kfold_split(11, 3, 9)[0].validation == kfold_split(11, 3, 9)[0].validation);
}

TEST_CASE("synthetic generator follows its rule up to the noise rate") {
  const auto cfg = standard_synth_config();
  CHECK(cfg.rows == 2000);
  CHECK(cfg.noise_rate == doctest::Approx(0.1));
  CHECK(cfg.decisive.size() == 3);
  const auto d = synth_generate(cfg, 42);
  REQUIRE(d.size() == 2000);
  d.validate();
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    // independent evaluation of the planted rule
    double score = 0;
    for (const auto& f : cfg.decisive) score += f.weight * d.rows[i][d.schema.index_of(f.feature)];
    const Label clean = score >= cfg.threshold ? 1 : 0;
    CHECK(clean == planted_rule(cfg, d.rows[i]));
    flipped += (clean != d.labels[i]);
  }
  CHECK(static_cast<double>(flipped) / d.size() == doctest::Approx(0.10).epsilon(0.2));
  CHECK(synth_generate(cfg, 42).rows == d.rows);
  CHECK(synth_generate(cfg, 43).rows != d.rows);

  auto bad = cfg;
  bad.noise_rate = 0.7;
  CHECK(kind_of_throw([&] { synth_generate(bad, 1); }) == ErrorKind::BadConfig);
  bad = cfg;
  bad.decisive[0].feature = "nope";
  CHECK(kind_of_throw([&] { synth_generate(bad, 1); }) == ErrorKind::BadConfig);
}

TEST_CASE("csv round trip and error locations") {
  auto cfg = standard_synth_config();
  cfg.rows = 50;
  const auto d = synth_generate(cfg, 5);
  std::stringstream ss;
  write_csv(ss, d);
  const auto back = read_csv(ss, d.schema);
  CHECK(back.rows == d.rows);
  CHECK(back.labels == d.labels);

  std::string text = ss.str();
  {
    std::stringstream in(text.substr(text.find(',') + 1));  // drops "ham01"
    try {
      read_csv(in, d.schema);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MissingColumn);
      CHECK(e.feature() == std::optional<std::string>("ham01"));
    }
  }
  {
    std::stringstream in("ham01,ham02,ham03,ham04,ham05,ham06,ham07,ham08,ham09,ham10,ham11,ham12,ham13,ham14,ham15,ham16,ham17,label\n"
                         "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,1\n"
                         "0,0,9,0,0,0,0,0,0,0,0,0,0,0,0,0,0,1\n");
    try {
      read_csv(in, d.schema);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OutOfRangeValue);
      CHECK(e.feature() == std::optional<std::string>("ham03"));
      CHECK(e.row() == std::optional<std::size_t>(1));
    }
  }
  {
    std::stringstream in("ham01,ham02,ham03,ham04,ham05,ham06,ham07,ham08,ham09,ham10,ham11,ham12,ham13,ham14,ham15,ham16,ham17\n");
    try {
      read_csv(in, d.schema);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MissingColumn);
      CHECK(e.feature() == std::optional<std::string>("label"));
    }
  }
}
