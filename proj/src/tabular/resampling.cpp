#include "cfx/tabular/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cfx/error.hpp"

namespace cfx {

namespace {

double squared_distance(const Instance& a, const Instance& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// k nearest minority rows of minority[self], ties broken by position.
std::vector<std::size_t> nearest(const std::vector<const Instance*>& minority, std::size_t self,
                                 std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(minority.size() - 1);
  for (std::size_t j = 0; j < minority.size(); ++j)
    if (j != self) d.emplace_back(squared_distance(*minority[self], *minority[j]), j);
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(d[i].second);
  return out;
}

}  // namespace

Dataset smote_oversample(const Dataset& data, int k_neighbors, std::uint64_t seed) {
  if (k_neighbors < 1) throw Error(ErrorKind::BadConfig, "k_neighbors must be >= 1");
  const std::size_t n0 = data.count_label(0);
  const std::size_t n1 = data.count_label(1);
  if (n0 == n1) return data;

  const Label minority_label = n0 < n1 ? 0 : 1;
  const std::size_t needed = (n0 < n1 ? n1 : n0) - (n0 < n1 ? n0 : n1);
  std::vector<const Instance*> minority;
  for (std::size_t r = 0; r < data.size(); ++r)
    if (data.labels[r] == minority_label) minority.push_back(&data.rows[r]);
  if (minority.size() < 2)
    throw Error(ErrorKind::TooFewMinoritySamples,
                "minority class has " + std::to_string(minority.size()) + " row(s), need >= 2");

  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_neighbors), minority.size() - 1);
  std::vector<std::vector<std::size_t>> neighbours(minority.size());
  for (std::size_t i = 0; i < minority.size(); ++i) neighbours[i] = nearest(minority, i, k);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(minority.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Dataset out = data;
  out.rows.reserve(data.size() + needed);
  out.labels.reserve(data.size() + needed);
  const auto& schema = data.schema;
  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t base = order[s % order.size()];
    const Instance& x = *minority[base];
    const Instance& nb = *minority[neighbours[base][pick(rng)]];
    const double u = unit(rng);
    Instance synth;
    synth.values.resize(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) {
      double v = x[f] + u * (nb[f] - x[f]);
      const auto& spec = schema.feature(f);
      if (spec.kind == FeatureKind::Ordinal) v = std::round(v);
      synth[f] = std::clamp(v, spec.lower(), spec.upper());
    }
    out.rows.push_back(std::move(synth));
    out.labels.push_back(minority_label);
  }
  return out;
}

std::vector<Fold> kfold_split(std::size_t n_rows, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::BadFoldCount, "k must be >= 2, got " + std::to_string(k));
  if (n_rows < static_cast<std::size_t>(k))
    throw Error(ErrorKind::BadFoldCount,
                std::to_string(n_rows) + " rows cannot fill " + std::to_string(k) + " folds");
  std::vector<std::size_t> idx(n_rows);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  const std::size_t kk = static_cast<std::size_t>(k);
  const std::size_t base = n_rows / kk;
  const std::size_t extra = n_rows % kk;
  std::vector<Fold> folds(kk);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < kk; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    folds[f].validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                               idx.begin() + static_cast<std::ptrdiff_t>(pos + len));
    std::sort(folds[f].validation.begin(), folds[f].validation.end());
    pos += len;
  }
  for (std::size_t f = 0; f < kk; ++f) {
    std::vector<bool> held(n_rows, false);
    for (auto i : folds[f].validation) held[i] = true;
    folds[f].train.reserve(n_rows - folds[f].validation.size());
    for (std::size_t i = 0; i < n_rows; ++i)
      if (!held[i]) folds[f].train.push_back(i);
  }
  return folds;
}

std::vector<Fold> kfold_split(const Dataset& data, int k, std::uint64_t seed) {
  return kfold_split(data.size(), k, seed);
}

}  // namespace cfx
