#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "cfx/error.hpp"
#include "cfx/tabular/schema.hpp"

namespace cfx::test {

// Three ordinal items (3, 5 and 2 levels) plus one continuous column.
inline FeatureSchema small_schema(bool with_continuous = true) {
  std::vector<FeatureSpec> specs;
  auto ord = [](std::string name, int max_level) {
    FeatureSpec s;
    s.name = std::move(name);
    s.kind = FeatureKind::Ordinal;
    s.max_level = max_level;
    return s;
  };
  specs.push_back(ord("a", 2));
  specs.push_back(ord("b", 4));
  specs.push_back(ord("c", 1));
  if (with_continuous) {
    FeatureSpec s;
    s.name = "dose";
    s.kind = FeatureKind::Continuous;
    s.min = 0.0;
    s.max = 10.0;
    specs.push_back(s);
  }
  return FeatureSchema(std::move(specs), "label", "SNRI");
}

// Every ordinal combination of the schema; continuous features take `cont`.
inline std::vector<Instance> all_instances(const FeatureSchema& schema, const std::vector<double>& cont = {0.0}) {
  std::vector<Instance> out{Instance{}};
  for (const auto& f : schema.features()) {
    std::vector<Instance> next;
    std::vector<double> values;
    if (f.kind == FeatureKind::Ordinal)
      for (int l = 0; l <= f.max_level; ++l) values.push_back(l);
    else
      values = cont;
    for (const auto& partial : out)
      for (double v : values) {
        Instance x = partial;
        x.values.push_back(v);
        next.push_back(std::move(x));
      }
    out = std::move(next);
  }
  return out;
}

template <typename Fn>
ErrorKind kind_of_throw(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected cfx::Error");
}

}  // namespace cfx::test
