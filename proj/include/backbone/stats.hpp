// Copyright 2026 The Backbone Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BACKBONE_STATS_HPP_
#define BACKBONE_STATS_HPP_

#include <cmath>
#include <cstdint>

#include <boost/math/special_functions/beta.hpp>

namespace backbone {

// Exact (Clopper-Pearson) one-sided upper confidence limit for a binomial
// proportion after x successes in n trials.
inline double clopper_pearson_upper(std::int64_t x, std::int64_t n, double confidence) {
  if (n <= 0 || x >= n) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(x + 1), static_cast<double>(n - x),
                                confidence);
}

// One-sided lower limit, the mirror of clopper_pearson_upper.
inline double clopper_pearson_lower(std::int64_t x, std::int64_t n, double confidence) {
  if (n <= 0 || x <= 0) return 0.0;
  return boost::math::ibeta_inv(static_cast<double>(x), static_cast<double>(n - x + 1),
                                1.0 - confidence);
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Two-sided interval with (1 - confidence)/2 in each tail.
inline Interval clopper_pearson(std::int64_t x, std::int64_t n, double confidence) {
  const double tail = (1.0 + confidence) / 2.0;
  return {clopper_pearson_lower(x, n, tail), clopper_pearson_upper(x, n, tail)};
}

// Half-width k * sqrt(p (1 - p) / n) of a normal band around p.
inline double sigma_band(double p, double n, double k) {
  return k * std::sqrt(p * (1.0 - p) / n);
}

}  // namespace backbone

#endif  // BACKBONE_STATS_HPP_
