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

#ifndef BACKBONE_BOUNDS_HPP_
#define BACKBONE_BOUNDS_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace backbone {

// Upper end of the open interval of valid typicality factors.
inline constexpr double kMaxDeltaTyp = 40.0 / 81.0;

enum class BoundsErrc { kInvalidDelta, kEpsilonTooLarge };

class BoundsError : public std::domain_error {
 public:
  BoundsError(BoundsErrc code, const std::string& what)
      : std::domain_error(what), code_(code) {}
  BoundsErrc code() const { return code_; }

 private:
  BoundsErrc code_;
};

struct DerivedParams {
  double g = 1.0;            // propagation discount e^{-alpha*Delta}
  double eta = 0.0;          // delta^2 g^2 alpha
  double mu = 0.0;           // prefactor of the typical-event bound
  double growth_coeff = 1.0; // 1 - 41 delta / 40
  double delta = 0.0;
};

inline void require_valid_delta(double delta_typ) {
  if (!(delta_typ > 0.0 && delta_typ < kMaxDeltaTyp)) {
    throw BoundsError(BoundsErrc::kInvalidDelta,
                      "InvalidDelta: delta_typ must lie in (0, 40/81), got " +
                          std::to_string(delta_typ));
  }
}

inline double mu_from_eta(double eta) {
  const double one_minus = -std::expm1(-eta / 27.0);
  return 9.0 * std::exp(2.0 * eta / 27.0) / (one_minus * one_minus);
}

inline DerivedParams derive(double alpha, double delta_net, double delta_typ) {
  require_valid_delta(delta_typ);
  if (!(alpha > 0.0) || !(delta_net >= 0.0)) {
    throw std::invalid_argument("derive: need alpha > 0 and delta_net >= 0");
  }
  DerivedParams d;
  d.delta = delta_typ;
  d.g = std::exp(-alpha * delta_net);
  d.eta = delta_typ * delta_typ * d.g * d.g * alpha;
  d.mu = mu_from_eta(d.eta);
  d.growth_coeff = 1.0 - 41.0 * delta_typ / 40.0;
  return d;
}

struct Admissibility {
  bool ok = false;
  double lhs = 0.0;  // (1 - 81 delta / 40) g^2 alpha
};

inline Admissibility admissible(double alpha, double beta, double delta_net,
                                double delta_typ) {
  const DerivedParams d = derive(alpha, delta_net, delta_typ);
  Admissibility a;
  a.lhs = (1.0 - 81.0 * delta_typ / 40.0) * d.g * d.g * alpha;
  a.ok = a.lhs > beta;
  return a;
}

// A failure-probability bound; `vacuous` marks values >= 1.
struct Bound {
  double value = 0.0;
  bool vacuous = false;
};

inline Bound make_bound(double v) { return {v, !(v < 1.0)}; }

struct EventBounds {
  Bound good;     // 9 e^{-eta (t-s) / 24}
  Bound typical;  // mu e^{-eta (t-s) / 27}
};

inline EventBounds event_bounds(const DerivedParams& d, double s, double t) {
  const double len = t - s;
  return {make_bound(9.0 * std::exp(-d.eta * len / 24.0)),
          make_bound(d.mu * std::exp(-d.eta * len / 27.0))};
}

// Common-prefix failure bound for depth k.
inline double depth_bound(const DerivedParams& d, double alpha, double k,
                          double delta_net) {
  return d.mu * std::exp(-(d.eta / 27.0) * (k / (2.0 * alpha) - 2.0 * delta_net));
}

// Exclusive upper limit on eps in the confirmation formulas:
// factor * mu * e^{-3(1+Delta) delta g^2 alpha}.
inline double epsilon_ceiling(const DerivedParams& d, double factor,
                              double alpha, double delta_net) {
  return factor * d.mu *
         std::exp(-3.0 * (1.0 + delta_net) * d.delta * d.g * d.g * alpha);
}

// ceil((54 alpha / eta) ln(count * mu / eps) + 4 alpha Delta)
inline std::int64_t confirmation_depth(const DerivedParams& d, double count,
                                       double eps, double alpha, double delta_net) {
  return static_cast<std::int64_t>(std::ceil(
      (54.0 * alpha / d.eta) * std::log(count * d.mu / eps) + 4.0 * alpha * delta_net));
}

// Time after R_h by which the h-high leader prefix is permanent with
// probability 1 - eps. Returns +inf when g == 1.
inline double prism_leader_time(double r_h, double eps, int m,
                                const DerivedParams& d, double alpha,
                                double delta_net) {
  if (!(eps > 0.0) || !(eps < epsilon_ceiling(d, m, alpha, delta_net))) {
    throw BoundsError(BoundsErrc::kEpsilonTooLarge,
                      "EpsilonTooLarge: eps must lie in (0, m mu e^{-3(1+Delta) delta g^2 alpha})");
  }
  const double denom = d.growth_coeff * (1.0 - d.g) * d.g * alpha;
  const double body = (54.0 * alpha / d.eta) * std::log(m * d.mu / eps) +
                      4.0 * alpha * delta_net + 1.0;
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return r_h + body / denom + delta_net;
}

struct TxConfirmation {
  std::int64_t k = 0;
  double t = 0.0;  // +inf when g == 1
};

// Depth and time after which a transaction credible at r is permanent with
// probability 1 - eps.
inline TxConfirmation prism_tx_time(double r, double eps, int m,
                                    const DerivedParams& d, double alpha,
                                    double delta_net) {
  if (!(eps > 0.0) || !(eps < epsilon_ceiling(d, m + 1, alpha, delta_net))) {
    throw BoundsError(BoundsErrc::kEpsilonTooLarge,
                      "EpsilonTooLarge: eps must lie in (0, (m+1) mu e^{-3(1+Delta) delta g^2 alpha})");
  }
  TxConfirmation c;
  c.k = confirmation_depth(d, m + 1, eps, alpha, delta_net);
  const double gc = d.growth_coeff;
  const double denom = gc * gc * (1.0 - d.g) * (1.0 - d.g) * d.g * d.g * alpha;
  c.t = denom > 0.0 ? r + 2.0 * (static_cast<double>(c.k) + 1.0) / denom + delta_net
                    : std::numeric_limits<double>::infinity();
  return c;
}

// Minimum interval length for the event lemmas, 80(1+Delta)/delta.
inline double min_event_interval(double delta_net, double delta_typ) {
  return 80.0 * (1.0 + delta_net) / delta_typ;
}

// Minimum depth for the depth-k theorems, 160 alpha (1+Delta)/delta.
inline double min_theorem_depth(double alpha, double delta_net, double delta_typ) {
  return 160.0 * alpha * (1.0 + delta_net) / delta_typ;
}

}  // namespace backbone

#endif  // BACKBONE_BOUNDS_HPP_
