#pragma once

#include <cmath>
#include <stdexcept>

#include "routerq/rng.hpp"

namespace routerq {

// Rate/SCV pair describing a generalized exponential variate. SCV = 1
// degenerates to the plain exponential; SCV > 1 adds an atom at zero, which
// is what produces batch (bursty) interarrivals.
struct GEParams {
  double rate = 1.0;  // events per second
  double scv = 1.0;   // squared coefficient of variation

  void validate() const {
    if (!(rate > 0.0))
      throw std::invalid_argument("GEParams: rate must be > 0");
    if (!(scv >= 1.0))
      throw std::invalid_argument("GEParams: scv must be >= 1");
  }
};

// Mixing probability tau = 2 / (scv + 1), in (0, 1].
inline double ge_tau(const GEParams& params) {
  params.validate();
  return 2.0 / (params.scv + 1.0);
}

// Inverse-transform step shared by the samplers; u must lie in (0, 1).
inline double exp_transform(double rate, double u) {
  return -std::log(u) / rate;
}

inline double exp_sample(double rate, Rng& rng) {
  if (!(rate > 0.0))
    throw std::invalid_argument("exp_sample: rate must be > 0");
  return exp_transform(rate, rng.uniform());
}

// Precomputed GE sampler for hot loops. Draws zero with probability 1 - tau,
// otherwise Exp(tau * rate); the stream has mean 1/rate and SCV = scv.
class GESampler {
 public:
  explicit GESampler(const GEParams& params)
      : tau_(ge_tau(params)), exp_rate_(tau_ * params.rate) {}

  double operator()(Rng& rng) const {
    if (rng.uniform() <= tau_) return exp_transform(exp_rate_, rng.uniform());
    return 0.0;
  }

  double tau() const { return tau_; }

 private:
  double tau_;
  double exp_rate_;
};

inline double ge_sample(const GEParams& params, Rng& rng) {
  return GESampler(params)(rng);
}

}  // namespace routerq
