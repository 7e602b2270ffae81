#include "qpow/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace qpow {

TheoryPrediction predict_theory(const TheoryInputs& in) {
  if (!(in.lambda2 > 0.0) || !(in.lambda1 > in.lambda2)) {
    throw std::domain_error("prediction requires lambda1 > lambda2 > 0");
  }
  if (!(in.epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(in.delta_fail > 0.0) || !(in.delta_fail < 1.0)) {
    throw std::domain_error("failure probability must lie in (0,1)");
  }
  if (!(in.cos_theta0 > 0.0) || !(in.cos_theta0 <= 1.0)) {
    throw std::domain_error("cos_theta0 must lie in (0,1]");
  }
  if (!(in.ce > 0.0)) throw std::domain_error("ce must be positive");
  if (!(in.v0_norm1 > 0.0) || !(in.v0_norm2 > 0.0) || !(in.a_norm1 > 0.0) ||
      !(in.a_norm2 > 0.0)) {
    throw std::domain_error("norms must be positive");
  }

  const double gap_log = std::log(in.lambda1 / in.lambda2);
  const double target = 2.0 * std::sqrt(2.0) /
                        (std::sqrt(in.delta_fail) * in.epsilon * in.cos_theta0);
  long t = static_cast<long>(std::ceil(std::log(target) / gap_log));
  if (t < 1) t = 1;

  const double ratio_v = in.v0_norm1 / in.v0_norm2;
  const double ratio_a = in.a_norm1 / in.a_norm2;
  const double m0 =
      4.0 * in.ce /
      (in.delta_fail * in.epsilon * in.epsilon * in.cos_theta0 *
       in.cos_theta0) *
      ratio_v * ratio_v * static_cast<double>(t) *
      std::pow(ratio_a, 2.0 * static_cast<double>(t));
  return {t, m0};
}

}  // namespace qpow
