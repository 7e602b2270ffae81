#pragma once

namespace qpow {

struct TheoryInputs {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double delta_fail = 0.0;  // failure probability budget
  double epsilon = 0.0;     // target angle accuracy
  double cos_theta0 = 0.0;  // starting overlap with the top eigenvector
  double ce = 0.0;          // per-step noise variance constant
  double v0_norm1 = 0.0;
  double v0_norm2 = 0.0;
  double a_norm1 = 0.0;
  double a_norm2 = 0.0;
};

struct TheoryPrediction {
  long t = 0;      // iterations until the angle criterion is met
  double m0 = 0.0; // per-step sparsity budget achieving it
};

TheoryPrediction predict_theory(const TheoryInputs& in);

}  // namespace qpow
