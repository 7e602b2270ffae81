#include "qpow/dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qpow/rng.hpp"

namespace qpow {
namespace {

constexpr std::size_t kJacobiMaxDim = 512;

void canonicalize_sign(std::vector<double>& v) {
  std::size_t lead = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[lead])) lead = i;
  }
  if (v[lead] < 0.0) {
    for (double& x : v) x = -x;
  }
}

double offdiag_frobenius2(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const double x = a[p * n + q];
      s += 2.0 * x * x;
    }
  }
  return s;
}

// Lower bound on the spectral norm: the largest column 2-norm.
double column_norm_bound(const DenseMatrix& m) {
  const std::size_t n = static_cast<std::size_t>(m.dim());
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = m.at(static_cast<index_t>(i), static_cast<index_t>(j));
      s += x * x;
    }
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

double residual_norm(const DenseMatrix& m, const std::vector<double>& x,
                     double lambda) {
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double y = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      y += m.at(static_cast<index_t>(i), static_cast<index_t>(j)) * x[j];
    }
    const double r = y - lambda * x[i];
    s += r * r;
  }
  return std::sqrt(s);
}

SmallestEig smallest_by_power(const DenseMatrix& m) {
  const std::size_t n = static_cast<std::size_t>(m.dim());
  // Gershgorin upper bound so that shift*I - M has its largest eigenvalue
  // at the smallest eigenvalue of M.
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = m.at(static_cast<index_t>(i), static_cast<index_t>(j));
      row += (i == j) ? x : std::abs(x);
    }
    shift = std::max(shift, row);
  }

  CounterRng rng(0xd15ea5e, 0, 0,
                 stream_entity(StreamPurpose::system, 0));
  std::vector<double> x(n);
  for (double& xi : x) xi = rng.uniform01() - 0.5;
  double nrm = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  for (double& xi : x) xi /= nrm;

  const double scale = column_norm_bound(m);
  const double target = 1e-9 * std::max(scale, 1e-300);
  std::vector<double> y(n);
  double lambda = 0.0;
  for (int it = 0; it < 200000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        acc += m.at(static_cast<index_t>(i), static_cast<index_t>(j)) * x[j];
      }
      y[i] = shift * x[i] - acc;
    }
    const double mu = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    lambda = shift - mu;
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - mu * x[i];
      rr += r * r;
    }
    if (std::sqrt(rr) < target) {
      canonicalize_sign(x);
      return {lambda, x};
    }
    nrm = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
    if (nrm == 0.0) {
      // x is an exact eigenvector of the shifted matrix with eigenvalue 0.
      canonicalize_sign(x);
      return {shift, x};
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
  }
  throw std::runtime_error("dense eigensolver failed to reach residual target");
}

}  // namespace

DenseEig jacobi_eigensystem(const DenseMatrix& m, int max_sweeps) {
  const std::size_t n = static_cast<std::size_t>(m.dim());
  if (n > kJacobiMaxDim) {
    throw std::invalid_argument("jacobi solver limited to dimension 512");
  }
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] = m.at(static_cast<index_t>(i), static_cast<index_t>(j));
    }
  }
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  double frob2 = 0.0;
  for (double x : a) frob2 += x * x;
  const double stop = std::max(frob2, 1e-300) * 1e-30;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_frobenius2(a, n) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double di = a[i * n + i];
    const double dj = a[j * n + j];
    if (di != dj) return di < dj;
    return i < j;
  });

  DenseEig out;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t col = order[k];
    out.values[k] = a[col * n + col];
    for (std::size_t i = 0; i < n; ++i) out.vectors[k][i] = v[i * n + col];
    double nrm = std::sqrt(std::inner_product(
        out.vectors[k].begin(), out.vectors[k].end(), out.vectors[k].begin(),
        0.0));
    for (double& x : out.vectors[k]) x /= nrm;
    canonicalize_sign(out.vectors[k]);
  }
  return out;
}

SmallestEig dense_eig_smallest(const DenseMatrix& m) {
  const std::size_t n = static_cast<std::size_t>(m.dim());
  if (n == 0) throw std::invalid_argument("empty matrix");

  SmallestEig out;
  if (n <= kJacobiMaxDim) {
    DenseEig eig = jacobi_eigensystem(m);
    out.value = eig.values.front();
    out.vector = std::move(eig.vectors.front());
  } else {
    out = smallest_by_power(m);
  }

  const double scale = column_norm_bound(m);
  if (scale == 0.0) return out;  // zero matrix, residual is exactly zero
  if (residual_norm(m, out.vector, out.value) >= 1e-9 * scale) {
    throw std::runtime_error("dense eigensolver failed to reach residual target");
  }
  return out;
}

}  // namespace qpow
