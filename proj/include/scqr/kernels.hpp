#pragma once

// Smoothing kernels and the smoothed check loss.
//
// Everything here is closed-form. For a kernel K with CDF Kbar(t) = int_{-inf}^t K
// and partial first moment G(t) = int_{-inf}^t w K(w) dw, the convolution of the
// check loss rho_tau with the scaled kernel K_h is
//
//   l_{tau,h}(u) = (tau - 1) u + u Kbar(u/h) - h G(u/h),
//
// with derivative l'(u) = tau - Kbar(-u/h). For |u| > h (compact kernels) this
// reduces exactly to rho_tau apart from the additive constant already absorbed.

#include <cmath>
#include <stdexcept>
#include <string>

namespace scqr {

enum class KernelKind { uniform, gaussian, logistic, epanechnikov, triangular };

inline const char* kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::uniform: return "uniform";
    case KernelKind::gaussian: return "gaussian";
    case KernelKind::logistic: return "logistic";
    case KernelKind::epanechnikov: return "epanechnikov";
    case KernelKind::triangular: return "triangular";
  }
  return "?";
}

namespace detail {

template <typename Scalar>
Scalar sigmoid(Scalar t) {
  // overflow-safe logistic CDF
  if (t >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-t));
  const Scalar e = std::exp(t);
  return e / (Scalar(1) + e);
}

template <typename Scalar>
Scalar log1pexp(Scalar t) {
  if (t > Scalar(0)) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

}  // namespace detail

// K(t): density of the unscaled kernel.
template <typename Scalar>
Scalar kernel_density(KernelKind kind, Scalar t) {
  constexpr Scalar inv_sqrt_2pi = Scalar(0.3989422804014326779399461);
  switch (kind) {
    case KernelKind::uniform:
      return std::abs(t) <= Scalar(1) ? Scalar(0.5) : Scalar(0);
    case KernelKind::gaussian:
      return inv_sqrt_2pi * std::exp(Scalar(-0.5) * t * t);
    case KernelKind::logistic: {
      const Scalar s = detail::sigmoid(t);
      return s * (Scalar(1) - s);
    }
    case KernelKind::epanechnikov:
      return std::abs(t) <= Scalar(1) ? Scalar(0.75) * (Scalar(1) - t * t) : Scalar(0);
    case KernelKind::triangular:
      return std::abs(t) <= Scalar(1) ? Scalar(1) - std::abs(t) : Scalar(0);
  }
  return Scalar(0);
}

// Kbar(t): CDF of the unscaled kernel.
template <typename Scalar>
Scalar kernel_cdf(KernelKind kind, Scalar t) {
  switch (kind) {
    case KernelKind::uniform:
      if (t <= Scalar(-1)) return Scalar(0);
      if (t >= Scalar(1)) return Scalar(1);
      return Scalar(0.5) * (t + Scalar(1));
    case KernelKind::gaussian:
      // erfc-based normal CDF, relative error at stdlib level (<= 1e-15)
      return Scalar(0.5) * std::erfc(-t * Scalar(0.7071067811865475244008444));
    case KernelKind::logistic:
      return detail::sigmoid(t);
    case KernelKind::epanechnikov:
      if (t <= Scalar(-1)) return Scalar(0);
      if (t >= Scalar(1)) return Scalar(1);
      return Scalar(0.5) + Scalar(0.75) * t - Scalar(0.25) * t * t * t;
    case KernelKind::triangular:
      if (t <= Scalar(-1)) return Scalar(0);
      if (t >= Scalar(1)) return Scalar(1);
      if (t < Scalar(0)) { const Scalar s = t + Scalar(1); return Scalar(0.5) * s * s; }
      { const Scalar s = Scalar(1) - t; return Scalar(1) - Scalar(0.5) * s * s; }
  }
  return Scalar(0);
}

// G(t) = int_{-inf}^t w K(w) dw. Tends to 0 at both infinities (mean-zero kernels);
// G(inf) = 0 exactly, G(0) is minus half the kernel's mean absolute deviation.
template <typename Scalar>
Scalar kernel_partial_moment(KernelKind kind, Scalar t) {
  constexpr Scalar inv_sqrt_2pi = Scalar(0.3989422804014326779399461);
  switch (kind) {
    case KernelKind::uniform:
      if (std::abs(t) >= Scalar(1)) return Scalar(0);
      return Scalar(0.25) * (t * t - Scalar(1));
    case KernelKind::gaussian:
      return -inv_sqrt_2pi * std::exp(Scalar(-0.5) * t * t);
    case KernelKind::logistic:
      // int w sigma'(w) dw = t sigma(t) - log(1 + e^t)
      return t * detail::sigmoid(t) - detail::log1pexp(t);
    case KernelKind::epanechnikov: {
      if (std::abs(t) >= Scalar(1)) return Scalar(0);
      const Scalar t2 = t * t;
      return Scalar(0.375) * t2 - Scalar(0.1875) * t2 * t2 - Scalar(0.1875);
    }
    case KernelKind::triangular: {
      if (std::abs(t) >= Scalar(1)) return Scalar(0);
      const Scalar t2 = t * t;
      if (t < Scalar(0)) return Scalar(0.5) * t2 + t2 * t / Scalar(3) - Scalar(1) / Scalar(6);
      return Scalar(0.5) * t2 - t2 * t / Scalar(3) - Scalar(1) / Scalar(6);
    }
  }
  return Scalar(0);
}

// l_{tau,h}(u) = (rho_tau * K_h)(u): convex, C^1, with l'(u) = tau - Kbar(-u/h)
// and asymptotes tau*u (u -> +inf) resp. (tau-1)*u (u -> -inf) up to a constant.
template <typename Scalar>
Scalar smoothed_check_loss(KernelKind kind, Scalar tau, Scalar h, Scalar u) {
  const Scalar t = u / h;
  return (tau - Scalar(1)) * u + u * kernel_cdf(kind, t) - h * kernel_partial_moment(kind, t);
}

// derivative of the smoothed check loss in u
template <typename Scalar>
Scalar smoothed_check_grad(KernelKind kind, Scalar tau, Scalar h, Scalar u) {
  return tau - kernel_cdf(kind, -u / h);
}

inline KernelKind parse_kernel(const std::string& name) {
  if (name == "uniform") return KernelKind::uniform;
  if (name == "gaussian") return KernelKind::gaussian;
  if (name == "logistic") return KernelKind::logistic;
  if (name == "epanechnikov") return KernelKind::epanechnikov;
  if (name == "triangular") return KernelKind::triangular;
  throw std::invalid_argument("unknown kernel: " + name);
}

}  // namespace scqr
