// Matern correlation and its Bessel backend. boost::math supplies the
// modified Bessel K (checked against the half-integer closed forms); the
// wrappers here pin down edge behavior: M(0) = 1 exactly, the x -> 0
// overflow region of K maps to 1, and the far tail maps to 0.
#pragma once

#include <boost/math/special_functions/bessel.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "depthscan/errors.hpp"

namespace depthscan {

inline double bessel_k(double nu, double x) {
  if (!(nu >= 0)) throw domain_error("bessel_k needs nu >= 0");
  if (!(x > 0)) throw domain_error("bessel_k needs x > 0");
  return boost::math::cyl_bessel_k(nu, x);
}

// M(h; nu, gamma) = 2^{1-nu} Gamma(nu)^{-1} (gamma|h|)^nu K_nu(gamma|h|).
inline double matern(double h, double nu, double gamma) {
  if (!(nu > 0)) throw domain_error("matern needs nu > 0");
  if (!(gamma > 0)) throw domain_error("matern needs gamma > 0");
  if (!std::isfinite(h)) throw non_finite_value("matern lag not finite");
  const double x = gamma * std::abs(h);
  if (x == 0.0) return 1.0;
  double k;
  try {
    k = bessel_k(nu, x);
  } catch (const std::overflow_error&) {
    return 1.0;  // K only overflows deep in the x -> 0 region where M -> 1
  }
  if (k == 0.0) return 0.0;  // far tail underflow
  const double val =
      std::exp2(1.0 - nu) / std::tgamma(nu) * std::pow(x, nu) * k;
  if (!std::isfinite(val)) return x >= 1.0 ? 0.0 : 1.0;
  return std::clamp(val, 0.0, 1.0);
}

}  // namespace depthscan
