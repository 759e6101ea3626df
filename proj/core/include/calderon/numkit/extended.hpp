#pragma once

#include <cmath>
#include <limits>
#include <type_traits>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "calderon/numkit/errors.hpp"

namespace calderon::numkit {

template <unsigned Bits>
using BinFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<Bits, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

/// Storage type for coefficients that must survive heavy cancellation.
using Wide = BinFloat<256>;

inline constexpr int kWideBits = 256;

/// Rounds a requested mantissa width up to a compiled width: 53, 128, 192 or 256.
int precision_bucket(int bits);

/// Decimal digits carried by a mantissa of `bits` bits.
int decimal_digits(int bits);

std::string to_decimal_string(const Wide& x);
Wide wide_from_string(const std::string& text);

template <class Real>
double to_double(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return x;
  } else {
    return x.template convert_to<double>();
  }
}

/// Invokes `fn.template operator()<Real>()` with Real matching the bucketed precision.
template <class Fn>
decltype(auto) dispatch_precision(int bits, Fn&& fn) {
  switch (precision_bucket(bits)) {
    case 53:
      return fn.template operator()<double>();
    case 128:
      return fn.template operator()<BinFloat<128>>();
    case 192:
      return fn.template operator()<BinFloat<192>>();
    default:
      return fn.template operator()<Wide>();
  }
}

/// Gauss-Legendre nodes and weights on [-1,1] in the working type, ascending.
template <class Real>
void gauss_legendre(int count, std::vector<Real>& nodes, std::vector<Real>& weights) {
  using std::abs;
  if (count < 1) throw ParameterError("Gauss-Legendre rule needs at least one node");
  nodes.assign(count, Real(0));
  weights.assign(count, Real(0));
  if (count == 1) {
    weights[0] = Real(2);
    return;
  }
  const Real eps = std::numeric_limits<Real>::epsilon();
  const double pi = 3.14159265358979323846;
  // Legendre P_count and its derivative by the three-term recurrence
  auto legendre = [count](const Real& x, Real& p, Real& dp) {
    Real p0 = Real(1), p1 = x;
    for (int j = 2; j <= count; ++j) {
      Real p2 = (Real(2 * j - 1) * x * p1 - Real(j - 1) * p0) / Real(j);
      p0 = p1;
      p1 = p2;
    }
    p = p1;
    dp = Real(count) * (x * p1 - p0) / (x * x - Real(1));
  };
  for (int i = 0; i < count / 2 + count % 2; ++i) {
    Real x = Real(std::cos(pi * (i + 0.75) / (count + 0.5)));
    Real p, dp;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(x, p, dp);
      const Real dx = p / dp;
      x -= dx;
      if (abs(dx) <= Real(4) * eps) break;
    }
    legendre(x, p, dp);
    const Real w = Real(2) / ((Real(1) - x * x) * dp * dp);
    nodes[count - 1 - i] = x;
    nodes[i] = -x;
    weights[i] = w;
    weights[count - 1 - i] = w;
  }
}

}  // namespace calderon::numkit
