#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet<N, K> holds the Taylor coefficients f^(alpha)(x0) / alpha! of a
// function of N variables for every multi-index with |alpha| <= K. All
// arithmetic is exact up to rounding: there is no step size anywhere.
//
// Coefficients are stored degree-major, and within one degree in a fixed
// lexicographic order that does not depend on K. A Jet<N, K-1> therefore
// occupies a prefix of the coefficient array of a Jet<N, K>, which makes
// truncation a copy and differentiation a gather.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <type_traits>
#include <vector>

namespace cosmofinsler {

namespace detail {

constexpr std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <int N, int K>
struct MonomialTable {
  static constexpr std::size_t size = binomial(N + K, K);
  using Exponent = std::array<std::uint8_t, N>;

  std::vector<Exponent> exps;
  std::vector<int> degree;
  // Multiplication table: c[k] += a[i] * b[j] for every (i, j) with
  // deg(i) + deg(j) <= K.
  std::vector<int> mul_i, mul_j, mul_k;
  // For variable v and target index i (|alpha_i| < K): index of alpha_i + e_v.
  std::array<std::vector<int>, N> raise;

  static const MonomialTable& get() {
    static const MonomialTable table;
    return table;
  }

 private:
  MonomialTable() {
    std::map<Exponent, int> lookup;
    for (int d = 0; d <= K; ++d) {
      Exponent e{};
      enumerate(e, 0, d, d);
    }
    for (std::size_t i = 0; i < exps.size(); ++i) lookup[exps[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < exps.size(); ++i) {
      for (std::size_t j = 0; j < exps.size(); ++j) {
        if (degree[i] + degree[j] > K) continue;
        Exponent e{};
        for (int v = 0; v < N; ++v) e[v] = static_cast<std::uint8_t>(exps[i][v] + exps[j][v]);
        mul_i.push_back(static_cast<int>(i));
        mul_j.push_back(static_cast<int>(j));
        mul_k.push_back(lookup.at(e));
      }
    }
    for (int v = 0; v < N; ++v) {
      raise[v].assign(exps.size(), -1);
      for (std::size_t i = 0; i < exps.size(); ++i) {
        if (degree[i] >= K) continue;
        Exponent e = exps[i];
        ++e[v];
        raise[v][i] = lookup.at(e);
      }
    }
  }

  void enumerate(Exponent& e, int var, int remaining, int total) {
    if (var == N - 1) {
      e[var] = static_cast<std::uint8_t>(remaining);
      exps.push_back(e);
      degree.push_back(total);
      return;
    }
    for (int p = remaining; p >= 0; --p) {
      e[var] = static_cast<std::uint8_t>(p);
      enumerate(e, var + 1, remaining - p, total);
    }
    e[var] = 0;
  }
};

}  // namespace detail

template <int N, int K>
class Jet {
  static_assert(N >= 1 && K >= 0, "Jet needs at least one variable");

 public:
  static constexpr int num_vars = N;
  static constexpr int order = K;
  static constexpr std::size_t size = detail::MonomialTable<N, K>::size;
  using Table = detail::MonomialTable<N, K>;

  Jet() { c_.fill(0.0); }
  Jet(double constant) {  // NOLINT: implicit promotion of constants is intended
    c_.fill(0.0);
    c_[0] = constant;
  }

  /// Independent variable number `v` expanded around `x0`.
  static Jet variable(int v, double x0) {
    Jet j(x0);
    if constexpr (K >= 1) j.c_[1 + v] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double coeff(std::size_t i) const { return c_[i]; }
  double& coeff(std::size_t i) { return c_[i]; }
  const std::array<double, size>& coeffs() const { return c_; }

  /// Partial derivative d^|alpha| f / dx^alpha at the expansion point.
  double partial(const std::array<int, N>& alpha) const {
    const auto& t = Table::get();
    double fact = 1.0;
    typename Table::Exponent e{};
    for (int v = 0; v < N; ++v) {
      e[v] = static_cast<std::uint8_t>(alpha[v]);
      for (int q = 2; q <= alpha[v]; ++q) fact *= q;
    }
    auto it = std::find(t.exps.begin(), t.exps.end(), e);
    if (it == t.exps.end()) return 0.0;
    return fact * c_[static_cast<std::size_t>(it - t.exps.begin())];
  }

  /// Exact partial derivative with respect to variable v, one order lower.
  auto d(int v) const {
    static_assert(K >= 1, "cannot differentiate a zeroth-order jet");
    Jet<N, K - 1> out;
    const auto& t = Table::get();
    for (std::size_t i = 0; i < Jet<N, K - 1>::size; ++i) {
      const int src = t.raise[v][i];
      out.coeff(i) = (t.exps[src][v]) * c_[src];
    }
    return out;
  }

  template <int K2>
  Jet<N, K2> truncate() const {
    static_assert(K2 <= K, "truncate can only lower the order");
    Jet<N, K2> out;
    for (std::size_t i = 0; i < Jet<N, K2>::size; ++i) out.coeff(i) = c_[i];
    return out;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t i = 0; i < size; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t i = 0; i < size; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double a) {
    for (auto& x : c_) x *= a;
    return *this;
  }
  Jet& operator/=(double a) { return *this *= (1.0 / a); }
  Jet& operator+=(double a) {
    c_[0] += a;
    return *this;
  }
  Jet& operator-=(double a) {
    c_[0] -= a;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out;
    const auto& t = Table::get();
    const std::size_t n = t.mul_i.size();
    const int* ii = t.mul_i.data();
    const int* jj = t.mul_j.data();
    const int* kk = t.mul_k.data();
    for (std::size_t m = 0; m < n; ++m) out.c_[kk[m]] += a.c_[ii[m]] * b.c_[jj[m]];
    return out;
  }

  /// Evaluates sum_k series[k] * (u - u0)^k, the composition of a univariate
  /// function with Taylor coefficients `series` (taken at u0 = value()).
  Jet compose(const std::array<double, K + 1>& series) const {
    Jet delta = *this;
    delta.c_[0] = 0.0;
    Jet out(series[K]);
    for (int k = K - 1; k >= 0; --k) {
      out = out * delta;
      out.c_[0] += series[k];
    }
    return out;
  }

 private:
  std::array<double, size> c_;
};

template <class T>
struct is_jet : std::false_type {};
template <int N, int K>
struct is_jet<Jet<N, K>> : std::true_type {};
template <class T>
inline constexpr bool is_jet_v = is_jet<std::remove_cvref_t<T>>::value;

inline double value_of(double x) { return x; }
template <int N, int K>
double value_of(const Jet<N, K>& j) {
  return j.value();
}

// Univariate Taylor coefficients of common functions at a point.
namespace series {

template <int K>
std::array<double, K + 1> power(double u0, double p) {
  std::array<double, K + 1> c{};
  double binom = 1.0;
  for (int k = 0; k <= K; ++k) {
    c[k] = binom * std::pow(u0, p - k);
    binom *= (p - k) / (k + 1);
  }
  return c;
}

template <int K>
std::array<double, K + 1> exponential(double u0) {
  std::array<double, K + 1> c{};
  double e = std::exp(u0), f = 1.0;
  for (int k = 0; k <= K; ++k) {
    c[k] = e / f;
    f *= (k + 1);
  }
  return c;
}

template <int K>
std::array<double, K + 1> logarithm(double u0) {
  std::array<double, K + 1> c{};
  c[0] = std::log(u0);
  double pw = u0;
  for (int k = 1; k <= K; ++k) {
    c[k] = ((k % 2) ? 1.0 : -1.0) / (k * pw);
    pw *= u0;
  }
  return c;
}

template <int K>
std::array<double, K + 1> sine(double u0, double phase) {
  std::array<double, K + 1> c{};
  double f = 1.0;
  for (int k = 0; k <= K; ++k) {
    c[k] = std::sin(u0 + phase + k * M_PI / 2) / f;
    f *= (k + 1);
  }
  return c;
}

// Integrates the series of 1 / (1 + sign * u^2) to get atan (sign = +1) or
// atanh (sign = -1).
template <int K>
std::array<double, K + 1> inverse_tangent(double u0, double sign, double c0) {
  std::array<double, K + 1> c{};
  c[0] = c0;
  if constexpr (K >= 1) {
    // Denominator 1 + sign (u0 + e)^2 = d0 + d1 e + d2 e^2.
    const double d0 = 1.0 + sign * u0 * u0, d1 = 2.0 * sign * u0, d2 = sign;
    std::array<double, K> q{};
    for (int k = 0; k < K; ++k) {
      double acc = (k == 0) ? 1.0 : 0.0;
      if (k >= 1) acc -= d1 * q[k - 1];
      if (k >= 2) acc -= d2 * q[k - 2];
      q[k] = acc / d0;
    }
    for (int k = 1; k <= K; ++k) c[k] = q[k - 1] / k;
  }
  return c;
}

}  // namespace series

template <int N, int K>
Jet<N, K> operator+(Jet<N, K> a, const Jet<N, K>& b) {
  return a += b;
}
template <int N, int K>
Jet<N, K> operator-(Jet<N, K> a, const Jet<N, K>& b) {
  return a -= b;
}
template <int N, int K>
Jet<N, K> operator-(Jet<N, K> a) {
  return a *= -1.0;
}
template <int N, int K>
Jet<N, K> operator+(Jet<N, K> a, double b) {
  return a += b;
}
template <int N, int K>
Jet<N, K> operator+(double b, Jet<N, K> a) {
  return a += b;
}
template <int N, int K>
Jet<N, K> operator-(Jet<N, K> a, double b) {
  return a -= b;
}
template <int N, int K>
Jet<N, K> operator-(double b, Jet<N, K> a) {
  a *= -1.0;
  return a += b;
}
template <int N, int K>
Jet<N, K> operator*(Jet<N, K> a, double b) {
  return a *= b;
}
template <int N, int K>
Jet<N, K> operator*(double b, Jet<N, K> a) {
  return a *= b;
}
template <int N, int K>
Jet<N, K> operator/(Jet<N, K> a, double b) {
  return a /= b;
}

template <int N, int K>
Jet<N, K> pow(const Jet<N, K>& u, double p) {
  return u.compose(series::power<K>(u.value(), p));
}
template <int N, int K>
Jet<N, K> operator/(double a, const Jet<N, K>& u) {
  return a * pow(u, -1.0);
}
template <int N, int K>
Jet<N, K> operator/(const Jet<N, K>& a, const Jet<N, K>& b) {
  return a * pow(b, -1.0);
}
template <int N, int K>
Jet<N, K> sqrt(const Jet<N, K>& u) {
  return pow(u, 0.5);
}
template <int N, int K>
Jet<N, K> exp(const Jet<N, K>& u) {
  return u.compose(series::exponential<K>(u.value()));
}
template <int N, int K>
Jet<N, K> log(const Jet<N, K>& u) {
  return u.compose(series::logarithm<K>(u.value()));
}
template <int N, int K>
Jet<N, K> sin(const Jet<N, K>& u) {
  return u.compose(series::sine<K>(u.value(), 0.0));
}
template <int N, int K>
Jet<N, K> cos(const Jet<N, K>& u) {
  return u.compose(series::sine<K>(u.value(), M_PI / 2));
}
template <int N, int K>
Jet<N, K> atan(const Jet<N, K>& u) {
  const double u0 = u.value();
  return u.compose(series::inverse_tangent<K>(u0, 1.0, std::atan(u0)));
}
template <int N, int K>
Jet<N, K> atanh(const Jet<N, K>& u) {
  const double u0 = u.value();
  return u.compose(series::inverse_tangent<K>(u0, -1.0, std::atanh(u0)));
}

}  // namespace cosmofinsler
