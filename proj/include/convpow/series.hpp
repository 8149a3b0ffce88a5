#ifndef CONVPOW_SERIES_HPP
#define CONVPOW_SERIES_HPP

#include <cstddef>
#include <vector>

namespace convpow::series {

// Truncated power series c[0] + c[1] s + ... + c[n-1] s^{n-1} over any field-like scalar T.

template <class T>
std::vector<T> mul(const std::vector<T>& a, const std::vector<T>& b) {
  const std::size_t n = a.size();
  std::vector<T> out(n, T(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; i + k < n && k < b.size(); ++k) out[i + k] += a[i] * b[k];
  return out;
}

/// 1/a, requires a[0] != 0.
template <class T>
std::vector<T> inv(const std::vector<T>& a) {
  const std::size_t n = a.size();
  std::vector<T> out(n, T(0));
  out[0] = T(1) / a[0];
  for (std::size_t k = 1; k < n; ++k) {
    T acc(0);
    for (std::size_t i = 1; i <= k; ++i) acc += a[i] * out[k - i];
    out[k] = -acc / a[0];
  }
  return out;
}

/// log(1 + u) for u with u[0] = 0, from (1 + u) w' = u'.
template <class T>
std::vector<T> log1p(const std::vector<T>& u) {
  const std::size_t n = u.size();
  std::vector<T> w(n, T(0));
  for (std::size_t k = 1; k < n; ++k) {
    T acc = T(static_cast<long>(k)) * u[k];
    for (std::size_t i = 1; i < k; ++i) acc -= u[k - i] * T(static_cast<long>(i)) * w[i];
    w[k] = acc / T(static_cast<long>(k));
  }
  return w;
}

template <class T>
std::vector<T> pow(const std::vector<T>& a, int e) {
  std::vector<T> out(a.size(), T(0));
  out[0] = T(1);
  for (int i = 0; i < e; ++i) out = mul(out, a);
  return out;
}

}  // namespace convpow::series

#endif
