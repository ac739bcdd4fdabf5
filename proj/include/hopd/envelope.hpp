#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "hopd/errors.hpp"

namespace hopd {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

struct WorstEnvelope {
  BigInt naive_aggregation;      // c^2 4^N
  BigFloat harmonic;             // c 2^N log2(c 2^N)^(r-1)
  BigInt naive_wasserstein;      // (c 2^N)^(3N)
  BigInt certified_wasserstein;  // N (c 2^N)^5
  BigRational ratio;             // (c 2^N)^(3N-5) / N
};

inline BigInt ipow(BigInt b, unsigned e) { return boost::multiprecision::pow(b, e); }

inline WorstEnvelope envelope_worst(unsigned c, unsigned N, unsigned r) {
  if (c < 1 || N < 1 || r < 1) throw InvalidArgument("envelope parameters must be >= 1");
  WorstEnvelope w;
  BigInt size = BigInt(c) << N;
  w.naive_aggregation = BigInt(c) * c * ipow(4, N);
  BigFloat lg = boost::multiprecision::log2(BigFloat(size));
  w.harmonic = BigFloat(size) * boost::multiprecision::pow(lg, static_cast<int>(r) - 1);
  w.naive_wasserstein = ipow(size, 3 * N);
  w.certified_wasserstein = BigInt(N) * ipow(size, 5);
  int e = 3 * static_cast<int>(N) - 5;
  w.ratio = (e >= 0 ? BigRational(ipow(size, e)) : BigRational(1) / BigRational(ipow(size, -e))) / BigRational(N);
  return w;
}

/// Stirling numbers of the second kind S(n, k) and Bell numbers B(n), exact.
class StirlingTable {
public:
  explicit StirlingTable(unsigned n_max) : n_(n_max), s_((n_max + 1) * (n_max + 1)), bell_(n_max + 1) {
    at(0, 0) = 1;
    for (unsigned n = 1; n <= n_max; ++n)
      for (unsigned k = 1; k <= n; ++k) at(n, k) = BigInt(k) * at(n - 1, k) + at(n - 1, k - 1);
    for (unsigned n = 0; n <= n_max; ++n)
      for (unsigned k = 0; k <= n; ++k) bell_[n] += at(n, k);
  }
  const BigInt& stirling(unsigned n, unsigned k) const { return s_[n * (n_ + 1) + k]; }
  const BigInt& bell(unsigned n) const { return bell_[n]; }

private:
  BigInt& at(unsigned n, unsigned k) { return s_[n * (n_ + 1) + k]; }
  unsigned n_;
  std::vector<BigInt> s_;
  std::vector<BigInt> bell_;
};

enum class EnvelopeMode { naive, certified };

/// Expected cost under the uniform merge model: t_0 = c and
/// P(t_{k+1} = t | t_k = s) = S(2s, t) / B(2s). naive: E[(t_0+..+t_N)^(3N)],
/// certified: N E[(t_0+..+t_N)^5]. Carries power moments of the running sum
/// per state.
inline BigFloat envelope_average(unsigned c, unsigned N, EnvelopeMode mode) {
  if (c < 1 || N < 1) throw InvalidArgument("envelope parameters must be >= 1");
  if (N > 12 || (std::uint64_t{c} << N) > 512) throw GuardExceeded("average envelope guard: need N <= 12, c 2^N <= 512");
  const unsigned P = mode == EnvelopeMode::naive ? 3 * N : 5;
  const unsigned tmax = c << N;
  StirlingTable st(tmax);
  std::vector<std::vector<BigFloat>> binom(P + 1, std::vector<BigFloat>(P + 1));
  for (unsigned q = 0; q <= P; ++q) {
    binom[q][0] = 1;
    for (unsigned j = 1; j <= q; ++j) binom[q][j] = binom[q - 1][j - 1] + (j <= q - 1 ? binom[q - 1][j] : BigFloat(0));
  }
  // M[t][q] = E[S^q ; t_k = t]
  std::vector<std::vector<BigFloat>> M(tmax + 1);
  M[c].resize(P + 1);
  for (unsigned q = 0; q <= P; ++q) M[c][q] = boost::multiprecision::pow(BigFloat(c), static_cast<int>(q));
  unsigned cur_max = c;
  for (unsigned k = 0; k < N; ++k) {
    unsigned next_max = 2 * cur_max;
    std::vector<std::vector<BigFloat>> A(next_max + 1, std::vector<BigFloat>(P + 1));
    for (unsigned s = 1; s <= cur_max; ++s) {
      if (M[s].empty()) continue;
      BigFloat B(st.bell(2 * s));
      for (unsigned t = 1; t <= 2 * s; ++t) {
        BigFloat pr = BigFloat(st.stirling(2 * s, t)) / B;
        for (unsigned j = 0; j <= P; ++j) A[t][j] += pr * M[s][j];
      }
    }
    std::vector<std::vector<BigFloat>> next(tmax + 1);
    for (unsigned t = 1; t <= next_max; ++t) {
      bool any = false;
      for (unsigned j = 0; j <= P; ++j) any |= A[t][j] != 0;
      if (!any) continue;
      std::vector<BigFloat> pw(P + 1);
      pw[0] = 1;
      for (unsigned j = 1; j <= P; ++j) pw[j] = pw[j - 1] * t;
      next[t].assign(P + 1, BigFloat(0));
      for (unsigned q = 0; q <= P; ++q)
        for (unsigned j = 0; j <= q; ++j) next[t][q] += binom[q][j] * pw[q - j] * A[t][j];
    }
    M = std::move(next);
    cur_max = next_max;
  }
  BigFloat total = 0;
  for (const auto& m : M)
    if (!m.empty()) total += m[P];
  return mode == EnvelopeMode::certified ? total * N : total;
}

} // namespace hopd
