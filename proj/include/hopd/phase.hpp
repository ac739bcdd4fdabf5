#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hopd {

/// Exact lift of a phase, in units of 2^-64 turn.
using RawPhase = __int128;

/// Point of the circle stored as a fixed-point fraction of a turn, so sums
/// of integer multiples are exact (arithmetic in Z/2^64).
class Phase {
public:
  constexpr Phase() = default;

  static constexpr Phase from_turns(std::uint64_t t) {
    Phase p;
    p.turns_ = t;
    return p;
  }

  static Phase from_radians(double rad) {
    constexpr double tau = 2 * std::numbers::pi;
    double x = std::fmod(rad, tau);
    if (x < 0) x += tau;
    long double frac = static_cast<long double>(x) / tau;
    long double t = std::ldexp(frac, 64);
    if (t >= 18446744073709551616.0L) return from_turns(0);
    return from_turns(static_cast<std::uint64_t>(t));
  }

  static constexpr Phase reduce(RawPhase raw) { return from_turns(static_cast<std::uint64_t>(raw)); }

  constexpr std::uint64_t turns() const { return turns_; }

  /// Angle in [0, 2pi).
  double radians() const {
    return static_cast<double>(std::ldexp(static_cast<long double>(turns_), -64) * 2 * std::numbers::pi_v<long double>);
  }

  constexpr Phase operator+(Phase o) const { return from_turns(turns_ + o.turns_); }
  constexpr Phase operator-(Phase o) const { return from_turns(turns_ - o.turns_); }
  constexpr Phase operator-() const { return from_turns(0 - turns_); }
  constexpr Phase scaled(std::int64_t k) const { return from_turns(turns_ * static_cast<std::uint64_t>(k)); }
  Phase& operator+=(Phase o) { turns_ += o.turns_; return *this; }

  friend constexpr bool operator==(Phase, Phase) = default;

private:
  std::uint64_t turns_ = 0;
};

/// Distance on the circle, in radians, in [0, pi].
inline double circular_distance(Phase a, Phase b) {
  std::uint64_t d = a.turns() - b.turns();
  std::uint64_t e = b.turns() - a.turns();
  return Phase::from_turns(d < e ? d : e).radians();
}

inline double circular_distance(double a, double b) {
  constexpr double tau = 2 * std::numbers::pi;
  double d = std::fmod(std::abs(a - b), tau);
  return d > tau / 2 ? tau - d : d;
}

/// floor(raw / m) for the mean of m raw phases.
inline RawPhase floor_div(RawPhase raw, std::int64_t m) {
  RawPhase q = raw / m;
  if ((raw % m != 0) && ((raw < 0) != (m < 0))) --q;
  return q;
}

} // namespace hopd
