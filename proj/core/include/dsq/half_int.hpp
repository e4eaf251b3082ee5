#ifndef DSQ_HALF_INT_HPP
#define DSQ_HALF_INT_HPP

#include <compare>
#include <string>

#include "dsq/errors.hpp"

namespace dsq {

// Exact half-integer angular momentum value, stored as twice its value so
// that j = 3/2 is representable without rounding.  All arithmetic stays in
// integers; conversion to double happens only at the numerics boundary.
class HalfInt {
 public:
  constexpr HalfInt() = default;

  static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
  static constexpr HalfInt whole(int n) { return HalfInt(2 * n); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return twice_ / 2.0; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr bool is_nonnegative() const { return twice_ >= 0; }

  // A magnetic projection m is admissible for momentum j when |m| <= j and
  // both have the same integer/half-integer character.
  constexpr bool admits_projection(HalfInt m) const {
    return same_parity(m) && m.twice_ >= -twice_ && m.twice_ <= twice_;
  }
  constexpr bool same_parity(HalfInt other) const {
    return ((twice_ ^ other.twice_) & 1) == 0;
  }

  constexpr HalfInt operator+(HalfInt o) const { return HalfInt(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt(twice_ - o.twice_); }
  constexpr HalfInt operator-() const { return HalfInt(-twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

 private:
  explicit constexpr HalfInt(int twice) : twice_(twice) {}
  int twice_ = 0;
};

inline HalfInt require_momentum(HalfInt j, const char* label) {
  if (!j.is_nonnegative()) {
    throw ConfigError(std::string(label) + " must be a nonnegative (half-)integer, got " + j.str());
  }
  return j;
}

}  // namespace dsq

#endif
