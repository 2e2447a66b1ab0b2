#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace fdv {

/*
 * Exact binary fraction in [0, 2). Bit 0 is the units bit, bit i >= 1 is
 * worth 2^-i. Stored MSB-first in 64-bit words with trailing zero words
 * trimmed, so the ordering is lexicographic on the words.
 *
 * Contexts in the online game are Dyadic so that bisection points of any
 * depth stay exact; every double in [0, 2) converts without rounding.
 */
class Dyadic {
 public:
  Dyadic() = default;
  static Dyadic from_double(double x);
  // 0.b1 b2 ... bk
  static Dyadic from_bits(const std::vector<bool>& fraction_bits);

  bool bit(std::size_t i) const;
  // Index of the last set bit, 0 for the value zero or one.
  std::size_t length() const;
  double approx() const;

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.words_ == b.words_; }

 private:
  void set_bit(std::size_t i);
  void trim();
  std::vector<std::uint64_t> words_;
};

}  // namespace fdv
