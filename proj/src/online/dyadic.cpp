#include "fdiv/online/dyadic.hpp"

#include <bit>
#include <cmath>

#include "fdiv/errors.hpp"

namespace fdv {

void Dyadic::set_bit(std::size_t i) {
  std::size_t w = i / 64;
  if (words_.size() <= w) words_.resize(w + 1, 0);
  words_[w] |= std::uint64_t{1} << (63 - i % 64);
}

void Dyadic::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

Dyadic Dyadic::from_double(double x) {
  if (!(x >= 0.0 && x < 2.0)) throw DomainError("dyadic context must lie in [0, 2)");
  Dyadic d;
  if (x == 0.0) return d;
  int e = 0;
  double frac = std::frexp(x, &e);  // x = frac 2^e, frac in [0.5, 1)
  auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  // mantissa bit j (LSB = 0) is worth 2^{j + e - 53}, i.e. position 53 - e - j
  for (int j = 0; j < 53; ++j) {
    if ((mant >> j) & 1u) d.set_bit(static_cast<std::size_t>(53 - e - j));
  }
  d.trim();
  return d;
}

Dyadic Dyadic::from_bits(const std::vector<bool>& fraction_bits) {
  Dyadic d;
  for (std::size_t i = 0; i < fraction_bits.size(); ++i) {
    if (fraction_bits[i]) d.set_bit(i + 1);
  }
  d.trim();
  return d;
}

bool Dyadic::bit(std::size_t i) const {
  std::size_t w = i / 64;
  if (w >= words_.size()) return false;
  return (words_[w] >> (63 - i % 64)) & 1u;
}

std::size_t Dyadic::length() const {
  if (words_.empty()) return 0;
  std::uint64_t last = words_.back();
  return (words_.size() - 1) * 64 + (63 - static_cast<std::size_t>(std::countr_zero(last)));
}

double Dyadic::approx() const {
  double v = 0.0;
  double scale = 1.0;
  for (std::size_t w = 0; w < words_.size() && w < 2; ++w) {
    v += static_cast<double>(words_[w]) * scale * 0x1.0p-63;
    scale *= 0x1.0p-64;
  }
  return v;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  std::size_t n = std::min(a.words_.size(), b.words_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
  }
  return a.words_.size() <=> b.words_.size();
}

}  // namespace fdv
