#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace fdv {

// Values in [0, +inf]. Kept as a plain double; +inf is
// std::numeric_limits<double>::infinity().
using ExtendedReal = double;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class GeneratorKind { TV, KL, Renyi, EGamma };

/*
 * Convex generator f of an f-divergence, f(1) = 0.
 *
 *   TV       f(x) = |x-1| - (x-1)
 *   KL       f(x) = x log x - x + 1
 *   Renyi    f(x) = x^l - l x + l - 1,  l > 1
 *   EGamma   f(x) = (x - g)_+,          g >= 1
 *
 * Derivatives at kinks are right derivatives (the maximal subgradient).
 */
class Generator {
 public:
  static Generator tv() { return Generator(GeneratorKind::TV, 0.0); }
  static Generator kl() { return Generator(GeneratorKind::KL, 0.0); }
  static Generator renyi(double lambda);
  static Generator egamma(double gamma);

  // "tv", "kl", "renyi:<lambda>", "egamma:<gamma>"
  static Generator parse(std::string_view spec);

  GeneratorKind kind() const { return kind_; }
  double param() const { return param_; }
  std::string name() const;
  std::string kind_name() const;

  // KL and Renyi: f'(inf) = +inf.
  bool superlinear() const {
    return kind_ == GeneratorKind::KL || kind_ == GeneratorKind::Renyi;
  }

  double f(double t) const;
  double fprime(double t) const;
  double fsecond(double t) const;
  ExtendedReal fprime_at_infinity() const;
  // inf{t > 0 : f'(t) >= u}
  ExtendedReal inv_fprime(double u) const;

 private:
  Generator(GeneratorKind k, double p) : kind_(k), param_(p) {}
  GeneratorKind kind_;
  double param_;
};

inline double eval_f(const Generator& g, double t) { return g.f(t); }
inline double eval_fprime(const Generator& g, double t) { return g.fprime(t); }
inline ExtendedReal fprime_at_infinity(const Generator& g) {
  return g.fprime_at_infinity();
}
inline ExtendedReal inv_fprime(const Generator& g, double u) { return g.inv_fprime(u); }

}  // namespace fdv
