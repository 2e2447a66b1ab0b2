#include "fdiv/generator.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "fdiv/errors.hpp"

namespace fdv {

namespace {

double parse_param(std::string_view spec, std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw DomainError("bad generator parameter in '" + std::string(spec) + "'");
  }
  return v;
}

}  // namespace

Generator Generator::renyi(double lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) {
    throw DomainError("renyi order must be > 1");
  }
  return Generator(GeneratorKind::Renyi, lambda);
}

Generator Generator::egamma(double gamma) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw DomainError("egamma parameter must be >= 1");
  }
  return Generator(GeneratorKind::EGamma, gamma);
}

Generator Generator::parse(std::string_view spec) {
  auto colon = spec.find(':');
  std::string_view head = spec.substr(0, colon);
  bool has_param = colon != std::string_view::npos;
  if (head == "tv" && !has_param) return tv();
  if (head == "kl" && !has_param) return kl();
  if (head == "renyi" && has_param) return renyi(parse_param(spec, spec.substr(colon + 1)));
  if (head == "egamma" && has_param) return egamma(parse_param(spec, spec.substr(colon + 1)));
  throw DomainError("unknown generator '" + std::string(spec) + "'");
}

std::string Generator::kind_name() const {
  switch (kind_) {
    case GeneratorKind::TV: return "tv";
    case GeneratorKind::KL: return "kl";
    case GeneratorKind::Renyi: return "renyi";
    case GeneratorKind::EGamma: return "egamma";
  }
  return "";
}

std::string Generator::name() const {
  if (kind_ == GeneratorKind::TV || kind_ == GeneratorKind::KL) return kind_name();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%.17g", kind_name().c_str(), param_);
  return buf;
}

double Generator::f(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("f needs finite t >= 0");
  switch (kind_) {
    case GeneratorKind::TV: return std::abs(t - 1.0) - (t - 1.0);
    case GeneratorKind::KL: return t == 0.0 ? 1.0 : t * std::log(t) - t + 1.0;
    case GeneratorKind::Renyi: return std::pow(t, param_) - param_ * t + param_ - 1.0;
    case GeneratorKind::EGamma: return t > param_ ? t - param_ : 0.0;
  }
  return 0.0;
}

double Generator::fprime(double t) const {
  if (!(t > 0.0)) throw DomainError("f' needs t > 0");
  switch (kind_) {
    case GeneratorKind::TV: return t < 1.0 ? -2.0 : 0.0;
    case GeneratorKind::KL: return std::log(t);
    case GeneratorKind::Renyi: return param_ * std::pow(t, param_ - 1.0) - param_;
    case GeneratorKind::EGamma: return t < param_ ? 0.0 : 1.0;
  }
  return 0.0;
}

double Generator::fsecond(double t) const {
  if (!(t > 0.0)) throw DomainError("f'' needs t > 0");
  switch (kind_) {
    case GeneratorKind::TV: return 0.0;
    case GeneratorKind::KL: return 1.0 / t;
    case GeneratorKind::Renyi: return param_ * (param_ - 1.0) * std::pow(t, param_ - 2.0);
    case GeneratorKind::EGamma: return 0.0;
  }
  return 0.0;
}

ExtendedReal Generator::fprime_at_infinity() const {
  switch (kind_) {
    case GeneratorKind::TV: return 0.0;
    case GeneratorKind::KL: return kInf;
    case GeneratorKind::Renyi: return kInf;
    case GeneratorKind::EGamma: return 1.0;
  }
  return 0.0;
}

ExtendedReal Generator::inv_fprime(double u) const {
  if (!(u >= 0.0)) throw DomainError("inv_fprime needs u >= 0");
  switch (kind_) {
    case GeneratorKind::TV: return u > 0.0 ? kInf : 1.0;
    case GeneratorKind::KL: return std::exp(u);
    case GeneratorKind::Renyi:
      return std::max(1.0, std::pow(1.0 + u / param_, 1.0 / (param_ - 1.0)));
    case GeneratorKind::EGamma:
      if (u == 0.0) return 1.0;
      return u <= 1.0 ? param_ : kInf;
  }
  return kInf;
}

}  // namespace fdv
