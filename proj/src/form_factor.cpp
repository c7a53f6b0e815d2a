#include "friedrichs/form_factor.hpp"

#include <cmath>

#include "friedrichs/error.hpp"

namespace friedrichs {

FormFactorFamily parse_form_factor_family(std::string_view name) {
  if (name == "flat-cutoff") return FormFactorFamily::FlatCutoff;
  if (name == "gaussian-bump") return FormFactorFamily::GaussianBump;
  if (name == "lorentzian") return FormFactorFamily::Lorentzian;
  if (name == "power-exponential") return FormFactorFamily::PowerExponential;
  throw DomainError("unknown form factor family '" + std::string(name) + "'");
}

std::string_view to_string(FormFactorFamily family) {
  switch (family) {
    case FormFactorFamily::FlatCutoff: return "flat-cutoff";
    case FormFactorFamily::GaussianBump: return "gaussian-bump";
    case FormFactorFamily::Lorentzian: return "lorentzian";
    case FormFactorFamily::PowerExponential: return "power-exponential";
  }
  return "unknown";
}

FormFactor FormFactor::flat(double amplitude) {
  return {FormFactorFamily::FlatCutoff, amplitude, 1.0, 1.0, 1.0};
}

FormFactor FormFactor::gaussian(double center, double width, double amplitude) {
  return {FormFactorFamily::GaussianBump, amplitude, center, width, 1.0};
}

FormFactor FormFactor::lorentzian(double center, double width, double amplitude) {
  return {FormFactorFamily::Lorentzian, amplitude, center, width, 1.0};
}

FormFactor FormFactor::power_exponential(double exponent, double width, double amplitude) {
  return {FormFactorFamily::PowerExponential, amplitude, 0.0, width, exponent};
}

double FormFactor::operator()(double omega) const {
  switch (family) {
    case FormFactorFamily::FlatCutoff:
      return amplitude;
    case FormFactorFamily::GaussianBump: {
      const double x = (omega - center) / width;
      return amplitude * std::exp(-0.5 * x * x);
    }
    case FormFactorFamily::Lorentzian: {
      const double d = omega - center;
      return amplitude * width * width / (d * d + width * width);
    }
    case FormFactorFamily::PowerExponential: {
      const double x = omega / width;
      return amplitude * std::pow(x, exponent) * std::exp(-x);
    }
  }
  return 0.0;
}

void FormFactor::validate(double cutoff) const {
  if (!std::isfinite(amplitude)) throw DomainError("form factor amplitude must be finite");
  switch (family) {
    case FormFactorFamily::FlatCutoff:
      break;
    case FormFactorFamily::GaussianBump:
    case FormFactorFamily::Lorentzian:
      if (!(width > 0.0) || !std::isfinite(center) || !std::isfinite(width))
        throw DomainError("form factor needs a finite center and a positive width");
      break;
    case FormFactorFamily::PowerExponential:
      // exponent ≥ 0 keeps V continuous and bounded at ω = 0
      if (!(width > 0.0) || !(exponent >= 0.0) || !std::isfinite(exponent))
        throw DomainError("power-exponential form factor needs width > 0 and exponent >= 0");
      break;
  }
  if (!std::isfinite((*this)(cutoff)) || !std::isfinite((*this)(0.0)))
    throw DomainError("form factor is not finite on [0, cutoff]");
}

}  // namespace friedrichs
