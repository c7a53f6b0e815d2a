#pragma once

#include <string>
#include <string_view>

namespace friedrichs {

enum class FormFactorFamily { FlatCutoff, GaussianBump, Lorentzian, PowerExponential };

FormFactorFamily parse_form_factor_family(std::string_view name);
std::string_view to_string(FormFactorFamily family);

// Coupling profile V(ω), evaluable at any ω ≥ 0.
//
//   flat-cutoff        amplitude
//   gaussian-bump      amplitude · exp(−(ω − center)² / (2 width²))
//   lorentzian         amplitude · width² / ((ω − center)² + width²)
//   power-exponential  amplitude · (ω/width)^exponent · exp(−ω/width)
struct FormFactor {
  FormFactorFamily family = FormFactorFamily::FlatCutoff;
  double amplitude = 1.0;
  double center = 1.0;
  double width = 1.0;
  double exponent = 1.0;

  static FormFactor flat(double amplitude = 1.0);
  static FormFactor gaussian(double center, double width, double amplitude = 1.0);
  static FormFactor lorentzian(double center, double width, double amplitude = 1.0);
  static FormFactor power_exponential(double exponent, double width, double amplitude = 1.0);

  double operator()(double omega) const;

  // Throws DomainError when the parameters make V non-finite or discontinuous on [0, cutoff].
  void validate(double cutoff) const;
};

}  // namespace friedrichs
