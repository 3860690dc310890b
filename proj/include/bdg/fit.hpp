#pragma once

#include <string>
#include <vector>

namespace bdg {

enum class FitModel { PowerLaw, Exponential };

struct FitResult {
  double slope = 0.0;      // exponent (power law) or rate (exponential)
  double intercept = 0.0;  // log prefactor
  double residual = 0.0;   // max |log y - fitted log y|
};

/// Least squares in log space: log y = intercept + slope * log x (power law)
/// or intercept + slope * x (exponential). Needs >= 3 points and y > 0.
FitResult fit_scaling(const std::vector<double>& x, const std::vector<double>& y, FitModel model);

FitModel fit_model_from_string(const std::string& s);

}  // namespace bdg
