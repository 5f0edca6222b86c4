#include <cmath>

#include "ssflab/error.hpp"
#include "ssflab/ssf.hpp"

namespace ssflab::ssf {

namespace {
void check_interval(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw InvalidArgument("weight: interval must be finite with lo < hi");
}
}  // namespace

WeightFunction WeightFunction::constant(double lo, double hi, double value) {
  check_interval(lo, hi);
  return {lo, hi, [value](double) { return value; },
          "constant(" + std::to_string(value) + ")"};
}

WeightFunction WeightFunction::polynomial(double lo, double hi,
                                          std::vector<double> coefficients) {
  check_interval(lo, hi);
  if (coefficients.empty()) throw InvalidArgument("weight: polynomial needs coefficients");
  std::string description = "polynomial(";
  for (std::size_t k = 0; k < coefficients.size(); ++k)
    description += (k ? "," : "") + std::to_string(coefficients[k]);
  description += ")";
  return {lo, hi,
          [c = std::move(coefficients)](double E) {
            double acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * E + *it;
            return acc;
          },
          std::move(description)};
}

WeightFunction WeightFunction::exponential(double lo, double hi, double scale, double rate) {
  check_interval(lo, hi);
  return {lo, hi, [scale, rate](double E) { return scale * std::exp(rate * E); },
          "exponential(" + std::to_string(scale) + "," + std::to_string(rate) + ")"};
}

}  // namespace ssflab::ssf
