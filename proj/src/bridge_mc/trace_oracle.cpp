#include <cmath>

#include "ssflab/bridge_mc.hpp"
#include "ssflab/error.hpp"
#include "ssflab/parallel.hpp"

namespace ssflab::bridge {

LaplacePoint trace_laplace_from_spectra(const std::vector<double>& spectrum1,
                                        const std::vector<double>& spectrum0, double t) {
  if (!(t > 0.0)) throw InvalidArgument("trace_laplace: t must be positive");
  if (spectrum1.size() != spectrum0.size())
    throw InvalidArgument("trace_laplace: spectra of different sizes");
  // Pairing sorted eigenvalues keeps each difference small.
  CompensatedSum sum;
  for (std::size_t k = 0; k < spectrum0.size(); ++k)
    sum.add(std::exp(-t * spectrum0[k]) - std::exp(-t * spectrum1[k]));
  return {t, sum.value() / t, LaplaceSource::TraceOracle};
}

LaplacePoint trace_laplace_oracle(const lattice::DirichletOperator& op1,
                                  const lattice::DirichletOperator& op0, double t,
                                  std::size_t cap) {
  if (op1.dimension() != op0.dimension())
    throw InvalidArgument("trace_laplace_oracle: operators on different grids");
  return trace_laplace_from_spectra(eigencount::dense_spectrum(op1, cap),
                                    eigencount::dense_spectrum(op0, cap), t);
}

}  // namespace ssflab::bridge
