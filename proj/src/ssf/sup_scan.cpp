#include <algorithm>

#include "ssflab/parallel.hpp"
#include "ssflab/ssf.hpp"

namespace ssflab::ssf {

std::vector<SupScanRow> sup_scan(double E, std::span<const double> Ls,
                                 const ScenarioBuilder& builder, int threads) {
  std::vector<SupScanRow> rows(Ls.size());
  parallel_for(Ls.size(), threads, [&](std::size_t k) {
    const OperatorPair pair = builder(Ls[k]);
    const auto r = eigencount::relative_count(pair.op1, pair.op0, E);
    rows[k].L = Ls[k];
    rows[k].value = r.value;
    rows[k].coincident = r.coincident;
    rows[k].dimension = pair.op0.dimension();
  });
  long running = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    running = k == 0 ? rows[k].value : std::max(running, rows[k].value);
    rows[k].running_max = running;
  }
  return rows;
}

}  // namespace ssflab::ssf
