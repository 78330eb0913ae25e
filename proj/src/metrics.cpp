#include "compnet/metrics.hpp"

namespace compnet {

NamedMetric nodf_metric() {
  return NamedMetric{"nodf", [](const BinaryBipartite& m) -> std::optional<double> {
                       if (m.n_rows() * m.n_cols() <= 1) return std::nullopt;
                       return nodf(m).total;
                     }};
}

NamedMetric temperature_metric(const TemperatureOptions& options,
                               const FitnessComplexityOptions& fc_options) {
  return NamedMetric{"temperature",
                     [options, fc_options](const BinaryBipartite& m) -> std::optional<double> {
                       if (m.links() == 0) return std::nullopt;
                       return temperature(m, options, fc_options).temperature;
                     }};
}

}  // namespace compnet
