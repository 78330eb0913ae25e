#pragma once

#include "compnet/community.hpp"
#include "compnet/ensemble.hpp"
#include "compnet/nestedness.hpp"

namespace compnet {

/// Total NODF; undefined on matrices without any row or column pair.
NamedMetric nodf_metric();

/// Temperature under Fitness-Complexity packing; undefined on an all-zero
/// matrix, where the packing itself is undefined.
NamedMetric temperature_metric(const TemperatureOptions& options = {},
                               const FitnessComplexityOptions& fc_options = {});

}  // namespace compnet
