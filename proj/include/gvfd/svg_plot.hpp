#pragma once

#include <string>
#include <vector>

#include "gvfd/experiment.hpp"

namespace gvfd {

// Self-contained SVG: one point per batch at its mean evaluation reward with
// a standard-error bar, on a [0, 1] reward axis.
std::string comparison_svg(const std::vector<BatchSummary>& batches,
                           const std::string& title = "Mean evaluation reward");

// The plotted numbers: label,n_trials,n_failed,eval_mean,eval_se.
std::string comparison_csv(const std::vector<BatchSummary>& batches);

}  // namespace gvfd
