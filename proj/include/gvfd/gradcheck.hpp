#pragma once

// Finite-difference verification of the analytic meta-gradient.

#include <cstdint>
#include <vector>

#include "gvfd/control.hpp"
#include "gvfd/gvf.hpp"
#include "gvfd/meta.hpp"
#include "gvfd/rng.hpp"

namespace gvfd {

// A self-contained meta-gradient test case. The context's weight pointers are
// bound on demand so the case can be copied freely.
struct GradcheckCase {
  QWeights control;
  std::vector<GvfWeights> gvfs;
  std::vector<MetaWeights> meta;
  MetaStepContext ctx;

  MetaStepContext context() const;
};

// Weights uniform in [-1, 1], random one-hot GVF features and observations,
// b(a_t) uniform in (0.1, 1) so the ratio lies in (0, 10), lambda = 0.001.
// Cases whose greedy action at the unrolled state is within `min_margin` of a
// tie are redrawn, since the loss has a kink there.
GradcheckCase random_gradcheck_case(Rng& rng, double min_margin = 1e-3);

// Central differences of unrolled_loss over every meta-weight, flattened as
// [w_pi_0, w_c_0, w_pi_1, w_c_1, ...].
std::vector<double> numeric_meta_grad(const GradcheckCase& c, double h = 1e-5);
std::vector<double> flatten(const std::vector<MetaGrad>& g);

// |analytic - numeric| / max(|analytic|, |numeric|) in the Euclidean norm;
// 0 when both vanish.
double relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric);

struct GradcheckReport {
  int n = 0;
  double max_rel_error = 0.0;
  int worst_case = -1;
  std::vector<double> errors;
};

GradcheckReport run_gradcheck(int n, std::uint64_t seed, double h = 1e-5);

}  // namespace gvfd
