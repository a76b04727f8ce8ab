#ifndef PREPLY_NN_GRAD_CHECK_H_
#define PREPLY_NN_GRAD_CHECK_H_

#include <cstddef>
#include <functional>
#include <span>

#include "nn/layers.h"
#include "nn/rng.h"
#include "nn/tape.h"

namespace preply::nn {

// Records a scalar loss on the given tape.
using LossBuilder = std::function<Tape::Var(Tape&)>;

struct GradCheckOptions {
  double epsilon = 1e-5;
  // 0 checks every entry; otherwise entries are sampled with the rng.
  std::size_t max_entries_per_param = 0;
  // Called after backward() and before comparison. Tests use it to corrupt
  // the analytic gradient and confirm the check notices.
  std::function<void(std::span<Parameter* const>)> tamper;
};

// Max over checked entries of |analytic - numeric| / max(|analytic| + |numeric|, 1e-8),
// with numeric gradients from central differences.
double grad_check(const LossBuilder& loss, std::span<Parameter* const> params, Rng& rng,
                  const GradCheckOptions& options = {});

}  // namespace preply::nn

#endif  // PREPLY_NN_GRAD_CHECK_H_
