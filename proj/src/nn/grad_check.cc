#include "nn/grad_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "common/error.h"

namespace preply::nn {

namespace {

double evaluate(const LossBuilder& loss) {
  Tape tape;
  return tape.scalar(loss(tape));
}

}  // namespace

double grad_check(const LossBuilder& loss, std::span<Parameter* const> params, Rng& rng,
                  const GradCheckOptions& options) {
  const double eps = options.epsilon;
  require(eps >= 1e-7 && eps <= 1e-3, ErrorCode::kInvalidArgument,
          "grad_check: epsilon must lie in [1e-7, 1e-3]");

  zero_grads(params);
  {
    Tape tape;
    tape.backward(loss(tape));
  }
  if (options.tamper) options.tamper(params);

  double worst = 0.0;
  for (Parameter* p : params) {
    const Matrix analytic = p->grad;
    std::vector<std::size_t> entries(p->value.size());
    std::iota(entries.begin(), entries.end(), std::size_t{0});
    if (options.max_entries_per_param > 0 &&
        entries.size() > options.max_entries_per_param) {
      rng.shuffle(std::span<std::size_t>(entries));
      entries.resize(options.max_entries_per_param);
      std::sort(entries.begin(), entries.end());
    }
    for (std::size_t i : entries) {
      const double saved = p->value[i];
      p->value[i] = saved + eps;
      const double plus = evaluate(loss);
      p->value[i] = saved - eps;
      const double minus = evaluate(loss);
      p->value[i] = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[i];
      const double err =
          std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), 1e-8);
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace preply::nn
