#ifndef PREPLY_NN_SEQUENCE_H_
#define PREPLY_NN_SEQUENCE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "nn/layers.h"
#include "nn/matrix.h"
#include "nn/tape.h"

namespace preply::nn {

// Variable-length id sequences laid out step by step. ids[t][j] is the t-th
// id of sequence j (0 past its end); mask[t][j] is 1 while sequence j is
// still running.
struct TimeMajorBatch {
  std::size_t steps = 0;
  std::size_t batch = 0;
  std::vector<std::vector<int>> ids;
  std::vector<std::vector<double>> mask;
};

TimeMajorBatch time_major(std::span<const std::vector<int>> sequences);

// Embedding rows for `ids` as columns (dim x ids.size()).
Matrix gather_columns(const Matrix& table, std::span<const int> ids);

// Runs `lstm` over the batch on the tape starting from `hc0` (2H x B) and
// returns the final stacked state. Finished sequences keep their last state.
// When `steps_out` is given, the state after every step is appended.
Tape::Var run_lstm(Tape& tape, LstmParams& lstm, Parameter& embedding,
                   const TimeMajorBatch& batch, Tape::Var hc0,
                   std::vector<Tape::Var>* steps_out = nullptr);

// Inference-only counterpart; no gradient bookkeeping.
Matrix run_lstm(const LstmParams& lstm, const Matrix& embedding, const TimeMajorBatch& batch,
                Matrix hc0);

}  // namespace preply::nn

#endif  // PREPLY_NN_SEQUENCE_H_
