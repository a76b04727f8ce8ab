#include "nn/sequence.h"

#include <algorithm>

#include "common/error.h"

namespace preply::nn {

TimeMajorBatch time_major(std::span<const std::vector<int>> sequences) {
  TimeMajorBatch b;
  b.batch = sequences.size();
  for (const auto& s : sequences) b.steps = std::max(b.steps, s.size());
  b.ids.assign(b.steps, std::vector<int>(b.batch, 0));
  b.mask.assign(b.steps, std::vector<double>(b.batch, 0.0));
  for (std::size_t j = 0; j < b.batch; ++j) {
    for (std::size_t t = 0; t < sequences[j].size(); ++t) {
      b.ids[t][j] = sequences[j][t];
      b.mask[t][j] = 1.0;
    }
  }
  return b;
}

Matrix gather_columns(const Matrix& table, std::span<const int> ids) {
  const std::size_t dim = table.cols();
  Matrix out(dim, ids.size());
  for (std::size_t j = 0; j < ids.size(); ++j) {
    require(ids[j] >= 0 && static_cast<std::size_t>(ids[j]) < table.rows(),
            ErrorCode::kInvalidArgument, "gather_columns: id out of range");
    const double* src = table.row(static_cast<std::size_t>(ids[j])).data();
    for (std::size_t d = 0; d < dim; ++d) out(d, j) = src[d];
  }
  return out;
}

Tape::Var run_lstm(Tape& tape, LstmParams& lstm, Parameter& embedding,
                   const TimeMajorBatch& batch, Tape::Var hc0,
                   std::vector<Tape::Var>* steps_out) {
  const Tape::Var W = tape.param(lstm.W);
  const Tape::Var U = tape.param(lstm.U);
  const Tape::Var b = tape.param(lstm.b);
  Tape::Var hc = hc0;
  for (std::size_t t = 0; t < batch.steps; ++t) {
    const Tape::Var x = tape.lookup(embedding, batch.ids[t]);
    hc = tape.lstm(W, U, b, x, hc, batch.mask[t]);
    if (steps_out != nullptr) steps_out->push_back(hc);
  }
  return hc;
}

Matrix run_lstm(const LstmParams& lstm, const Matrix& embedding, const TimeMajorBatch& batch,
                Matrix hc0) {
  Matrix hc = std::move(hc0);
  Matrix next;
  for (std::size_t t = 0; t < batch.steps; ++t) {
    const Matrix x = gather_columns(embedding, batch.ids[t]);
    lstm_forward(lstm.W.value, lstm.U.value, lstm.b.value, x, hc, batch.mask[t], next,
                 nullptr);
    std::swap(hc, next);
  }
  return hc;
}

}  // namespace preply::nn
