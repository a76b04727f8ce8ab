#include "responder/seq2seq.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "common/error.h"
#include "nn/sequence.h"
#include "nn/tape.h"

namespace preply::responder {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Example {
  std::vector<int> source;
  std::vector<int> decoder_input;
  std::vector<int> target;
};

std::vector<int> response_ids(const Vocab& vocab, const text::Tokens& response) {
  std::vector<int> ids = vocab.encode(response);
  if (ids.size() > kMaxDecodeTokens) ids.resize(kMaxDecodeTokens);
  return ids;
}

Example make_example(const Seq2SeqModel& model, const extractor::RequestResponsePair& pair,
                     const persona::PersonaFeatures& persona) {
  Example ex;
  ex.source = encode_source(model, pair.request, persona);
  const std::vector<int> resp = response_ids(model.vocab, pair.response);
  ex.decoder_input.reserve(resp.size() + 1);
  ex.decoder_input.push_back(kBos);
  ex.decoder_input.insert(ex.decoder_input.end(), resp.begin(), resp.end());
  ex.target = resp;
  ex.target.push_back(kEos);
  return ex;
}

// Records the teacher-forced loss of `batch` (summed over tokens, divided
// by the batch size) on `tape`.
nn::Tape::Var record_loss(nn::Tape& tape, Seq2SeqModel& model,
                          std::span<const Example* const> batch) {
  const std::size_t B = batch.size();
  const std::size_t H = model.hidden_dim();
  std::vector<std::vector<int>> src;
  std::vector<std::vector<int>> dec;
  src.reserve(B);
  dec.reserve(B);
  for (const Example* ex : batch) {
    src.push_back(ex->source);
    dec.push_back(ex->decoder_input);
  }
  const nn::TimeMajorBatch src_batch = nn::time_major(src);
  const nn::TimeMajorBatch dec_batch = nn::time_major(dec);

  const auto hc0 = tape.input(nn::Matrix(2 * H, B));
  const auto enc = nn::run_lstm(tape, model.encoder, model.embedding.table, src_batch, hc0);
  std::vector<nn::Tape::Var> states;
  nn::run_lstm(tape, model.decoder, model.embedding.table, dec_batch, enc, &states);

  std::vector<nn::Tape::Var> hs;
  hs.reserve(states.size());
  for (auto s : states) hs.push_back(tape.top_rows(s, H));
  const auto h_all = tape.concat_cols(hs);
  const auto logits = tape.add_bias(tape.matmul(tape.param(model.output.W), h_all),
                                    tape.param(model.output.b));
  std::vector<int> targets(dec_batch.steps * B, -1);
  for (std::size_t j = 0; j < B; ++j) {
    const auto& t = batch[j]->target;
    for (std::size_t step = 0; step < t.size(); ++step) targets[step * B + j] = t[step];
  }
  return tape.softmax_xent(logits, std::move(targets), 1.0 / static_cast<double>(B));
}

std::vector<bool> emittable(const Vocab& vocab) {
  std::vector<bool> ok(vocab.size(), true);
  ok[kPad] = ok[kUnk] = ok[kBos] = false;
  for (const auto& t : persona::all_persona_tokens()) {
    if (vocab.contains(t)) ok[static_cast<std::size_t>(vocab.id(t))] = false;
  }
  return ok;
}

// One decoder step for K hypotheses: `state` is 2H x K, `inputs` holds the
// previous token of each. Returns V x K log-probabilities.
nn::Matrix decode_step(const Seq2SeqModel& model, const nn::Matrix& state,
                       std::span<const int> inputs, nn::Matrix& next_state) {
  const std::size_t H = model.hidden_dim();
  const nn::Matrix x = nn::gather_columns(model.embedding.table.value, inputs);
  nn::lstm_forward(model.decoder.W.value, model.decoder.U.value, model.decoder.b.value, x,
                   state, {}, next_state, nullptr);
  const std::size_t V = model.vocab.size();
  const std::size_t K = inputs.size();
  nn::Matrix logits(V, K);
  logits.map().noalias() = model.output.W.value.map() * next_state.map().topRows(H);
  nn::Matrix out(V, K);
  std::vector<double> column(V);
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t v = 0; v < V; ++v) column[v] = logits(v, j) + model.output.b.value[v];
    const nn::Vector lp = nn::log_softmax(column);
    for (std::size_t v = 0; v < V; ++v) out(v, j) = lp[v];
  }
  return out;
}

nn::Matrix select_columns(const nn::Matrix& m, std::span<const std::size_t> cols) {
  nn::Matrix out(m.rows(), cols.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = m(r, cols[j]);
  }
  return out;
}

}  // namespace

double learning_rate(const Seq2SeqOptions& opts, std::size_t epoch) {
  if (opts.halve_every == 0 || epoch < opts.decay_start) return opts.lr;
  const std::size_t halvings = (epoch - opts.decay_start) / opts.halve_every;
  return std::ldexp(opts.lr, -static_cast<int>(std::min<std::size_t>(halvings, 1000)));
}

std::vector<nn::Parameter*> Seq2SeqModel::parameters() {
  return {&embedding.table, &encoder.W, &encoder.U, &encoder.b, &decoder.W,
          &decoder.U,       &decoder.b, &output.W,  &output.b};
}

std::vector<const nn::Parameter*> Seq2SeqModel::parameters() const {
  return {&embedding.table, &encoder.W, &encoder.U, &encoder.b, &decoder.W,
          &decoder.U,       &decoder.b, &output.W,  &output.b};
}

Vocab build_pair_vocab(std::span<const extractor::RequestResponsePair> pairs,
                       std::size_t max_size) {
  require(!pairs.empty(), ErrorCode::kData, "build_vocab: no training pairs");
  const auto specials = persona::all_persona_tokens();
  require(max_size > kReservedCount + specials.size(), ErrorCode::kInvalidArgument,
          "build_vocab: max_size too small for reserved and persona tokens");
  std::vector<text::Tokens> seqs;
  seqs.reserve(2 * pairs.size());
  for (const auto& p : pairs) {
    seqs.push_back(p.request);
    seqs.push_back(p.response);
  }
  Vocab vocab = build_vocab(seqs, max_size - specials.size());
  for (const auto& t : specials) vocab.add(t);
  return vocab;
}

std::vector<int> encode_source(const Seq2SeqModel& model, const text::Tokens& request,
                               const persona::PersonaFeatures& persona) {
  std::vector<int> ids;
  ids.reserve(request.size() + 4);
  for (const auto& t : persona::persona_tokens(persona)) {
    require(model.vocab.contains(t), ErrorCode::kState,
            "encode_source: vocab lacks persona token " + t);
    ids.push_back(model.vocab.id(t));
  }
  const std::size_t n = std::min(request.size(), model.max_source_len);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(model.vocab.id(request[i]));
  ids.push_back(kEos);
  return ids;
}

Seq2SeqModel init_model(Vocab vocab, const Seq2SeqOptions& opts, nn::Rng& rng) {
  Seq2SeqModel m;
  m.vocab = std::move(vocab);
  m.max_source_len = opts.max_source_len;
  nn::Rng init = rng.fork("init");
  m.embedding = nn::EmbeddingTable("embedding", m.vocab.size(), opts.embed_dim, init);
  m.encoder = nn::LstmParams("encoder", opts.embed_dim, opts.hidden_dim, init);
  m.decoder = nn::LstmParams("decoder", opts.embed_dim, opts.hidden_dim, init);
  m.output = nn::Dense("output", opts.hidden_dim, m.vocab.size(), init);
  return m;
}

Seq2SeqModel train_seq2seq(std::span<const extractor::RequestResponsePair> pairs,
                           const Seq2SeqOptions& opts, nn::Rng& rng, TrainReport* report) {
  require(!pairs.empty(), ErrorCode::kData, "train_seq2seq: no training pairs");
  Seq2SeqModel model = init_model(build_pair_vocab(pairs, opts.vocab_size), opts, rng);
  fit(model, pairs, opts, rng, report);
  return model;
}

void fit(Seq2SeqModel& model, std::span<const extractor::RequestResponsePair> pairs,
         const Seq2SeqOptions& opts, nn::Rng& rng, TrainReport* report) {
  require(!pairs.empty(), ErrorCode::kData, "seq2seq training: no training pairs");
  require(opts.batch_size > 0, ErrorCode::kInvalidArgument,
          "seq2seq training: batch_size must be positive");
  require(opts.lr > 0.0, ErrorCode::kInvalidArgument, "seq2seq training: lr must be > 0");
  const bool swap_persona = opts.generic_persona_rate > 0.0 && model.generic_persona;

  std::vector<Example> own;
  std::vector<Example> generic;
  own.reserve(pairs.size());
  for (const auto& p : pairs) {
    own.push_back(make_example(model, p, p.persona));
    if (swap_persona) generic.push_back(make_example(model, p, *model.generic_persona));
  }

  nn::Rng order_rng = rng.fork("order");
  nn::Rng persona_rng = rng.fork("persona");
  std::vector<nn::Parameter*> params = model.parameters();
  std::vector<std::size_t> order(own.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<const Example*> batch;
  nn::Tape tape;
  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    const double lr = learning_rate(opts, epoch);
    order_rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += opts.batch_size) {
      const std::size_t end = std::min(order.size(), start + opts.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t r = order[i];
        const bool use_generic = swap_persona && persona_rng.bernoulli(opts.generic_persona_rate);
        batch.push_back(use_generic ? &generic[r] : &own[r]);
      }
      tape.clear();
      nn::zero_grads(params);
      const auto loss = record_loss(tape, model, batch);
      total += tape.scalar(loss) * static_cast<double>(batch.size());
      tape.backward(loss);
      nn::sgd_step(params, lr, opts.clip);
    }
    if (report != nullptr) report->epoch_loss.push_back(total / static_cast<double>(own.size()));
  }
}

double batch_loss(Seq2SeqModel& model, std::span<const extractor::RequestResponsePair> pairs) {
  std::vector<Example> examples;
  for (const auto& p : pairs) examples.push_back(make_example(model, p, p.persona));
  std::vector<const Example*> batch;
  for (const auto& e : examples) batch.push_back(&e);
  nn::Tape tape;
  return tape.scalar(record_loss(tape, model, batch));
}

nn::Matrix encode(const Seq2SeqModel& model, std::span<const int> source) {
  const std::size_t H = model.hidden_dim();
  const std::vector<std::vector<int>> one{std::vector<int>(source.begin(), source.end())};
  return nn::run_lstm(model.encoder, model.embedding.table.value, nn::time_major(one),
                      nn::Matrix(2 * H, 1));
}

std::vector<double> first_step_logits(const Seq2SeqModel& model, const nn::Matrix& state) {
  const std::size_t H = model.hidden_dim();
  const int bos[] = {kBos};
  const nn::Matrix x = nn::gather_columns(model.embedding.table.value, bos);
  nn::Matrix next;
  nn::lstm_forward(model.decoder.W.value, model.decoder.U.value, model.decoder.b.value, x,
                   state, {}, next, nullptr);
  std::vector<double> h(next.data().begin(), next.data().begin() + static_cast<std::ptrdiff_t>(H));
  return nn::affine(model.output.W.value, model.output.b.value.data(), h);
}

ScoredResponse greedy_decode(const Seq2SeqModel& model, const text::Tokens& request,
                             const persona::PersonaFeatures& persona) {
  const std::vector<bool> ok = emittable(model.vocab);
  nn::Matrix state = encode(model, encode_source(model, request, persona));
  nn::Matrix next;
  std::vector<int> ids;
  double logprob = 0.0;
  int prev = kBos;
  for (;;) {
    const int in[] = {prev};
    const nn::Matrix lp = decode_step(model, state, in, next);
    std::swap(state, next);
    int best = -1;
    for (std::size_t v = 0; v < ok.size(); ++v) {
      if (ok[v] && (best < 0 || lp(v, 0) > lp(static_cast<std::size_t>(best), 0))) {
        best = static_cast<int>(v);
      }
    }
    logprob += lp(static_cast<std::size_t>(best), 0);
    if (best == kEos) break;
    ids.push_back(best);
    prev = best;
    if (ids.size() == kMaxDecodeTokens) break;
  }
  return {model.vocab.decode(ids), logprob};
}

std::vector<ScoredResponse> nbest(const Seq2SeqModel& model, const text::Tokens& request,
                                  const persona::PersonaFeatures& persona,
                                  std::size_t beam_width, std::size_t k) {
  require(k >= 1 && k <= beam_width, ErrorCode::kInvalidArgument,
          "nbest: need 1 <= k <= beam_width");
  const std::vector<bool> ok = emittable(model.vocab);

  struct Hyp {
    std::vector<int> ids;
    double logprob = 0.0;
  };
  struct Candidate {
    double score;
    std::size_t parent;
    int token;
  };
  std::vector<Hyp> active(1);
  std::vector<Hyp> finished;
  nn::Matrix state = encode(model, encode_source(model, request, persona));
  nn::Matrix next;
  std::vector<Candidate> cands;

  while (!active.empty()) {
    std::vector<int> inputs;
    for (const Hyp& h : active) inputs.push_back(h.ids.empty() ? kBos : h.ids.back());
    const nn::Matrix lp = decode_step(model, state, inputs, next);

    cands.clear();
    for (std::size_t b = 0; b < active.size(); ++b) {
      for (std::size_t v = 0; v < ok.size(); ++v) {
        if (ok[v]) cands.push_back({active[b].logprob + lp(v, b), b, static_cast<int>(v)});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.parent != b.parent) return a.parent < b.parent;
      return a.token < b.token;
    });

    std::vector<Hyp> survivors;
    std::vector<std::size_t> parents;
    for (const Candidate& c : cands) {
      if (survivors.size() + finished.size() >= beam_width) break;
      Hyp h{active[c.parent].ids, c.score};
      if (c.token == kEos) {
        finished.push_back(std::move(h));
        continue;
      }
      h.ids.push_back(c.token);
      if (h.ids.size() == kMaxDecodeTokens) {
        finished.push_back(std::move(h));
        continue;
      }
      survivors.push_back(std::move(h));
      parents.push_back(c.parent);
    }
    active = std::move(survivors);
    if (active.empty()) break;
    state = select_columns(next, parents);

    // Scores only fall as hypotheses grow, so once k finished responses
    // beat every live beam the search is over.
    if (finished.size() >= k) {
      std::vector<double> scores;
      for (const Hyp& h : finished) scores.push_back(h.logprob);
      std::nth_element(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(k - 1),
                       scores.end(), std::greater<>());
      const double kth = scores[k - 1];
      double best_live = kNegInf;
      for (const Hyp& h : active) best_live = std::max(best_live, h.logprob);
      if (best_live < kth) break;
    }
  }

  std::sort(finished.begin(), finished.end(), [](const Hyp& a, const Hyp& b) {
    if (a.logprob != b.logprob) return a.logprob > b.logprob;
    return a.ids < b.ids;
  });
  std::vector<ScoredResponse> out;
  for (std::size_t i = 0; i < finished.size() && out.size() < k; ++i) {
    out.push_back({model.vocab.decode(finished[i].ids), finished[i].logprob});
  }
  return out;
}

nn::ModelFile to_model_file(const Seq2SeqModel& model) {
  nn::ModelFile file;
  file.kind = std::string(kModelKind);
  file.meta["vocab"] = model.vocab.to_json();
  file.meta["max_source_len"] = model.max_source_len;
  file.meta["generic_persona"] = model.generic_persona
                                     ? persona::to_json(*model.generic_persona)
                                     : nlohmann::ordered_json(nullptr);
  for (const nn::Parameter* p : model.parameters()) file.add(p->name, p->value);
  return file;
}

Seq2SeqModel from_model_file(const nn::ModelFile& file) {
  Seq2SeqModel m;
  try {
    m.vocab = Vocab::from_json(file.meta.at("vocab"));
    m.max_source_len = file.meta.at("max_source_len").get<std::size_t>();
    const auto& g = file.meta.at("generic_persona");
    if (!g.is_null()) m.generic_persona = persona::features_from_json(g);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("seq2seq meta: ") + e.what());
  }
  m.embedding.table = nn::Parameter("embedding", file.tensor("embedding"));
  for (auto [lstm, prefix] : {std::pair{&m.encoder, "encoder"}, std::pair{&m.decoder, "decoder"}}) {
    const std::string pre(prefix);
    lstm->W = nn::Parameter(pre + ".W", file.tensor(pre + ".W"));
    lstm->U = nn::Parameter(pre + ".U", file.tensor(pre + ".U"));
    lstm->b = nn::Parameter(pre + ".b", file.tensor(pre + ".b"));
    lstm->hidden_dim = lstm->U.value.cols();
    lstm->input_dim = lstm->W.value.cols();
  }
  m.output.W = nn::Parameter("output.W", file.tensor("output.W"));
  m.output.b = nn::Parameter("output.b", file.tensor("output.b"));
  const std::size_t H = m.encoder.hidden_dim;
  const std::size_t V = m.vocab.size();
  const std::size_t E = m.embedding.dim();
  auto lstm_ok = [&](const nn::LstmParams& p) {
    return p.hidden_dim == H && p.input_dim == E && p.W.value.rows() == 4 * H &&
           p.U.value.rows() == 4 * H && p.b.value.rows() == 4 * H && p.b.value.cols() == 1;
  };
  require(m.embedding.vocab_size() == V && lstm_ok(m.encoder) && lstm_ok(m.decoder) &&
              m.output.W.value.rows() == V && m.output.W.value.cols() == H &&
              m.output.b.value.rows() == V && m.output.b.value.cols() == 1,
          ErrorCode::kParse, "seq2seq: inconsistent tensor shapes");
  return m;
}

void save(const Seq2SeqModel& model, const std::filesystem::path& path) {
  nn::save_model(path, to_model_file(model));
}

Seq2SeqModel load(const std::filesystem::path& path) {
  return from_model_file(nn::load_model(path, kModelKind));
}

}  // namespace preply::responder
