#include "responder/vocab.h"

#include <algorithm>
#include <map>

#include "common/error.h"

namespace preply::responder {

Vocab::Vocab() {
  for (std::string_view t : {"<pad>", "<unk>", "<bos>", "<eos>"}) add(t);
}

int Vocab::add(std::string_view token) {
  auto [it, inserted] = index_.try_emplace(std::string(token), static_cast<int>(tokens_.size()));
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

int Vocab::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocab::token(int id) const {
  require(id >= 0 && static_cast<std::size_t>(id) < tokens_.size(), ErrorCode::kInvalidArgument,
          "Vocab: id " + std::to_string(id) + " out of range");
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocab::encode(const text::Tokens& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(id(t));
  return ids;
}

text::Tokens Vocab::decode(std::span<const int> ids) const {
  text::Tokens out;
  for (int i : ids) {
    if (i >= static_cast<int>(kReservedCount)) out.push_back(token(i));
  }
  return out;
}

nlohmann::ordered_json Vocab::to_json() const {
  return nlohmann::ordered_json(
      std::vector<std::string>(tokens_.begin() + kReservedCount, tokens_.end()));
}

Vocab Vocab::from_json(const nlohmann::json& doc) {
  Vocab v;
  try {
    for (const auto& t : doc) {
      const auto token = t.get<std::string>();
      require(!v.contains(token), ErrorCode::kParse, "vocab: duplicate token '" + token + "'");
      v.add(token);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("vocab: ") + e.what());
  }
  return v;
}

Vocab build_vocab(std::span<const text::Tokens> sequences, std::size_t max_size) {
  require(max_size > kReservedCount, ErrorCode::kInvalidArgument,
          "build_vocab: max_size must exceed the 4 reserved ids");
  std::map<std::string, std::size_t> counts;
  for (const auto& seq : sequences) {
    for (const auto& t : seq) ++counts[t];
  }
  require(!counts.empty(), ErrorCode::kData, "build_vocab: empty corpus");
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // `counts` is already lexicographic; a stable sort keeps that for ties.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  Vocab vocab;
  for (const auto& [token, count] : ranked) {
    if (vocab.size() >= max_size) break;
    vocab.add(token);
  }
  return vocab;
}

}  // namespace preply::responder
