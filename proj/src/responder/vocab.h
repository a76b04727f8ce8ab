#ifndef PREPLY_RESPONDER_VOCAB_H_
#define PREPLY_RESPONDER_VOCAB_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "text/textproc.h"

namespace preply::responder {

inline constexpr int kPad = 0;
inline constexpr int kUnk = 1;
inline constexpr int kBos = 2;
inline constexpr int kEos = 3;
inline constexpr std::size_t kReservedCount = 4;

// Token <-> id bijection with ids 0..3 reserved for <pad>, <unk>, <bos>,
// <eos>. Unknown tokens map to kUnk.
class Vocab {
 public:
  Vocab();

  // Appends `token` if absent and returns its id.
  int add(std::string_view token);
  int id(std::string_view token) const;
  bool contains(std::string_view token) const { return index_.contains(std::string(token)); }
  const std::string& token(int id) const;
  std::size_t size() const { return tokens_.size(); }

  std::vector<int> encode(const text::Tokens& tokens) const;
  // Drops reserved ids.
  text::Tokens decode(std::span<const int> ids) const;

  nlohmann::ordered_json to_json() const;
  static Vocab from_json(const nlohmann::json& doc);

  friend bool operator==(const Vocab& a, const Vocab& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// The max_size - 4 most frequent tokens, ties broken lexicographically.
// Throws on an empty corpus or max_size <= 4.
Vocab build_vocab(std::span<const text::Tokens> sequences, std::size_t max_size);

}  // namespace preply::responder

#endif  // PREPLY_RESPONDER_VOCAB_H_
