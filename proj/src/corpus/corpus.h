#ifndef PREPLY_CORPUS_CORPUS_H_
#define PREPLY_CORPUS_CORPUS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "common/error.h"
#include "json.hpp"
#include "nn/rng.h"

namespace preply::corpus {

enum class RecipientType { kWork, kPersonal };

std::string_view to_string(RecipientType t);
RecipientType parse_recipient_type(std::string_view s);

struct Email {
  std::string id;
  std::string from;
  std::vector<std::string> to;
  RecipientType recipient_type = RecipientType::kWork;
  std::string subject;
  std::string body;
  std::optional<std::string> in_reply_to;
  std::string timestamp;  // YYYY-MM-DDTHH:MM

  friend bool operator==(const Email&, const Email&) = default;
};

// One JSON object per line with the fixed key order
// id, from, to, recipient_type, subject, body, in_reply_to, timestamp.
std::string email_to_json(const Email& email);
Email email_from_json(const nlohmann::json& obj);

// Validates id uniqueness and in_reply_to linkage. Parse errors name the
// 1-based line number.
std::vector<Email> parse_corpus(std::string_view jsonl);
std::string serialize_corpus(std::span<const Email> emails);
std::vector<Email> load_corpus(const std::filesystem::path& path);
void save_corpus(std::span<const Email> emails, const std::filesystem::path& path);

// A request email and the first reply to it, if any.
struct Thread {
  const Email* request = nullptr;
  const Email* reply = nullptr;
};

// Threads in corpus order; every email without in_reply_to starts one.
std::vector<Thread> build_threads(std::span<const Email> emails);

// The part of an address before '@'.
std::string user_of(std::string_view address);

inline constexpr std::size_t kMinSplitSize = 5;

// Seeded shuffle; the first ceil(0.8 N) items train, the rest test.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_80_20(std::vector<T> items, nn::Rng& rng) {
  require(items.size() >= kMinSplitSize, ErrorCode::kData,
          "split_80_20: need at least 5 items, got " + std::to_string(items.size()));
  rng.shuffle(std::span<T>(items));
  const auto n_train = static_cast<std::size_t>(
      std::ceil(0.8 * static_cast<double>(items.size())));
  std::vector<T> test(std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(n_train)),
                      std::make_move_iterator(items.end()));
  items.resize(n_train);
  return {std::move(items), std::move(test)};
}

// Same rule applied inside each group (e.g. per user) so that every group
// with two or more items lands in both halves. Groups are visited in key
// order; outputs keep group order.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_80_20_by(
    std::vector<T> items, const std::function<std::string(const T&)>& group_of,
    nn::Rng& rng) {
  require(items.size() >= kMinSplitSize, ErrorCode::kData,
          "split_80_20: need at least 5 items, got " + std::to_string(items.size()));
  std::map<std::string, std::vector<T>> groups;
  for (T& item : items) {
    std::string key = group_of(item);
    groups[std::move(key)].push_back(std::move(item));
  }
  std::vector<T> train;
  std::vector<T> test;
  for (auto& [key, members] : groups) {
    rng.shuffle(std::span<T>(members));
    auto n_train = static_cast<std::size_t>(
        std::ceil(0.8 * static_cast<double>(members.size())));
    if (members.size() >= 2) n_train = std::min(n_train, members.size() - 1);
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < n_train ? train : test).push_back(std::move(members[i]));
    }
  }
  return {std::move(train), std::move(test)};
}

}  // namespace preply::corpus

#endif  // PREPLY_CORPUS_CORPUS_H_
