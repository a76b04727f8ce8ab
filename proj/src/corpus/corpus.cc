#include "corpus/corpus.h"

#include <unordered_map>
#include <unordered_set>

#include "common/file_util.h"

namespace preply::corpus {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(RecipientType t) {
  return t == RecipientType::kWork ? "work" : "personal";
}

RecipientType parse_recipient_type(std::string_view s) {
  if (s == "work") return RecipientType::kWork;
  if (s == "personal") return RecipientType::kPersonal;
  fail(ErrorCode::kParse, "unknown recipient_type '" + std::string(s) + "'");
}

std::string email_to_json(const Email& e) {
  ordered_json obj;
  obj["id"] = e.id;
  obj["from"] = e.from;
  obj["to"] = e.to;
  obj["recipient_type"] = to_string(e.recipient_type);
  obj["subject"] = e.subject;
  obj["body"] = e.body;
  obj["in_reply_to"] = e.in_reply_to ? ordered_json(*e.in_reply_to) : ordered_json(nullptr);
  obj["timestamp"] = e.timestamp;
  return obj.dump();
}

Email email_from_json(const json& obj) {
  require(obj.is_object(), ErrorCode::kParse, "email record is not a JSON object");
  for (const char* key : {"id", "from", "to", "body"}) {
    require(obj.contains(key), ErrorCode::kParse, std::string("missing \"") + key + "\"");
  }
  Email e;
  e.id = obj.at("id").get<std::string>();
  require(!e.id.empty(), ErrorCode::kParse, "empty \"id\"");
  e.from = obj.at("from").get<std::string>();
  e.to = obj.at("to").get<std::vector<std::string>>();
  e.recipient_type = parse_recipient_type(obj.value("recipient_type", "work"));
  e.subject = obj.value("subject", "");
  e.body = obj.at("body").get<std::string>();
  if (obj.contains("in_reply_to") && !obj.at("in_reply_to").is_null()) {
    e.in_reply_to = obj.at("in_reply_to").get<std::string>();
  }
  e.timestamp = obj.value("timestamp", "");
  return e;
}

std::vector<Email> parse_corpus(std::string_view jsonl) {
  std::vector<Email> emails;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      Email e = email_from_json(json::parse(line));
      require(ids.insert(e.id).second, ErrorCode::kData, "duplicate id '" + e.id + "'");
      emails.push_back(std::move(e));
    } catch (const json::exception& ex) {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const Error& ex) {
      fail(ex.code(), "line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  for (const Email& e : emails) {
    if (e.in_reply_to) {
      require(ids.contains(*e.in_reply_to), ErrorCode::kData,
              "email '" + e.id + "' replies to unknown id '" + *e.in_reply_to + "'");
    }
  }
  return emails;
}

std::string serialize_corpus(std::span<const Email> emails) {
  std::string out;
  for (const Email& e : emails) {
    out += email_to_json(e);
    out += '\n';
  }
  return out;
}

std::vector<Email> load_corpus(const std::filesystem::path& path) {
  try {
    return parse_corpus(read_file(path));
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

void save_corpus(std::span<const Email> emails, const std::filesystem::path& path) {
  write_file(path, serialize_corpus(emails));
}

std::vector<Thread> build_threads(std::span<const Email> emails) {
  std::unordered_map<std::string, const Email*> first_reply;
  for (const Email& e : emails) {
    if (e.in_reply_to) first_reply.try_emplace(*e.in_reply_to, &e);
  }
  std::vector<Thread> threads;
  for (const Email& e : emails) {
    if (e.in_reply_to) continue;
    auto it = first_reply.find(e.id);
    threads.push_back({&e, it == first_reply.end() ? nullptr : it->second});
  }
  return threads;
}

std::string user_of(std::string_view address) {
  return std::string(address.substr(0, address.find('@')));
}

}  // namespace preply::corpus
