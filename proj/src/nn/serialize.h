#ifndef PREPLY_NN_SERIALIZE_H_
#define PREPLY_NN_SERIALIZE_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nn/matrix.h"

namespace preply::nn {

inline constexpr std::string_view kModelFormat = "persona-reply-model/1";

// Versioned JSON container shared by every learned model:
//   {"format": "persona-reply-model/1", "kind": ..., "shapes": [...],
//    "meta": {...}, "data": [floats...]}
// `data` is the concatenation of all tensors in `shapes` order, row-major.
// Doubles are printed in shortest round-trip form, so
// serialize(parse(serialize(m))) == serialize(m) byte for byte.
struct ModelFile {
  std::string kind;
  std::vector<std::pair<std::string, Matrix>> tensors;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  void add(std::string name, Matrix m) { tensors.emplace_back(std::move(name), std::move(m)); }
  const Matrix& tensor(std::string_view name) const;
};

std::string serialize_model(const ModelFile& model);
ModelFile parse_model(std::string_view text, std::string_view expected_kind);

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path, std::string_view expected_kind);

}  // namespace preply::nn

#endif  // PREPLY_NN_SERIALIZE_H_
