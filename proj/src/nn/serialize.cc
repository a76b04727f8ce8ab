#include "nn/serialize.h"

#include "common/error.h"
#include "common/file_util.h"

namespace preply::nn {

using nlohmann::ordered_json;

const Matrix& ModelFile::tensor(std::string_view name) const {
  for (const auto& [n, m] : tensors) {
    if (n == name) return m;
  }
  fail(ErrorCode::kParse, "model file has no tensor named '" + std::string(name) + "'");
}

std::string serialize_model(const ModelFile& model) {
  ordered_json doc;
  doc["format"] = kModelFormat;
  doc["kind"] = model.kind;
  ordered_json shapes = ordered_json::array();
  std::size_t total = 0;
  for (const auto& [name, m] : model.tensors) {
    shapes.push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}});
    total += m.size();
  }
  doc["shapes"] = std::move(shapes);
  doc["meta"] = model.meta;
  ordered_json data = ordered_json::array();
  data.get_ref<ordered_json::array_t&>().reserve(total);
  for (const auto& [name, m] : model.tensors) {
    require(m.all_finite(), ErrorCode::kData, "tensor '" + name + "' has non-finite entries");
    for (double v : m.data()) data.push_back(v);
  }
  doc["data"] = std::move(data);
  return doc.dump() + "\n";
}

ModelFile parse_model(std::string_view text, std::string_view expected_kind) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    require(doc.value("format", "") == kModelFormat, ErrorCode::kParse,
            "unsupported model format '" + doc.value("format", "") + "'");
    ModelFile model;
    model.kind = doc.at("kind").get<std::string>();
    require(expected_kind.empty() || model.kind == expected_kind, ErrorCode::kParse,
            "expected model kind '" + std::string(expected_kind) + "', found '" +
                model.kind + "'");
    if (doc.contains("meta")) model.meta = doc.at("meta");
    const auto& data = doc.at("data");
    std::size_t offset = 0;
    for (const auto& shape : doc.at("shapes")) {
      const auto rows = shape.at("rows").get<std::size_t>();
      const auto cols = shape.at("cols").get<std::size_t>();
      require(offset + rows * cols <= data.size(), ErrorCode::kParse,
              "model data shorter than declared shapes");
      Vector values(rows * cols);
      for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = data[offset + i].get<double>();
      }
      offset += values.size();
      model.add(shape.at("name").get<std::string>(), Matrix(rows, cols, std::move(values)));
    }
    require(offset == data.size(), ErrorCode::kParse, "model data longer than declared shapes");
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  write_file(path, serialize_model(model));
}

ModelFile load_model(const std::filesystem::path& path, std::string_view expected_kind) {
  return parse_model(read_file(path), expected_kind);
}

}  // namespace preply::nn
