#include "samurai/embedding.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <istream>

namespace samurai {

std::string_view to_string(Modality modality) {
  switch (modality) {
    case Modality::ObjectRgb: return "object_rgb";
    case Modality::ObjectSilhouette: return "object_silhouette";
    case Modality::QueryText: return "query_text";
    case Modality::QueryShape: return "query_shape";
  }
  return "unknown";
}

std::optional<Modality> parse_modality(std::string_view name) {
  for (const Modality m : kAllModalities) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

EmbeddingStore::EmbeddingStore(EmbeddingHeader header) : header_(std::move(header)) {
  for (const auto& [modality, dim] : header_.dims) dims_[static_cast<std::size_t>(modality)] = dim;
}

void EmbeddingStore::insert(EmbeddingRecord record) {
  const auto m = static_cast<std::size_t>(record.modality);
  const auto name = std::string(to_string(record.modality));
  const auto got = static_cast<std::size_t>(record.vector.size());
  if (got == 0) throw Error(ErrorCode::DimensionMismatch, name + " " + record.id + ": empty vector");
  if (!dims_[m]) dims_[m] = got;
  if (*dims_[m] != got) {
    throw Error(ErrorCode::DimensionMismatch, name + " " + record.id + ": expected " +
                                                  std::to_string(*dims_[m]) + ", got " + std::to_string(got));
  }
  if (vectors_[m].contains(record.id)) throw Error(ErrorCode::DuplicateRecord, name + " " + record.id);
  try {
    vectors_[m].emplace(record.id, normalize(record.vector));
  } catch (const Error&) {
    throw Error(ErrorCode::ZeroVector, name + " " + record.id);
  }
}

const Eigen::VectorXf* EmbeddingStore::find(Modality modality, std::string_view id) const {
  const auto& s = slot(modality);
  const auto it = s.find(id);
  return it == s.end() ? nullptr : &it->second;
}

const Eigen::VectorXf& EmbeddingStore::at(Modality modality, std::string_view id) const {
  if (const auto* v = find(modality, id)) return *v;
  throw Error(ErrorCode::MissingEmbedding, std::string(to_string(modality)) + " " + std::string(id));
}

std::optional<std::size_t> EmbeddingStore::dim(Modality modality) const {
  return dims_[static_cast<std::size_t>(modality)];
}

std::vector<std::string> EmbeddingStore::ids(Modality modality) const {
  std::vector<std::string> out;
  for (const auto& [id, v] : slot(modality)) out.push_back(id);
  return out;
}

namespace {

Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

EmbeddingHeader parse_header(const nlohmann::json& j, std::size_t line) {
  if (!j.is_object() || !j.contains("header") || !j["header"].is_object()) {
    throw parse_error(line, "expected header object");
  }
  const auto& h = j["header"];
  EmbeddingHeader header;
  try {
    header.encoder = h.value("encoder", std::string{});
    header.silhouette = h.at("silhouette").get<std::string>();
    if (h.contains("dims")) {
      for (const auto& [key, value] : h["dims"].items()) {
        const auto m = parse_modality(key);
        if (!m) throw parse_error(line, "unknown modality in dims: " + key);
        header.dims[*m] = value.get<std::size_t>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(line, e.what());
  }
  if (header.silhouette != kSilhouettePolarity) {
    throw Error(ErrorCode::PolarityMismatch,
                "header silhouette '" + header.silhouette + "', expected '" + std::string(kSilhouettePolarity) + "'");
  }
  return header;
}

EmbeddingRecord parse_record(const nlohmann::json& j, std::size_t line) {
  EmbeddingRecord record;
  try {
    record.id = j.at("id").get<std::string>();
    const auto modality_name = j.at("modality").get<std::string>();
    const auto m = parse_modality(modality_name);
    if (!m) throw parse_error(line, "unknown modality " + modality_name);
    record.modality = *m;
    const auto& values = j.at("vector");
    if (!values.is_array()) throw parse_error(line, "vector is not an array");
    record.vector.resize(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i].is_number()) throw parse_error(line, "non-numeric vector entry");
      const float x = values[i].get<float>();
      if (!std::isfinite(x)) throw parse_error(line, "non-finite vector entry");
      record.vector(static_cast<Eigen::Index>(i)) = x;
    }
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(line, e.what());
  }
  if (record.id.empty()) throw parse_error(line, "empty id");
  return record;
}

}  // namespace

EmbeddingStore parse_embeddings(std::istream& in) {
  std::string text;
  std::size_t line_no = 0;
  std::optional<EmbeddingStore> store;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw parse_error(line_no, "blank line");
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(line_no, e.what());
    }
    if (!store) {
      store.emplace(parse_header(j, line_no));
      continue;
    }
    if (j.contains("header")) throw parse_error(line_no, "second header");
    store->insert(parse_record(j, line_no));
  }
  if (!store) throw parse_error(line_no + 1, "missing header");
  return std::move(*store);
}

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_embeddings(in);
}

std::string format_header(const EmbeddingHeader& header) {
  nlohmann::ordered_json dims = nlohmann::ordered_json::object();
  for (const auto& [m, d] : header.dims) dims[std::string(to_string(m))] = d;
  nlohmann::ordered_json h;
  h["header"] = {{"encoder", header.encoder}, {"silhouette", header.silhouette}, {"dims", dims}};
  return h.dump();
}

std::string format_record(const EmbeddingRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["modality"] = to_string(record.modality);
  j["vector"] = std::vector<float>(record.vector.data(), record.vector.data() + record.vector.size());
  return j.dump();
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingHeader& header,
                      const std::vector<EmbeddingRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << format_header(header) << '\n';
  for (const auto& r : records) out << format_record(r) << '\n';
}

}  // namespace samurai
