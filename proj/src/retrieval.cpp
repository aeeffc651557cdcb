#include "samurai/retrieval.hpp"

#include "samurai/parallel.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace samurai {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::TextOnly: return "text";
    case Strategy::ShapeOnly: return "shape";
    case Strategy::TextThenShapeShapeOrder: return "ts-shape";
    case Strategy::TextThenShapeTextOrder: return "ts-text";
    case Strategy::MajorityVote: return "vote";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (const Strategy s : {Strategy::TextOnly, Strategy::ShapeOnly, Strategy::TextThenShapeShapeOrder,
                           Strategy::TextThenShapeTextOrder, Strategy::MajorityVote}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

int VoteWeights::for_strategy(Strategy s) const {
  switch (s) {
    case Strategy::TextOnly: return text;
    case Strategy::ShapeOnly: return shape;
    case Strategy::TextThenShapeShapeOrder: return hybrid_shape;
    case Strategy::TextThenShapeTextOrder: return hybrid_text;
    case Strategy::MajorityVote: break;
  }
  throw Error(ErrorCode::InvalidArgument, "no vote weight for the vote strategy");
}

namespace {

void validate_weights(const VoteWeights& w) {
  const std::array<int, 4> all{w.text, w.shape, w.hybrid_shape, w.hybrid_text};
  if (std::any_of(all.begin(), all.end(), [](int x) { return x < 0; })) {
    throw Error(ErrorCode::InvalidArgument, "vote weights must be non-negative");
  }
  if (std::none_of(all.begin(), all.end(), [](int x) { return x > 0; })) {
    throw Error(ErrorCode::InvalidArgument, "at least one vote weight must be positive");
  }
}

bool ranks_before(const RankedEntry& a, const RankedEntry& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.object_id < b.object_id;
}

struct SceneScores {
  std::vector<RankedEntry> text;   // catalog order
  std::vector<RankedEntry> shape;  // catalog order
};

std::vector<RankedEntry> hybrid_entries(const SceneScores& scores, std::size_t m, std::size_t k,
                                        HybridOrder order) {
  const auto candidates = top_k(scores.text, m);

  ScoreMap shape_of;
  for (const auto& e : scores.shape) shape_of.emplace(e.object_id, e.score);
  std::vector<RankedEntry> by_shape;
  by_shape.reserve(candidates.size());
  for (const auto& c : candidates) by_shape.push_back({c.object_id, shape_of.at(c.object_id)});
  auto refined = top_k(std::move(by_shape), k);
  if (order == HybridOrder::Shape) return refined;

  ScoreMap text_of;
  for (const auto& c : candidates) text_of.emplace(c.object_id, c.score);
  for (auto& e : refined) e.score = text_of.at(e.object_id);
  std::sort(refined.begin(), refined.end(), ranks_before);
  return refined;
}

}  // namespace

RetrievalParams clamp_params(const RetrievalParams& params, std::size_t catalog_size) {
  if (catalog_size == 0) throw Error(ErrorCode::EmptyDataset, "empty catalog");
  if (params.k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (params.k > params.m) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("k ({}) must not exceed m ({})", params.k, params.m));
  }
  validate_weights(params.weights);
  RetrievalParams out = params;
  if (out.k > catalog_size) {
    spdlog::warn("k clamped from {} to catalog size {}", out.k, catalog_size);
    out.k = catalog_size;
  }
  if (out.m > catalog_size) {
    spdlog::warn("m clamped from {} to catalog size {}", out.m, catalog_size);
    out.m = catalog_size;
  }
  return out;
}

std::vector<RankedEntry> score_catalog(const Eigen::VectorXf& query, const EmbeddingStore& store,
                                       Modality object_modality, Catalog catalog) {
  std::vector<RankedEntry> out;
  out.reserve(catalog.size());
  for (const auto& id : catalog) {
    out.push_back({id, static_cast<double>(cosine(query, store.at(object_modality, id)))});
  }
  return out;
}

std::vector<RankedEntry> top_k(std::vector<RankedEntry> scored, std::size_t k) {
  k = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), ranks_before);
  scored.resize(k);
  return scored;
}

RankedList rank_text(const EmbeddingStore& store, std::string_view scene_id, Catalog catalog, std::size_t k) {
  const auto& query = store.at(Modality::QueryText, scene_id);
  return {std::string(scene_id), Strategy::TextOnly,
          top_k(score_catalog(query, store, Modality::ObjectRgb, catalog), k)};
}

RankedList rank_shape(const EmbeddingStore& store, std::string_view scene_id, Catalog catalog, std::size_t k) {
  const auto& query = store.at(Modality::QueryShape, scene_id);
  return {std::string(scene_id), Strategy::ShapeOnly,
          top_k(score_catalog(query, store, Modality::ObjectSilhouette, catalog), k)};
}

RankedList rank_hybrid(const EmbeddingStore& store, std::string_view scene_id, Catalog catalog,
                       const RetrievalParams& params, HybridOrder order) {
  const SceneScores scores{
      score_catalog(store.at(Modality::QueryText, scene_id), store, Modality::ObjectRgb, catalog),
      score_catalog(store.at(Modality::QueryShape, scene_id), store, Modality::ObjectSilhouette, catalog)};
  return {std::string(scene_id),
          order == HybridOrder::Shape ? Strategy::TextThenShapeShapeOrder : Strategy::TextThenShapeTextOrder,
          hybrid_entries(scores, params.m, params.k, order)};
}

RankedList majority_vote(std::span<const RankedList> lists, const VoteWeights& weights,
                         const ScoreMap& text_scores, std::size_t k) {
  validate_weights(weights);
  if (lists.size() != kBaseStrategies.size()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("majority vote needs 4 lists, got {}", lists.size()));
  }
  for (std::size_t s = 0; s < lists.size(); ++s) {
    if (lists[s].strategy != kBaseStrategies[s]) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("vote list {} is {}, expected {}", s,
                                                          to_string(lists[s].strategy),
                                                          to_string(kBaseStrategies[s])));
    }
    if (lists[s].scene_id != lists.front().scene_id) {
      throw Error(ErrorCode::SceneMismatch, lists[s].scene_id + " vs " + lists.front().scene_id);
    }
  }

  struct Tally {
    long votes = 0;
    long borda = 0;
  };
  std::map<std::string, Tally, std::less<>> tallies;
  for (const auto& list : lists) {
    const long w = weights.for_strategy(list.strategy);
    const auto len = static_cast<long>(list.entries.size());
    for (long r = 0; r < len; ++r) {
      const auto& id = list.entries[static_cast<std::size_t>(r)].object_id;
      if (!text_scores.contains(id)) throw Error(ErrorCode::CatalogMismatch, id + " is not in the catalog");
      auto& t = tallies[id];
      t.votes += w;
      t.borda += w * (len - r);
    }
  }

  struct Candidate {
    const std::string* id;
    Tally tally;
    double text;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(tallies.size());
  for (const auto& [id, tally] : tallies) candidates.push_back({&id, tally, text_scores.find(id)->second});
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.tally.votes != b.tally.votes) return a.tally.votes > b.tally.votes;
    if (a.tally.borda != b.tally.borda) return a.tally.borda > b.tally.borda;
    if (a.text != b.text) return a.text > b.text;
    return *a.id < *b.id;
  });

  RankedList out{lists.front().scene_id, Strategy::MajorityVote, {}};
  for (std::size_t i = 0; i < std::min(k, candidates.size()); ++i) {
    const auto& c = candidates[i];
    out.entries.push_back({*c.id, static_cast<double>(c.tally.votes) + static_cast<double>(c.tally.borda) / kBordaScale});
  }
  return out;
}

RankedList retrieve_scene(const EmbeddingStore& store, std::string_view scene_id, Catalog catalog,
                          const RetrievalParams& params, Strategy strategy) {
  switch (strategy) {
    case Strategy::TextOnly: return rank_text(store, scene_id, catalog, params.k);
    case Strategy::ShapeOnly: return rank_shape(store, scene_id, catalog, params.k);
    case Strategy::TextThenShapeShapeOrder: return rank_hybrid(store, scene_id, catalog, params, HybridOrder::Shape);
    case Strategy::TextThenShapeTextOrder: return rank_hybrid(store, scene_id, catalog, params, HybridOrder::Text);
    case Strategy::MajorityVote: break;
  }

  const SceneScores scores{
      score_catalog(store.at(Modality::QueryText, scene_id), store, Modality::ObjectRgb, catalog),
      score_catalog(store.at(Modality::QueryShape, scene_id), store, Modality::ObjectSilhouette, catalog)};
  const std::string id(scene_id);
  const std::array<RankedList, 4> base{
      RankedList{id, Strategy::TextOnly, top_k(scores.text, params.k)},
      RankedList{id, Strategy::ShapeOnly, top_k(scores.shape, params.k)},
      RankedList{id, Strategy::TextThenShapeShapeOrder, hybrid_entries(scores, params.m, params.k, HybridOrder::Shape)},
      RankedList{id, Strategy::TextThenShapeTextOrder, hybrid_entries(scores, params.m, params.k, HybridOrder::Text)},
  };
  ScoreMap text_scores;
  for (const auto& e : scores.text) text_scores.emplace(e.object_id, e.score);
  return majority_vote(base, params.weights, text_scores, params.k);
}

void check_coverage(const Manifest& manifest, const EmbeddingStore& store, Strategy strategy) {
  const bool text = strategy != Strategy::ShapeOnly;
  const bool shape = strategy != Strategy::TextOnly;
  std::vector<std::string> missing;
  auto need = [&](Modality m, const std::string& id) {
    if (!store.contains(m, id)) missing.push_back(fmt::format("({}, {})", to_string(m), id));
  };
  for (const auto& s : manifest.scenes) {
    if (text) need(Modality::QueryText, s.scene_id);
    if (shape) need(Modality::QueryShape, s.scene_id);
  }
  for (const auto& o : manifest.objects) {
    if (text) need(Modality::ObjectRgb, o.object_id);
    if (shape) need(Modality::ObjectSilhouette, o.object_id);
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::MissingEmbedding,
                fmt::format("{} missing record(s): {}", missing.size(), fmt::join(missing, ", ")));
  }
}

std::vector<RankedList> retrieve_all(const Manifest& manifest, const EmbeddingStore& store,
                                     const RetrievalParams& params, Strategy strategy, unsigned workers) {
  check_coverage(manifest, store, strategy);
  const auto catalog = manifest.object_ids();
  std::vector<RankedList> out(manifest.scenes.size());
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i] = retrieve_scene(store, manifest.scenes[i].scene_id, catalog, params, strategy);
  });
  return out;
}

std::string format_results_csv(std::span<const RankedList> lists) {
  std::vector<const RankedList*> ordered;
  for (const auto& l : lists) ordered.push_back(&l);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const RankedList* a, const RankedList* b) { return a->scene_id < b->scene_id; });

  auto check_field = [](const std::string& s) {
    if (s.find_first_of(",\n\r\"") != std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "id not representable in CSV: " + s);
    }
  };
  std::string out = "scene_id,rank,object_id,score\n";
  for (const auto* list : ordered) {
    check_field(list->scene_id);
    for (std::size_t r = 0; r < list->entries.size(); ++r) {
      check_field(list->entries[r].object_id);
      out += fmt::format("{},{},{},{:.6f}\n", list->scene_id, r + 1, list->entries[r].object_id,
                         list->entries[r].score);
    }
  }
  return out;
}

void write_results_csv(const std::filesystem::path& path, std::span<const RankedList> lists) {
  const auto text = format_results_csv(lists);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

std::vector<RankedList> parse_results_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != "scene_id,rank,object_id,score") {
    throw Error(ErrorCode::ParseError, "results line 1: expected header scene_id,rank,object_id,score");
  }

  std::map<std::string, std::vector<std::pair<std::size_t, RankedEntry>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    const auto where = fmt::format("results line {}", line_no);
    if (fields.size() != 4) throw Error(ErrorCode::ParseError, where + ": expected 4 fields");
    std::size_t rank = 0;
    const auto& rs = fields[1];
    if (auto [p, ec] = std::from_chars(rs.data(), rs.data() + rs.size(), rank); ec != std::errc{} || p != rs.data() + rs.size() || rank == 0) {
      throw Error(ErrorCode::ParseError, where + ": bad rank '" + rs + "'");
    }
    double score = 0.0;
    try {
      std::size_t used = 0;
      score = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, where + ": bad score '" + fields[3] + "'");
    }
    if (fields[0].empty() || fields[2].empty()) throw Error(ErrorCode::ParseError, where + ": empty id");
    rows[fields[0]].push_back({rank, {fields[2], score}});
  }

  std::vector<RankedList> out;
  for (auto& [scene, entries] : rows) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    RankedList list{scene, Strategy::TextOnly, {}};
    std::set<std::string> seen;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].first != i + 1) {
        throw Error(ErrorCode::ParseError, "results for " + scene + ": ranks are not dense from 1");
      }
      if (!seen.insert(entries[i].second.object_id).second) {
        throw Error(ErrorCode::ParseError, "results for " + scene + ": duplicate object " + entries[i].second.object_id);
      }
      list.entries.push_back(std::move(entries[i].second));
    }
    out.push_back(std::move(list));
  }
  return out;
}

std::vector<RankedList> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_results_csv(buf.str());
}

}  // namespace samurai
