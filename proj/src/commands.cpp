#include "samurai/commands.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <fstream>

namespace fs = std::filesystem;

namespace samurai {
namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

}  // namespace

std::string preprocess_record_json(const PreprocessResult& r, const PreprocessConfig& config) {
  nlohmann::ordered_json j;
  j["scene_id"] = r.query.scene_id;
  j["mask_color"] = {config.key.r, config.key.g, config.key.b};
  j["tolerance"] = config.key.tolerance;
  j["padding"] = config.padding;
  j["connectivity"] = static_cast<int>(config.connectivity);
  j["bbox"] = {{"x0", r.bbox.x0}, {"y0", r.bbox.y0}, {"x1", r.bbox.x1}, {"y1", r.bbox.y1}};
  j["component_sizes"] = r.component_sizes;
  j["mask_popcount"] = r.mask_popcount;
  j["largest_popcount"] = r.largest_popcount;
  j["refined_popcount"] = r.refined_popcount;
  return j.dump(2) + "\n";
}

PreprocessSummary cmd_preprocess(const PreprocessConfig& config) {
  const Manifest manifest = scan_dataset(config.root, config.scan);
  fs::create_directories(config.out);

  parallel_for(manifest.scenes.size(), config.workers, [&](std::size_t i) {
    const auto& entry = manifest.scenes[i];
    try {
      const auto scene = load_scene(entry);
      const auto result = preprocess_scene(entry.scene_id, scene.raster, config.key, config.padding,
                                           config.connectivity);
      const auto dir = config.out / entry.scene_id;
      fs::create_directories(dir);
      write_png(dir / "crop.png", result.query.crop_rgb);
      write_png(dir / "silhouette.png", render_silhouette(result.query.refined_mask));
      write_text(dir / "preprocess.json", preprocess_record_json(result, config));
    } catch (const Error& e) {
      throw Error(e.code(), "scene " + entry.scene_id + ": " + e.what());
    }
  });

  write_manifest(config.out / "manifest.json", manifest);
  spdlog::info("preprocessed {} scenes into {}", manifest.scenes.size(), config.out.string());
  return {manifest.scenes.size()};
}

RetrieveSummary cmd_retrieve(const RetrieveConfig& config) {
  const EmbeddingStore store = load_embeddings(config.embeddings);
  const Manifest manifest = open_manifest(config.manifest, config.scan);
  const RetrievalParams params = clamp_params(config.params, manifest.objects.size());
  spdlog::info("retrieve strategy={} k={} m={} weights={},{},{},{} scenes={} objects={}",
               to_string(config.strategy), params.k, params.m, params.weights.text, params.weights.shape,
               params.weights.hybrid_shape, params.weights.hybrid_text, manifest.scenes.size(),
               manifest.objects.size());

  const auto lists = retrieve_all(manifest, store, params, config.strategy, config.workers);
  write_results_csv(config.out, lists);
  return {lists.size(), params};
}

EvalReport cmd_evaluate(const EvaluateConfig& config) {
  const auto results = read_results_csv(config.results);
  const auto truth = read_truth_csv(config.truth);
  const auto report = evaluate(results, truth, config.lenient);
  write_text(config.out, report_to_json(report));
  return report;
}

SynthDataset cmd_synth(const SynthCommandConfig& config) {
  auto data = synthesize(config.synth);
  write_synth(config.out, data, config.synth);
  spdlog::info("synthesized {} scenes, {} objects, dim {} into {}", config.synth.scenes, config.synth.objects,
               config.synth.dim, config.out.string());
  return data;
}

}  // namespace samurai
