// samurai: masked-scene preprocessing, text/shape retrieval, evaluation and
// synthetic planted datasets.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal error.

#include "samurai/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

std::vector<int> parse_ints(const std::string& text, std::size_t count, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw samurai::Error(samurai::ErrorCode::InvalidArgument, fmt::format("{}: bad integer '{}'", flag, part));
    }
  }
  if (out.size() != count) {
    throw samurai::Error(samurai::ErrorCode::InvalidArgument,
                         fmt::format("{} expects {} comma-separated integers", flag, count));
  }
  return out;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("samurai");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("SAMURAI_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Shape-aware multimodal retrieval engine"};
  app.require_subcommand(1);

  // preprocess
  samurai::PreprocessConfig pre;
  std::string mask_color = "135,206,235";
  int connectivity = 8;
  auto* preprocess = app.add_subcommand("preprocess", "Key, clean and crop every scene mask");
  preprocess->add_option("--root", pre.root, "Dataset root with scenes/ and objects/")->required();
  preprocess->add_option("--out", pre.out, "Artifact output directory")->required();
  preprocess->add_option("--mask-color", mask_color, "Mask key color R,G,B")->capture_default_str();
  preprocess->add_option("--pad", pre.padding, "Bounding-box padding in pixels")->capture_default_str()->check(CLI::NonNegativeNumber);
  preprocess->add_option("--connectivity", connectivity, "Pixel adjacency, 4 or 8")->capture_default_str()->check(CLI::IsMember({4, 8}));
  preprocess->add_option("--tolerance", pre.key.tolerance, "Per-channel key tolerance")->capture_default_str()->check(CLI::Range(0, 255));
  preprocess->add_option("--scene-image-name", pre.scan.scene_image_name)->capture_default_str();
  preprocess->add_option("--object-image-name", pre.scan.object_image_name)->capture_default_str();
  preprocess->add_flag("--lenient", pre.scan.lenient, "Skip malformed dataset entries");
  preprocess->add_option("--workers", pre.workers)->check(CLI::PositiveNumber);

  // retrieve
  samurai::RetrieveConfig ret;
  std::string strategy;
  std::string weights = "1,1,2,2";
  auto* retrieve = app.add_subcommand("retrieve", "Rank catalog objects for every scene");
  retrieve->add_option("--embeddings", ret.embeddings, "Embedding file")->required()->check(CLI::ExistingFile);
  retrieve->add_option("--manifest", ret.manifest, "Directory holding manifest.json, or a dataset root")->required();
  retrieve->add_option("--strategy", strategy)->required()->check(CLI::IsMember({"text", "shape", "ts-shape", "ts-text", "vote"}));
  retrieve->add_option("--k", ret.params.k, "Final list depth")->capture_default_str();
  retrieve->add_option("--m", ret.params.m, "Hybrid text-filter depth")->capture_default_str();
  retrieve->add_option("--weights", weights, "Vote weights text,shape,ts-shape,ts-text")->capture_default_str();
  retrieve->add_option("--out", ret.out, "Results CSV")->required();
  retrieve->add_option("--scene-image-name", ret.scan.scene_image_name)->capture_default_str();
  retrieve->add_option("--object-image-name", ret.scan.object_image_name)->capture_default_str();
  retrieve->add_flag("--lenient", ret.scan.lenient, "Skip malformed dataset entries");
  retrieve->add_option("--workers", ret.workers)->check(CLI::PositiveNumber);

  // evaluate
  samurai::EvaluateConfig ev;
  auto* evaluate = app.add_subcommand("evaluate", "Recall@1/5/10 and MRR of a results CSV");
  evaluate->add_option("--results", ev.results)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", ev.truth)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", ev.out, "Report JSON")->required();
  evaluate->add_flag("--lenient", ev.lenient, "Count scenes without results as misses");

  // synth
  samurai::SynthCommandConfig syn;
  std::string adversarial;
  auto* synth = app.add_subcommand("synth", "Generate a planted-ground-truth dataset");
  synth->add_option("--scenes", syn.synth.scenes)->required()->check(CLI::PositiveNumber);
  synth->add_option("--objects", syn.synth.objects)->required()->check(CLI::PositiveNumber);
  synth->add_option("--dim", syn.synth.dim)->required();
  synth->add_option("--seed", syn.synth.seed)->required();
  synth->add_option("--noise", syn.synth.noise, "Query perturbation norm")->capture_default_str();
  synth->add_option("--adversarial", adversarial)->check(CLI::IsMember({"text-decoys"}));
  synth->add_option("--decoys", syn.synth.decoys_per_scene, "Text decoys per scene")->capture_default_str();
  synth->add_flag("--rasters", syn.synth.rasters, "Also write PNG scenes and objects");
  synth->add_option("--out", syn.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*preprocess) {
      const auto rgb = parse_ints(mask_color, 3, "--mask-color");
      for (int c : rgb) {
        if (c < 0 || c > 255) throw samurai::Error(samurai::ErrorCode::InvalidArgument, "--mask-color channel out of range");
      }
      pre.key.r = static_cast<std::uint8_t>(rgb[0]);
      pre.key.g = static_cast<std::uint8_t>(rgb[1]);
      pre.key.b = static_cast<std::uint8_t>(rgb[2]);
      pre.connectivity = connectivity == 4 ? samurai::Connectivity::Four : samurai::Connectivity::Eight;
      const auto summary = samurai::cmd_preprocess(pre);
      std::cout << "preprocessed " << summary.scenes << " scenes\n";
    } else if (*retrieve) {
      ret.strategy = *samurai::parse_strategy(strategy);
      const auto w = parse_ints(weights, 4, "--weights");
      ret.params.weights = {w[0], w[1], w[2], w[3]};
      const auto summary = samurai::cmd_retrieve(ret);
      std::cout << "ranked " << summary.scenes << " scenes (k=" << summary.effective.k
                << ", m=" << summary.effective.m << ")\n";
    } else if (*evaluate) {
      const auto report = samurai::cmd_evaluate(ev);
      std::cout << fmt::format("queries={} R@1={:.4f} R@5={:.4f} R@10={:.4f} MRR={:.4f}\n", report.num_queries,
                               report.recall_at_1, report.recall_at_5, report.recall_at_10, report.mrr);
    } else if (*synth) {
      syn.synth.text_decoys = adversarial == "text-decoys";
      samurai::cmd_synth(syn);
      std::cout << "wrote " << syn.out.string() << "\n";
    }
  } catch (const samurai::Error& e) {
    spdlog::error("{}", e.what());
    return samurai::error_category(e.code()) == samurai::ErrorCategory::Config ? kExitConfig : kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("Io: {}", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    spdlog::critical("internal error: {}", e.what());
    return kExitInternal;
  }
  return 0;
}
