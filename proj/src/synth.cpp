#include "samurai/synth.hpp"

#include "samurai/mask.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

namespace fs = std::filesystem;

namespace samurai {
namespace {

using Rng = std::mt19937_64;

Eigen::VectorXf random_direction(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
    if (v.squaredNorm() > 1e-12) return normalize(v).cast<float>();
  }
}

Eigen::VectorXf perturb(const Eigen::VectorXf& v, double magnitude, Rng& rng) {
  const Eigen::VectorXd u = random_direction(rng, static_cast<std::size_t>(v.size())).cast<double>();
  return normalize((v.cast<double>() + magnitude * u).eval()).cast<float>();
}

// Draws unit vectors whose pairwise cosine stays at or below `max_cosine`.
std::vector<Eigen::VectorXf> spread_vectors(std::size_t count, std::size_t dim, double max_cosine, Rng& rng,
                                            const char* what) {
  std::vector<Eigen::VectorXf> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    int tries = 0;
    for (;;) {
      if (++tries > kSynthRetries) {
        throw Error(ErrorCode::InfeasibleMargin,
                    fmt::format("could not place {} vector {} of {} in dimension {} with cosine <= {:.4f}", what,
                                n + 1, count, dim, max_cosine));
      }
      auto v = random_direction(rng, dim);
      const bool ok = std::all_of(out.begin(), out.end(),
                                  [&](const Eigen::VectorXf& w) { return cosine(v, w) <= max_cosine; });
      if (ok) {
        out.push_back(std::move(v));
        break;
      }
    }
  }
  return out;
}

std::string padded_id(const char* prefix, std::size_t index, std::size_t count) {
  const auto digits = std::max<std::size_t>(fmt::format("{}", count > 0 ? count - 1 : 0).size(), 3);
  return fmt::format("{}_{:0{}}", prefix, index, digits);
}

// Position of `id` in a (score desc, id asc) ordering of `scores`.
std::size_t rank_of(const std::vector<std::pair<std::string, float>>& scores, const std::string& id) {
  float own = 0.0f;
  for (const auto& [oid, s] : scores) {
    if (oid == id) own = s;
  }
  std::size_t rank = 1;
  for (const auto& [oid, s] : scores) {
    if (oid != id && (s > own || (s == own && oid < id))) ++rank;
  }
  return rank;
}

}  // namespace

SynthDataset synthesize(const SynthConfig& config) {
  const std::size_t decoys = config.text_decoys ? config.decoys_per_scene * config.scenes : 0;
  if (config.scenes < 1) throw Error(ErrorCode::InvalidArgument, "synth needs at least one scene");
  if (config.dim < 2) throw Error(ErrorCode::InvalidArgument, "synth needs dimension >= 2");
  if (config.objects < config.scenes + decoys) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("synth needs at least {} objects ({} scenes + {} decoys)", config.scenes + decoys,
                            config.scenes, decoys));
  }
  if (!(config.noise >= 0.0 && config.noise < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "synth noise must be in [0, 0.5)");
  }
  if (config.text_decoys && config.decoys_per_scene < 1) {
    throw Error(ErrorCode::InvalidArgument, "text decoys need decoys_per_scene >= 1");
  }

  Rng rng(config.seed);
  const double eps = config.noise;
  const double max_cosine = 1.0 - 2.0 * eps - kSynthMargin;
  const std::size_t regular = config.objects - decoys;

  // Object ids are shuffled so decoys are not recognizable by name.
  std::vector<std::size_t> id_of_slot(config.objects);
  std::iota(id_of_slot.begin(), id_of_slot.end(), 0);
  std::shuffle(id_of_slot.begin(), id_of_slot.end(), rng);
  std::vector<std::string> object_ids(config.objects);
  for (std::size_t s = 0; s < config.objects; ++s) object_ids[s] = padded_id("obj", id_of_slot[s], config.objects);

  std::vector<Eigen::VectorXf> rgb = spread_vectors(regular, config.dim, max_cosine, rng, "rgb");
  std::vector<Eigen::VectorXf> sil = spread_vectors(regular, config.dim, max_cosine, rng, "silhouette");

  std::vector<std::size_t> target_slot(regular);
  std::iota(target_slot.begin(), target_slot.end(), 0);
  std::shuffle(target_slot.begin(), target_slot.end(), rng);
  target_slot.resize(config.scenes);

  std::vector<std::string> scene_ids(config.scenes);
  std::vector<Eigen::VectorXf> q_text(config.scenes);
  std::vector<Eigen::VectorXf> q_shape(config.scenes);
  for (std::size_t i = 0; i < config.scenes; ++i) {
    scene_ids[i] = padded_id("scene", i, config.scenes);
    q_text[i] = perturb(rgb[target_slot[i]], eps, rng);
    q_shape[i] = perturb(sil[target_slot[i]], eps, rng);
  }

  SynthDataset data;
  const float slack = static_cast<float>(kSynthMargin);
  if (config.text_decoys) {
    std::vector<float> target_text(config.scenes);
    std::vector<float> target_shape(config.scenes);
    for (std::size_t i = 0; i < config.scenes; ++i) {
      target_text[i] = cosine(q_text[i], rgb[target_slot[i]]);
      target_shape[i] = cosine(q_shape[i], sil[target_slot[i]]);
    }
    const double nudge = std::max(eps, 1e-3) * 0.1;
    std::size_t slot = regular;
    for (std::size_t i = 0; i < config.scenes; ++i) {
      for (std::size_t d = 0; d < config.decoys_per_scene; ++d, ++slot) {
        int tries = 0;
        for (;;) {
          if (++tries > kSynthRetries) {
            throw Error(ErrorCode::InfeasibleMargin, fmt::format("could not place text decoy for {}", scene_ids[i]));
          }
          auto drgb = perturb(q_text[i], nudge, rng);
          auto dsil = random_direction(rng, config.dim);
          bool ok = cosine(drgb, q_text[i]) > target_text[i] + slack &&
                    cosine(dsil, q_shape[i]) < target_shape[i] - slack;
          for (std::size_t j = 0; ok && j < config.scenes; ++j) {
            if (j == i) continue;
            ok = cosine(drgb, q_text[j]) < target_text[j] - slack && cosine(dsil, q_shape[j]) < target_shape[j] - slack;
          }
          if (ok) {
            rgb.push_back(std::move(drgb));
            sil.push_back(std::move(dsil));
            data.decoys[scene_ids[i]].push_back(object_ids[slot]);
            break;
          }
        }
      }
    }
  }

  // Exhaustive check of the planted ranks.
  for (std::size_t i = 0; i < config.scenes; ++i) {
    std::vector<std::pair<std::string, float>> text_scores;
    std::vector<std::pair<std::string, float>> shape_scores;
    for (std::size_t s = 0; s < config.objects; ++s) {
      text_scores.emplace_back(object_ids[s], cosine(q_text[i], rgb[s]));
      shape_scores.emplace_back(object_ids[s], cosine(q_shape[i], sil[s]));
    }
    const auto& target = object_ids[target_slot[i]];
    const std::size_t want_text = config.text_decoys ? config.decoys_per_scene + 1 : 1;
    if (rank_of(text_scores, target) != want_text || rank_of(shape_scores, target) != 1) {
      throw Error(ErrorCode::InfeasibleMargin, "planted ranks violated for " + scene_ids[i]);
    }
    data.truth.emplace(scene_ids[i], target);
  }

  data.header.encoder = "synthetic-planted";
  data.header.silhouette = std::string(kSilhouettePolarity);
  for (const Modality m : kAllModalities) data.header.dims[m] = config.dim;

  std::vector<std::size_t> by_id(config.objects);
  std::iota(by_id.begin(), by_id.end(), 0);
  std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return object_ids[a] < object_ids[b]; });
  for (const std::size_t s : by_id) data.records.push_back({object_ids[s], Modality::ObjectRgb, rgb[s]});
  for (const std::size_t s : by_id) data.records.push_back({object_ids[s], Modality::ObjectSilhouette, sil[s]});
  for (std::size_t i = 0; i < config.scenes; ++i) data.records.push_back({scene_ids[i], Modality::QueryText, q_text[i]});
  for (std::size_t i = 0; i < config.scenes; ++i) data.records.push_back({scene_ids[i], Modality::QueryShape, q_shape[i]});

  for (std::size_t i = 0; i < config.scenes; ++i) {
    data.manifest.scenes.push_back({scene_ids[i], {}, {}, "synthetic query for " + scene_ids[i]});
  }
  for (const std::size_t s : by_id) data.manifest.objects.push_back({object_ids[s], {}});
  return data;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

Rgb background(Rng& rng) {
  std::uniform_int_distribution<int> c(0, 120);
  return {static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng)), static_cast<std::uint8_t>(c(rng))};
}

// A masked scene: one main key-colored blob, a detached fragment inside the
// padding band, and a speck in the corner that the largest-component step
// discards.
RgbImage scene_raster(Rng& rng) {
  constexpr Eigen::Index kSize = 48;
  RgbImage img(kSize, kSize);
  for (Eigen::Index y = 0; y < kSize; ++y) {
    for (Eigen::Index x = 0; x < kSize; ++x) img.set(y, x, background(rng));
  }
  const Rgb key{kQueryMaskKey.r, kQueryMaskKey.g, kQueryMaskKey.b};
  std::uniform_int_distribution<Eigen::Index> origin(12, 20);
  std::uniform_int_distribution<Eigen::Index> extent(8, 12);
  const Eigen::Index x0 = origin(rng), y0 = origin(rng), w = extent(rng), h = extent(rng);
  img.fill_rect(y0, x0, h, w, key);
  img.fill_rect(y0, x0 + w + 3, 2, 2, key);
  img.set(0, 0, key);
  return img;
}

RgbImage object_raster(Rng& rng) {
  RgbImage img(32, 32, background(rng));
  std::uniform_int_distribution<Eigen::Index> corner(2, 12);
  std::uniform_int_distribution<Eigen::Index> extent(6, 16);
  img.fill_rect(corner(rng), corner(rng), extent(rng), extent(rng), background(rng));
  return img;
}

}  // namespace

void write_synth(const fs::path& dir, const SynthDataset& data, const SynthConfig& config) {
  fs::create_directories(dir);
  write_embeddings(dir / "embeddings.jsonl", data.header, data.records);
  write_text(dir / "truth.csv", format_truth_csv(data.truth));

  Manifest manifest = data.manifest;
  if (config.rasters) {
    Rng rng(config.seed ^ 0x5eedf00dULL);
    for (auto& scene : manifest.scenes) {
      const auto sdir = dir / "scenes" / scene.scene_id;
      fs::create_directories(sdir);
      scene.masked_image_path = sdir / "masked.png";
      scene.query_path = sdir / "query.txt";
      write_png(scene.masked_image_path, scene_raster(rng));
      write_text(scene.query_path, scene.query_text + "\n");
    }
    for (auto& object : manifest.objects) {
      const auto odir = dir / "objects" / object.object_id;
      fs::create_directories(odir);
      object.rgb_image_path = odir / "image.png";
      write_png(object.rgb_image_path, object_raster(rng));
    }
  }
  write_manifest(dir / "manifest.json", manifest);
}

}  // namespace samurai
