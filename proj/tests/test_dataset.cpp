#include "samurai/dataset.hpp"
#include "samurai/error.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace samurai;
using samurai::testing::TempDir;
using samurai::testing::write_file;

namespace fs = std::filesystem;

namespace {

void add_scene(const fs::path& root, const std::string& id, const std::string& prompt = "a red wooden chair\n") {
  const auto dir = root / "scenes" / id;
  fs::create_directories(dir);
  RgbImage img(4, 6, {135, 206, 235});
  write_png(dir / "masked.png", img);
  write_file(dir / "query.txt", prompt);
}

void add_object(const fs::path& root, const std::string& id) {
  const auto dir = root / "objects" / id;
  fs::create_directories(dir);
  write_png(dir / "image.png", RgbImage(3, 3, {1, 2, 3}));
  write_file(dir / "model.obj", "v 0 0 0\n");
}

ErrorCode scan_code(const fs::path& root, ScanOptions options = {}) {
  try {
    scan_dataset(root, options);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected scan failure";
  return ErrorCode::Io;
}

}  // namespace

TEST(PngIo, RoundTrip) {
  TempDir tmp("png");
  RgbImage img(5, 7);
  for (Eigen::Index y = 0; y < 5; ++y) {
    for (Eigen::Index x = 0; x < 7; ++x) {
      img.set(y, x, {static_cast<std::uint8_t>(y * 40), static_cast<std::uint8_t>(x * 30), 200});
    }
  }
  write_png(tmp / "a.png", img);
  EXPECT_TRUE(read_png(tmp / "a.png") == img);
  const auto info = probe_png(tmp / "a.png");
  EXPECT_EQ(info.width, 7u);
  EXPECT_EQ(info.height, 5u);
}

TEST(PngIo, TruncatedFileIsDecodeError) {
  TempDir tmp("png");
  write_png(tmp / "a.png", RgbImage(32, 32, {9, 9, 9}));
  const auto bytes = samurai::testing::read_file(tmp / "a.png");
  write_file(tmp / "cut.png", bytes.substr(0, bytes.size() / 2));
  try {
    read_png(tmp / "cut.png");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DecodeError);
  }
  write_file(tmp / "junk.png", "not a png");
  EXPECT_THROW(probe_png(tmp / "junk.png"), Error);
}

TEST(ScanDataset, MinimalLayout) {
  TempDir tmp("ds");
  add_scene(tmp.path(), "s1");
  add_object(tmp.path(), "o1");
  const auto m = scan_dataset(tmp.path());
  EXPECT_EQ(m.scene_ids(), (std::vector<std::string>{"s1"}));
  EXPECT_EQ(m.object_ids(), (std::vector<std::string>{"o1"}));
  EXPECT_EQ(m.scenes[0].query_text, "a red wooden chair");
}

TEST(ScanDataset, FiftyScenesSortedById) {
  TempDir tmp("ds");
  for (int i = 49; i >= 0; --i) add_scene(tmp.path(), "scene_" + std::to_string(100 + i));
  for (const char* o : {"zz", "aa", "mm"}) add_object(tmp.path(), o);
  const auto m = scan_dataset(tmp.path());
  ASSERT_EQ(m.scenes.size(), 50u);
  EXPECT_TRUE(std::is_sorted(m.scenes.begin(), m.scenes.end(),
                             [](const auto& a, const auto& b) { return a.scene_id < b.scene_id; }));
  EXPECT_EQ(m.object_ids(), (std::vector<std::string>{"aa", "mm", "zz"}));
  EXPECT_EQ(manifest_to_json(m), manifest_to_json(scan_dataset(tmp.path())));
}

TEST(ScanDataset, MissingDirectories) {
  TempDir tmp("ds");
  add_scene(tmp.path(), "s1");
  try {
    scan_dataset(tmp.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingRoot);
    EXPECT_NE(std::string(e.what()).find("objects"), std::string::npos);
  }
  EXPECT_EQ(scan_code(tmp / "nope"), ErrorCode::MissingRoot);
}

TEST(ScanDataset, EmptyDataset) {
  TempDir tmp("ds");
  fs::create_directories(tmp / "scenes");
  fs::create_directories(tmp / "objects");
  EXPECT_EQ(scan_code(tmp.path()), ErrorCode::EmptyDataset);
}

TEST(ScanDataset, MalformedEntriesStrictAndLenient) {
  TempDir tmp("ds");
  add_scene(tmp.path(), "good");
  add_scene(tmp.path(), "blank", "   \n");
  fs::create_directories(tmp / "scenes" / "noimage");
  write_file(tmp / "scenes" / "noimage" / "query.txt", "x");
  add_object(tmp.path(), "o1");
  fs::create_directories(tmp / "objects" / "empty");

  try {
    scan_dataset(tmp.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedEntry);
    const std::string what = e.what();
    EXPECT_NE(what.find("3 malformed"), std::string::npos) << what;
    EXPECT_NE(what.find("blank"), std::string::npos);
    EXPECT_NE(what.find("noimage"), std::string::npos);
    EXPECT_NE(what.find("empty"), std::string::npos);
  }

  ScanOptions lenient;
  lenient.lenient = true;
  const auto m = scan_dataset(tmp.path(), lenient);
  EXPECT_EQ(m.scene_ids(), (std::vector<std::string>{"good"}));
  EXPECT_EQ(m.object_ids(), (std::vector<std::string>{"o1"}));
}

TEST(ScanDataset, ImageNameOverride) {
  TempDir tmp("ds");
  add_scene(tmp.path(), "s1");
  add_object(tmp.path(), "o1");
  fs::rename(tmp / "objects" / "o1" / "image.png", tmp / "objects" / "o1" / "render.png");
  EXPECT_EQ(scan_code(tmp.path()), ErrorCode::MalformedEntry);
  ScanOptions options;
  options.object_image_name = "render.png";
  EXPECT_EQ(scan_dataset(tmp.path(), options).objects.size(), 1u);
}

TEST(LoadScene, ReturnsRasterAndPrompt) {
  TempDir tmp("ds");
  add_scene(tmp.path(), "s1");
  add_object(tmp.path(), "o1");
  const auto m = scan_dataset(tmp.path());
  const auto scene = load_scene(m.scenes[0]);
  EXPECT_EQ(scene.raster.width(), 6);
  EXPECT_EQ(scene.raster.height(), 4);
  EXPECT_EQ(scene.query_text, "a red wooden chair");
}

TEST(LoadScene, TruncatedPngAndBadUtf8) {
  TempDir tmp("ds");
  add_scene(tmp.path(), "s1");
  SceneEntry entry{"s1", tmp / "scenes" / "s1" / "masked.png", tmp / "scenes" / "s1" / "query.txt", {}};
  const auto bytes = samurai::testing::read_file(entry.masked_image_path);
  write_file(entry.masked_image_path, bytes.substr(0, bytes.size() - 20));
  try {
    load_scene(entry);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DecodeError);
  }

  write_file(tmp / "bad.txt", std::string("caf\xc3", 4));
  try {
    read_query_text(tmp / "bad.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Utf8Error);
  }
}

TEST(Utf8, Validation) {
  EXPECT_TRUE(is_valid_utf8("plain"));
  EXPECT_TRUE(is_valid_utf8("caf\xc3\xa9 \xe2\x82\xac \xf0\x9f\x98\x80"));
  EXPECT_FALSE(is_valid_utf8("\xc0\xaf"));          // overlong
  EXPECT_FALSE(is_valid_utf8("\xed\xa0\x80"));      // surrogate
  EXPECT_FALSE(is_valid_utf8("\xff"));
  EXPECT_FALSE(is_valid_utf8("\xe2\x82"));          // truncated
}

TEST(Manifest, JsonRoundTripAndOpen) {
  TempDir tmp("ds");
  add_scene(tmp.path(), "s2");
  add_scene(tmp.path(), "s1");
  add_object(tmp.path(), "o1");
  const auto m = scan_dataset(tmp.path());
  EXPECT_EQ(manifest_from_json(manifest_to_json(m)), m);

  // Without manifest.json the directory is scanned; with it, the file wins.
  EXPECT_EQ(open_manifest(tmp.path()), m);
  Manifest other = m;
  other.scenes.pop_back();
  write_manifest(tmp / "manifest.json", other);
  EXPECT_EQ(open_manifest(tmp.path()), other);

  EXPECT_THROW(manifest_from_json(R"({"scenes": [{"scene_id": "a"}, {"scene_id": "a"}], "objects": [{"object_id": "o"}]})"),
               Error);
  EXPECT_THROW(manifest_from_json("{}"), Error);
}
