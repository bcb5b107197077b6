#include "cpercept/figure_cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpercept/calibration_store.hpp"
#include "cpercept/compositor.hpp"
#include "cpercept/image_io.hpp"
#include "oracles.hpp"

namespace cpercept {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("cpercept_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, FiguresWritesPanelsMontageAndManifest) {
  const auto r = run({"figures", "--s", "0.1,0.5", "--size", "60x40", "--out", path("fig")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* name : {"fig_s010_white_color.png", "fig_s010_bands10_perception.png",
                           "fig_s050_continuous_perception.png", "fig_s050_montage.png", "MANIFEST.sha256"}) {
    EXPECT_TRUE(fs::exists(dir_ / "fig" / name)) << name;
  }
  const auto montage_img = read_png(dir_ / "fig" / "fig_s050_montage.png");
  EXPECT_EQ(montage_img.width(), 3 * 60 + 16);
  EXPECT_EQ(montage_img.height(), 2 * 40 + 8);

  std::istringstream manifest(slurp(dir_ / "fig" / "MANIFEST.sha256"));
  std::string line;
  int entries = 0;
  while (std::getline(manifest, line)) {
    if (line.starts_with("#")) continue;
    EXPECT_EQ(line.find("  "), 64u);
    ++entries;
  }
  EXPECT_EQ(entries, 14);
}

TEST_F(CliTest, FiguresAreDeterministic) {
  ASSERT_EQ(run({"figures", "--s", "0.2,0.7", "--size", "50x30", "--out", path("a")}).code, kExitOk);
  ASSERT_EQ(run({"figures", "--s", "0.2,0.7", "--size", "50x30", "--out", path("b")}).code, kExitOk);
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / entry.path().filename())) << entry.path().filename();
  }
}

TEST_F(CliTest, FullSizeBandsAreIdenticalAcrossBackgrounds) {
  ASSERT_EQ(run({"figures", "--s", "1.0", "--size", "40x30", "--out", path("f")}).code, kExitOk);
  const auto reference = read_png(dir_ / "f" / "fig_s100_white_perception.png");
  for (const char* bg : {"bands10", "continuous"}) {
    EXPECT_EQ(read_png(dir_ / "f" / (std::string("fig_s100_") + bg + "_perception.png")), reference);
  }
}

TEST_F(CliTest, PngPixelsMatchTheBlend) {
  ASSERT_EQ(run({"figures", "--s", "0.3", "--lp", "0.2", "--size", "64x48", "--out", path("f")}).code, kExitOk);
  const auto img = read_png(dir_ / "f" / "fig_s030_continuous_perception.png");
  const double y = oracle::power_opacity({0.2, 0.25, 1.0}, 0.3);
  const auto band = band_rows(0.3, 48);
  for (int x = 0; x < 64; ++x) {
    const double expected = y * 0.2 + (1.0 - y) * double(x) / 63.0;
    ASSERT_LE(std::abs(img.at(x, band.top) - expected), 0.5 / 255.0 + 1e-12) << x;
  }
}

TEST_F(CliTest, PanelCommand) {
  const auto r = run({"panel", "--s", "0.25", "--bg", "bands", "--mode", "color", "--size", "30x20", "--out",
                      path("p.pgm")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto img = read_pgm(dir_ / "p.pgm");
  EXPECT_EQ(img.width(), 30);
  EXPECT_NEAR(img.at(5, 10), 0.5, 0.5 / 255.0);
  EXPECT_EQ(run({"panel", "--bg", "photo", "--out", path("q.png")}).code, kExitError);
}

TEST_F(CliTest, PhotoOverlay) {
  write_png(dir_ / "photo.png", ImageBuffer(16, 12, 0.8));
  const auto r = run({"figures", "--s", "0.5", "--size", "32x24", "--photo", path("photo.png"), "--model", "affine",
                      "--out", path("f")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto img = read_png(dir_ / "f" / "fig_s050_photo_overlay.png");
  const auto band = band_rows(0.5, 24);
  EXPECT_NEAR(img.at(3, band.top + band.height / 2), 0.5, 0.5 / 255.0);
  const double y = 0.6 * 0.5 + 1.0 * 0.5;
  EXPECT_NEAR(img.at(3, band.top), y * 0.5 + (1.0 - y) * 0.8, 0.5 / 255.0 + 1e-12);
  EXPECT_NEAR(img.at(3, 0), 0.8, 0.5 / 255.0);
}

TEST_F(CliTest, CurveIsExact) {
  const auto r = run({"curve", "--samples", "11"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "s,y");
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto comma = line.find(',');
    const double s = std::stod(line.substr(0, comma));
    const double y = std::stod(line.substr(comma + 1));
    EXPECT_EQ(s, double(rows) / 10.0);
    EXPECT_NEAR(y, oracle::power_opacity({0.2, 0.25, 1.0}, s), 1e-15);
    ++rows;
  }
  EXPECT_EQ(rows, 11);
  const auto affine = run({"curve", "--affine", "0.5,0.9", "--samples", "3"});
  EXPECT_EQ(affine.out, "s,y\n0,0.5\n0.5,0.69999999999999996\n1,0.90000000000000002\n");
}

TEST_F(CliTest, FitWritesJson) {
  const auto r = run({"fit", "--out", path("fit.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir_ / "fit.json"));
  EXPECT_EQ(j["model"]["kind"], "affine");
  EXPECT_NEAR(j["model"]["a0"].get<double>(), 0.55207815, 1e-6);
  EXPECT_NEAR(j["model"]["a1"].get<double>(), 0.96345769, 1e-6);
  EXPECT_EQ(j["objective"], "minimax");
  const auto lsq = nlohmann::json::parse(run({"fit", "--objective", "lsq"}).out);
  EXPECT_NEAR(lsq["model"]["a0"].get<double>(), 0.5738338741942844, 1e-10);
  EXPECT_EQ(run({"fit", "--objective", "l1"}).code, kExitError);
}

TEST_F(CliTest, ValidateSessionExitCodes) {
  const auto good = CalibrationRecord{"p1", {}, default_power_model(), 0.1, 0.5, "white", 1, "1"};
  auto bad = good;
  bad.timestamp = 2;
  bad.s = 3.0;
  std::ofstream(dir_ / "good.jsonl") << "{\"schema\":1}\n" << record_to_json(good).dump() << "\n";
  std::ofstream(dir_ / "bad.jsonl") << "{\"schema\":1}\n"
                                    << record_to_json(good).dump() << "\n"
                                    << record_to_json(bad).dump() << "\n";
  std::ofstream(dir_ / "broken.jsonl") << "{\"schema\":1}\n{oops\n";

  EXPECT_EQ(run({"validate-session", path("good.jsonl")}).code, kExitOk);
  const auto r = run({"validate-session", path("bad.jsonl")});
  EXPECT_EQ(r.code, kExitFindings);
  EXPECT_NE(r.out.find("bad.jsonl:3:"), std::string::npos) << r.out;
  EXPECT_EQ(run({"validate-session", path("broken.jsonl")}).code, kExitError);
  EXPECT_EQ(run({"validate-session", path("missing.jsonl")}).code, kExitError);
}

TEST_F(CliTest, Aggregate) {
  auto store = CalibrationStore::open(dir_ / "store.jsonl");
  store.append(CalibrationRecord{"p1", {"site:a"}, default_power_model(), 0.1, 0.5, "white", 1, "1"});
  store.append(CalibrationRecord{"p2", {"site:b"}, default_affine_model(), 0.1, 0.5, "white", 2, "1"});
  const auto r = run({"aggregate", path("store.jsonl"), "--group-by", "site"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["groups"].size(), 2u);
  EXPECT_GT(j["disagreement"].get<double>(), 0.0);
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  std::ofstream(dir_ / "cfg.toml") << "s = [0.4]\nsize = \"20x10\"\nlp = 0.9\nbands = 4\nout = \""
                                   << path("from_config") << "\"\n";
  ASSERT_EQ(run({"figures", "--config", path("cfg.toml"), "--lp", "0.1"}).code, kExitOk);
  const auto img = read_png(dir_ / "from_config" / "fig_s040_white_color.png");
  EXPECT_EQ(img.width(), 20);
  EXPECT_NEAR(img.at(0, 5), 0.1, 0.5 / 255.0);
  EXPECT_TRUE(fs::exists(dir_ / "from_config" / "fig_s040_bands4_perception.png"));

  std::ofstream(dir_ / "bad.toml") << "s = [0.4\n";
  EXPECT_EQ(run({"figures", "--config", path("bad.toml")}).code, kExitError);
}

TEST_F(CliTest, BadArguments) {
  EXPECT_EQ(run({}).code, kExitError);
  EXPECT_EQ(run({"figures", "--s", "0"}).code, kExitError);
  EXPECT_EQ(run({"figures", "--s", "abc"}).code, kExitError);
  EXPECT_EQ(run({"figures", "--size", "10by10"}).code, kExitError);
  EXPECT_EQ(run({"figures", "--bezier", "0.2,-1,1", "--s", "0.5", "--out", path("x")}).code, kExitError);
  EXPECT_EQ(run({"curve", "--model", "cubic"}).code, kExitError);
  EXPECT_EQ(run({"no-such-command"}).code, kExitError);
  const auto r = run({"fit", "--smin", "0.9", "--smax", "0.1"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_TRUE(r.err.starts_with("error: ")) << r.err;
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

}  // namespace
}  // namespace cpercept
