#include "cpercept/figure_cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "cpercept/background.hpp"
#include "cpercept/calibration_store.hpp"
#include "cpercept/compositor.hpp"
#include "cpercept/errors.hpp"
#include "cpercept/image_io.hpp"
#include "cpercept/opacity.hpp"
#include "json.hpp"
#include "toml.hpp"

namespace cpercept {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<double> kFigureSizes{0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string("cannot parse ") + what + " value \"" + item + "\"");
    }
  }
  if (values.empty()) throw ValidationError(std::string("empty ") + what + " list");
  return values;
}

std::pair<int, int> parse_size(const std::string& text) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || w < 1 || h < 1 || !in.eof()) {
    throw ValidationError("size must look like WIDTHxHEIGHT, got \"" + text + "\"");
  }
  return {w, h};
}

std::string sha256_hex(const void* data, std::size_t size) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data, size, digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

// Hash of "WxH\n" followed by the 8-bit raster; independent of the PNG encoder.
std::string raster_hash(const ImageBuffer& img) {
  const auto bytes = quantize(img);
  std::string blob = std::to_string(img.width()) + "x" + std::to_string(img.height()) + "\n";
  blob.append(bytes.begin(), bytes.end());
  return sha256_hex(blob.data(), blob.size());
}

std::string percent_tag(double s) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03ld", std::lround(s * 100.0));
  return buf;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Options shared by every command that needs an opacity model.
struct ModelOptions {
  std::string kind = "power";
  std::string bezier = "0.20,0.25,1.00";
  std::string affine = "0.6,1.0";
  CLI::Option* kind_opt = nullptr;
  CLI::Option* bezier_opt = nullptr;
  CLI::Option* affine_opt = nullptr;

  void attach(CLI::App& app) {
    kind_opt = app.add_option("--model", kind, "Opacity model: power or affine")
                   ->check(CLI::IsMember({"power", "affine"}))
                   ->capture_default_str();
    bezier_opt = app.add_option("--bezier", bezier, "Exponent Bezier coefficients, comma separated")
                     ->capture_default_str();
    affine_opt = app.add_option("--affine", affine, "Affine endpoints a0,a1")->capture_default_str();
  }

  // An explicit --affine without --model selects the affine model.
  OpacityModel build() const {
    const bool affine_chosen = kind == "affine" || (kind_opt->count() == 0 && affine_opt->count() > 0);
    if (affine_chosen) {
      const auto a = parse_list(affine, "affine");
      if (a.size() != 2) throw ValidationError("--affine takes exactly two values");
      return AffineOpacity{a[0], a[1]};
    }
    return PowerOpacity{BezierPolynomial(parse_list(bezier, "bezier"))};
  }
};

struct FiguresOptions {
  ModelOptions model;
  std::string s_list;
  double l_p = 0.5;
  bool swap_weights = false;
  std::string size = "900x600";
  std::string out = "figures";
  int bands = 10;
  bool flip = false;
  std::string band_levels = "endpoints";
  std::string config;
  std::string photo;
  double photo_sigma = 0.0;
  double edge_profile = 2.0;
};

// Fills every option the user did not pass explicitly from a TOML file.
void apply_config(const CLI::App& cmd, FiguresOptions& opt) {
  toml::table table;
  try {
    table = toml::parse_file(opt.config);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << opt.config << ": " << e.description() << " (line " << e.source().begin.line << ")";
    throw ValidationError(msg.str());
  }
  auto unset = [&cmd](const char* flag) { return cmd.get_option(flag)->count() == 0; };
  auto list_text = [&](const char* key) -> std::optional<std::string> {
    const auto* arr = table[key].as_array();
    if (!arr) return std::nullopt;
    std::string text;
    for (const auto& v : *arr) {
      const auto d = v.value<double>();
      if (!d) throw ValidationError(opt.config + ": \"" + key + "\" must be an array of numbers");
      text += (text.empty() ? "" : ",") + format_double(*d);
    }
    return text;
  };

  if (unset("--s")) {
    if (auto v = list_text("s")) opt.s_list = *v;
  }
  if (unset("--bezier")) {
    if (auto v = list_text("bezier")) opt.model.bezier = *v;
  }
  if (unset("--affine")) {
    if (auto v = list_text("affine")) opt.model.affine = *v;
  }
  if (unset("--model")) {
    if (auto v = table["model"].value<std::string>()) {
      if (*v != "power" && *v != "affine") throw ValidationError(opt.config + ": model must be power or affine");
      opt.model.kind = *v;
    }
  }
  if (unset("--lp")) opt.l_p = table["lp"].value_or(opt.l_p);
  if (unset("--swap-weights")) opt.swap_weights = table["swap_weights"].value_or(opt.swap_weights);
  if (unset("--size")) opt.size = table["size"].value_or(opt.size);
  if (unset("--out")) opt.out = table["out"].value_or(opt.out);
  if (unset("--bands")) opt.bands = table["bands"].value_or(opt.bands);
  if (unset("--flip")) opt.flip = table["flip"].value_or(opt.flip);
  if (unset("--band-levels")) opt.band_levels = table["band_levels"].value_or(opt.band_levels);
}

struct WrittenFile {
  std::string name;
  std::string hash;
};

std::vector<WrittenFile> render_size(double s, const FiguresOptions& opt, const OpacityModel& model, int width,
                                     int height, const std::shared_ptr<const ImageBuffer>& photo) {
  PanelOptions panel_options;
  panel_options.bands = opt.bands;
  panel_options.flipped = opt.flip;
  panel_options.levels = opt.band_levels == "midpoints" ? BandLevels::Midpoints : BandLevels::Endpoints;
  panel_options.swap_weights = opt.swap_weights;

  const auto panels = panel_grid(s, opt.l_p, model, width, height, panel_options);
  const fs::path dir(opt.out);
  const std::string stem = "fig_s" + percent_tag(s);
  std::vector<WrittenFile> written;

  auto emit = [&](const std::string& name, const ImageBuffer& img) {
    const fs::path path = dir / name;
    try {
      write_png(path, img);
    } catch (const std::exception& e) {
      throw std::runtime_error("writing " + path.string() + ": " + e.what());
    }
    written.push_back({name, raster_hash(img)});
  };

  for (const auto& panel : panels) {
    emit(stem + "_" + label(panel.background) + "_" + to_string(panel.mode) + ".png", panel.image);
  }
  emit(stem + "_montage.png", montage(panels));

  if (photo) {
    CompositeSpec spec;
    spec.background = PhotoBackground{photo};
    spec.s = s;
    spec.l_p = opt.l_p;
    spec.model = model;
    spec.mode = CompositeMode::PhotoOverlay;
    spec.edge_profile = opt.edge_profile;
    spec.blur_sigma = opt.photo_sigma > 0.0 ? opt.photo_sigma : default_photo_sigma(width, height);
    emit(stem + "_photo_overlay.png", composite(spec, width, height));
  }
  return written;
}

int cmd_figures(const CLI::App& cmd, FiguresOptions& opt, std::ostream& out) {
  if (!opt.config.empty()) apply_config(cmd, opt);
  const auto sizes = opt.s_list.empty() ? kFigureSizes : parse_list(opt.s_list, "s");
  for (double s : sizes) {
    if (!(s > 0.0 && s <= 1.0)) throw ValidationError("s = " + format_double(s) + " is outside (0,1]");
  }
  if (!(opt.l_p >= 0.0 && opt.l_p <= 1.0)) throw ValidationError("--lp must lie in [0,1]");
  if (opt.bands < 2) throw ValidationError("--bands must be at least 2");
  if (opt.band_levels != "endpoints" && opt.band_levels != "midpoints") {
    throw ValidationError("--band-levels must be endpoints or midpoints");
  }
  const auto [width, height] = parse_size(opt.size);
  const OpacityModel model = opt.model.build();

  std::shared_ptr<const ImageBuffer> photo;
  if (!opt.photo.empty()) photo = std::make_shared<const ImageBuffer>(read_image(opt.photo));

  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) throw std::runtime_error("cannot create " + opt.out + ": " + ec.message());

  std::vector<std::future<std::vector<WrittenFile>>> jobs;
  for (double s : sizes) {
    jobs.push_back(std::async(std::launch::async, render_size, s, std::cref(opt), std::cref(model), width, height,
                              std::cref(photo)));
  }
  std::map<std::string, std::string> manifest;
  for (auto& job : jobs) {
    for (auto& file : job.get()) manifest[file.name] = file.hash;
  }

  const fs::path manifest_path = fs::path(opt.out) / "MANIFEST.sha256";
  std::ofstream m(manifest_path);
  m << "# sha256 of \"WxH\\n\" + 8-bit raster\n";
  for (const auto& [name, hash] : manifest) m << hash << "  " << name << '\n';
  if (!m) throw std::runtime_error("writing " + manifest_path.string() + " failed");

  out << "wrote " << manifest.size() << " images for " << sizes.size() << " sizes to " << opt.out << '\n';
  return kExitOk;
}

struct CurveOptions {
  ModelOptions model;
  int samples = 101;
  std::string out;
};

int cmd_curve(CurveOptions& opt, std::ostream& out) {
  if (opt.samples < 2) throw ValidationError("--samples must be at least 2");
  const OpacityModel model = opt.model.build();
  std::ostringstream csv;
  csv << "s,y\n";
  for (int i = 0; i < opt.samples; ++i) {
    const double s = double(i) / double(opt.samples - 1);
    csv << format_double(s) << ',' << format_double(opacity(model, s)) << '\n';
  }
  if (opt.out.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(opt.out);
    f << csv.str();
    if (!f) throw std::runtime_error("writing " + opt.out + " failed");
  }
  return kExitOk;
}

struct FitOptions {
  std::string bezier = "0.20,0.25,1.00";
  double s_min = 0.05;
  double s_max = 1.0;
  int samples = 96;
  std::string objective = "minimax";
  std::string out;
};

int cmd_fit(FitOptions& opt, std::ostream& out) {
  const OpacityModel source = PowerOpacity{BezierPolynomial(parse_list(opt.bezier, "bezier"))};
  AffineFitOptions fit;
  fit.s_min = opt.s_min;
  fit.s_max = opt.s_max;
  fit.samples = opt.samples;
  fit.objective = opt.objective == "lsq" ? FitObjective::LeastSquares : FitObjective::Minimax;
  const AffineOpacity affine = fit_affine(source, fit);
  const OpacityModel fitted = affine;

  const json result{
      {"model", fitted},
      {"source", source},
      {"s_min", opt.s_min},
      {"s_max", opt.s_max},
      {"samples", opt.samples},
      {"objective", opt.objective},
      {"max_abs_deviation", max_abs_difference(source, fitted, opt.s_min, opt.s_max, opt.samples)},
  };
  if (opt.out.empty()) {
    out << result.dump(2) << '\n';
  } else {
    std::ofstream f(opt.out);
    f << result.dump(2) << '\n';
    if (!f) throw std::runtime_error("writing " + opt.out + " failed");
  }
  return kExitOk;
}

struct PanelCmdOptions {
  ModelOptions model;
  double s = 0.1;
  double l_p = 0.5;
  std::string background = "continuous";
  std::string mode = "perception";
  int bands = 10;
  bool flip = false;
  bool swap_weights = false;
  std::string size = "900x600";
  std::string photo;
  double photo_sigma = 0.0;
  double edge_profile = 2.0;
  std::string out = "panel.png";
};

int cmd_panel(PanelCmdOptions& opt, std::ostream& out) {
  const auto [width, height] = parse_size(opt.size);
  CompositeSpec spec;
  spec.s = opt.s;
  spec.l_p = opt.l_p;
  spec.model = opt.model.build();
  spec.swap_weights = opt.swap_weights;
  spec.edge_profile = opt.edge_profile;
  spec.mode = opt.mode == "color"        ? CompositeMode::ConstantColor
              : opt.mode == "perception" ? CompositeMode::ConstantPerception
                                         : CompositeMode::PhotoOverlay;
  if (opt.background == "white") {
    spec.background = WhiteBackground{};
  } else if (opt.background == "bands") {
    spec.background = DiscreteScale{opt.bands, opt.flip};
  } else if (opt.background == "continuous") {
    spec.background = ContinuousScale{opt.flip};
  } else {
    if (opt.photo.empty()) throw ValidationError("--bg photo needs --photo FILE");
    spec.background = PhotoBackground{std::make_shared<const ImageBuffer>(read_image(opt.photo))};
    spec.blur_sigma = opt.photo_sigma > 0.0 ? opt.photo_sigma : default_photo_sigma(width, height);
  }
  write_image(opt.out, composite(spec, width, height));
  out << "wrote " << opt.out << '\n';
  return kExitOk;
}

int cmd_validate_session(const std::string& file, std::ostream& out) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file);
  const SessionReport report = validate_session(in);
  for (const auto& f : report.findings) out << file << ":" << f.line << ": " << f.message << '\n';
  out << report.records << " records, " << report.findings.size() << " findings\n";
  return report.clean() ? kExitOk : kExitFindings;
}

int cmd_aggregate(const std::string& file, const std::string& group_by, const std::string& out_file,
                  std::ostream& out) {
  const auto store = CalibrationStore::open(file);
  const auto report =
      aggregate(store, group_by.empty() ? std::nullopt : std::optional<std::string>(group_by));
  const auto text = report_to_json(report).dump(2);
  if (out_file.empty()) {
    out << text << '\n';
  } else {
    std::ofstream f(out_file);
    f << text << '\n';
    if (!f) throw std::runtime_error("writing " + out_file + " failed");
  }
  return kExitOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Context-sensitive luminance correction: figures, curves, fits and calibration sessions"};
  app.require_subcommand(1);

  FiguresOptions figures;
  auto* figures_cmd = app.add_subcommand("figures", "Render six-panel comparisons for a list of sizes");
  figures.model.attach(*figures_cmd);
  figures_cmd->add_option("--s", figures.s_list, "Relative sizes, comma separated (default: the 13 standard sizes)");
  figures_cmd->add_option("--lp", figures.l_p, "Perceived luminance of the band")->capture_default_str();
  figures_cmd->add_flag("--swap-weights", figures.swap_weights, "Put weight 1-y on the band luminance");
  figures_cmd->add_option("--size", figures.size, "Panel size WxH")->capture_default_str();
  figures_cmd->add_option("--out", figures.out, "Output directory")->capture_default_str();
  figures_cmd->add_option("--bands", figures.bands, "Bands in the discrete scale")->capture_default_str();
  figures_cmd->add_flag("--flip", figures.flip, "Ramp light to dark");
  figures_cmd->add_option("--band-levels", figures.band_levels, "endpoints or midpoints")->capture_default_str();
  figures_cmd->add_option("--config", figures.config, "TOML file with defaults; flags take precedence");
  figures_cmd->add_option("--photo", figures.photo, "Also render a photo overlay over this PNG/PGM");
  figures_cmd->add_option("--photo-sigma", figures.photo_sigma, "Blur sigma in pixels (default 5% of diagonal)");
  figures_cmd->add_option("--edge-profile", figures.edge_profile, "Overlay ramp exponent")->capture_default_str();

  CurveOptions curve;
  auto* curve_cmd = app.add_subcommand("curve", "Write (s, y) samples of an opacity model as CSV");
  curve.model.attach(*curve_cmd);
  curve_cmd->add_option("--samples", curve.samples, "Number of uniform samples on [0,1]")->capture_default_str();
  curve_cmd->add_option("--out", curve.out, "CSV file (default: stdout)");

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an affine opacity to a power model");
  fit_cmd->add_option("--bezier", fit.bezier, "Exponent Bezier coefficients")->capture_default_str();
  fit_cmd->add_option("--smin", fit.s_min, "Smallest fitted size")->capture_default_str();
  fit_cmd->add_option("--smax", fit.s_max, "Largest fitted size")->capture_default_str();
  fit_cmd->add_option("--samples", fit.samples, "Uniform samples in [smin, smax]")->capture_default_str();
  fit_cmd->add_option("--objective", fit.objective, "minimax or lsq")
      ->check(CLI::IsMember({"minimax", "lsq"}))
      ->capture_default_str();
  fit_cmd->add_option("--out", fit.out, "JSON file (default: stdout)");

  PanelCmdOptions panel;
  auto* panel_cmd = app.add_subcommand("panel", "Render a single composite");
  panel.model.attach(*panel_cmd);
  panel_cmd->add_option("--s", panel.s, "Relative size")->capture_default_str();
  panel_cmd->add_option("--lp", panel.l_p, "Perceived luminance")->capture_default_str();
  panel_cmd->add_option("--bg", panel.background, "white, bands, continuous or photo")
      ->check(CLI::IsMember({"white", "bands", "continuous", "photo"}))
      ->capture_default_str();
  panel_cmd->add_option("--mode", panel.mode, "color, perception or overlay")
      ->check(CLI::IsMember({"color", "perception", "overlay"}))
      ->capture_default_str();
  panel_cmd->add_option("--bands", panel.bands, "Bands in the discrete scale")->capture_default_str();
  panel_cmd->add_flag("--flip", panel.flip, "Ramp light to dark");
  panel_cmd->add_flag("--swap-weights", panel.swap_weights, "Put weight 1-y on the band luminance");
  panel_cmd->add_option("--size", panel.size, "Image size WxH")->capture_default_str();
  panel_cmd->add_option("--photo", panel.photo, "Background photo (PNG or PGM)");
  panel_cmd->add_option("--photo-sigma", panel.photo_sigma, "Blur sigma in pixels (default 5% of diagonal)");
  panel_cmd->add_option("--edge-profile", panel.edge_profile, "Overlay ramp exponent")->capture_default_str();
  panel_cmd->add_option("--out", panel.out, "Output .png or .pgm")->capture_default_str();

  std::string session_file;
  auto* validate_cmd = app.add_subcommand("validate-session", "Check a calibration session (JSONL)");
  validate_cmd->add_option("file", session_file, "Session file")->required();

  std::string aggregate_file, group_by, aggregate_out;
  auto* aggregate_cmd = app.add_subcommand("aggregate", "Summarize a calibration store");
  aggregate_cmd->add_option("file", aggregate_file, "Store file (JSONL)")->required();
  aggregate_cmd->add_option("--group-by", group_by, "Group on tags of the form KEY:VALUE");
  aggregate_cmd->add_option("--out", aggregate_out, "JSON file (default: stdout)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*figures_cmd) return cmd_figures(*figures_cmd, figures, out);
    if (*curve_cmd) return cmd_curve(curve, out);
    if (*fit_cmd) return cmd_fit(fit, out);
    if (*panel_cmd) return cmd_panel(panel, out);
    if (*validate_cmd) return cmd_validate_session(session_file, out);
    if (*aggregate_cmd) return cmd_aggregate(aggregate_file, group_by, aggregate_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace cpercept
