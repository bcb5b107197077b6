#include "cpercept/c_api.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "cpercept/calibration_store.hpp"
#include "cpercept/compositor.hpp"
#include "cpercept/errors.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace cpercept;

void copy_text(const std::string& text, char* dst, size_t len) {
  if (dst == nullptr || len == 0) return;
  const size_t n = std::min(text.size(), len - 1);
  std::memcpy(dst, text.data(), n);
  dst[n] = '\0';
}

BackgroundKind background_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "white") return WhiteBackground{};
  if (kind == "bands") return DiscreteScale{j.value("bands", 10), j.value("flipped", false)};
  if (kind == "continuous") return ContinuousScale{j.value("flipped", false)};
  throw ValidationError("unsupported background kind \"" + kind + "\"");
}

CompositeSpec spec_from_json(const json& j) {
  CompositeSpec spec;
  spec.background = background_from_json(j.at("background"));
  spec.s = j.at("s").get<double>();
  spec.l_p = j.at("l_p").get<double>();
  const auto mode = j.at("mode").get<std::string>();
  if (mode == "color") {
    spec.mode = CompositeMode::ConstantColor;
  } else if (mode == "perception") {
    spec.mode = CompositeMode::ConstantPerception;
  } else {
    throw ValidationError("unsupported mode \"" + mode + "\"");
  }
  spec.model = j.at("model").get<OpacityModel>();
  spec.swap_weights = j.value("swap_weights", false);
  return spec;
}

template <class F>
int guarded(char* err, size_t err_len, F&& body) {
  try {
    body();
    copy_text("", err, err_len);
    return 0;
  } catch (const std::exception& e) {
    copy_text(e.what(), err, err_len);
    return 1;
  }
}

int write_out(const std::string& text, char* out, size_t out_len) {
  if (text.size() + 1 > out_len) throw std::length_error("output buffer too small");
  copy_text(text, out, out_len);
  return 0;
}

}  // namespace

extern "C" int cpercept_render_gray8(const char* spec_json, int width, int height, unsigned char* out,
                                     size_t out_len, char* err, size_t err_len) {
  return guarded(err, err_len, [&] {
    const auto img = composite(spec_from_json(json::parse(spec_json)), width, height);
    const auto bytes = quantize(img);
    if (out == nullptr || bytes.size() > out_len) throw std::length_error("output buffer too small");
    std::copy(bytes.begin(), bytes.end(), out);
  });
}

extern "C" int cpercept_elevate_degree(const char* bezier_json, char* out, size_t out_len, char* err,
                                       size_t err_len) {
  return guarded(err, err_len, [&] {
    const auto poly = json::parse(bezier_json).get<BezierPolynomial>();
    write_out(json(elevate_degree(poly)).dump(), out, out_len);
  });
}

extern "C" int cpercept_record_findings(const char* record_json, char* out, size_t out_len, char* err,
                                        size_t err_len) {
  return guarded(err, err_len, [&] {
    const auto record = record_from_json(json::parse(record_json));
    write_out(json(record_findings(record)).dump(), out, out_len);
  });
}
