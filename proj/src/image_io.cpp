#include "cpercept/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>

#include "cpercept/errors.hpp"

namespace cpercept {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw std::runtime_error("cannot open " + path.string());
  return f;
}

[[noreturn]] void png_fail(png_structp png, png_const_charp message) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  *what = message;
  png_longjmp(png, 1);
}

std::string lower_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return ext;
}

}  // namespace

void write_png(const std::filesystem::path& path, const ImageBuffer& img) {
  // Everything with a destructor lives above setjmp so a longjmp never skips one.
  const auto bytes = quantize(img);
  auto file = open_file(path, "wb");

  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, nullptr);
  if (!png) throw std::runtime_error("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng: out of memory");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("writing " + path.string() + ": " + error);
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, png_uint_32(img.width()), png_uint_32(img.height()), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height(); ++y) {
    png_write_row(png, bytes.data() + std::size_t(y) * std::size_t(img.width()));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ImageBuffer read_png(const std::filesystem::path& path) {
  auto file = open_file(path, "rb");

  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_fail, nullptr);
  if (!png) throw std::runtime_error("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("libpng: out of memory");
  }

  // Everything with a destructor lives above setjmp so a longjmp never skips one.
  std::vector<double> data;
  std::vector<png_byte> row;
  png_uint_32 width = 0, height = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("reading " + path.string() + ": " + error);
  }

  png_init_io(png, file.get());
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (depth == 16) png_set_swap(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const double max_value = bit_depth == 16 ? 65535.0 : 255.0;
  row.resize(png_get_rowbytes(png, info));
  data.resize(std::size_t(width) * height);

  for (png_uint_32 y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < width; ++x) {
      auto sample = [&](int c) -> double {
        const std::size_t i = std::size_t(x) * channels + std::size_t(c);
        if (bit_depth == 16) {
          std::uint16_t v;
          std::memcpy(&v, row.data() + 2 * i, 2);
          return v / max_value;
        }
        return row[i] / max_value;
      };
      const double v = channels >= 3 ? 0.2126 * sample(0) + 0.7152 * sample(1) + 0.0722 * sample(2) : sample(0);
      data[std::size_t(y) * width + x] = std::clamp(v, 0.0, 1.0);
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return ImageBuffer(int(width), int(height), std::move(data));
}

void write_pgm(const std::filesystem::path& path, const ImageBuffer& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  const auto bytes = quantize(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw std::runtime_error("writing " + path.string() + " failed");
}

ImageBuffer read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());

  auto next_token = [&in]() {
    std::string token;
    while (in) {
      const int c = in.peek();
      if (c == '#') {
        std::string comment;
        std::getline(in, comment);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    in >> token;
    return token;
  };

  if (next_token() != "P5") throw std::runtime_error(path.string() + " is not a binary PGM (P5)");
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ": malformed PGM header");
  }
  if (maxval < 1 || maxval > 65535) throw std::runtime_error(path.string() + ": bad PGM maxval");
  in.get();  // single whitespace before the raster

  const std::size_t count = std::size_t(width) * std::size_t(height);
  const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(count * bytes_per_sample);
  in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
  if (std::size_t(in.gcount()) != raw.size()) throw std::runtime_error(path.string() + ": truncated PGM raster");

  std::vector<double> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned v = bytes_per_sample == 2 ? (unsigned(raw[2 * i]) << 8) | raw[2 * i + 1] : raw[i];
    data[i] = std::min(1.0, double(v) / double(maxval));
  }
  return ImageBuffer(width, height, std::move(data));
}

ImageBuffer read_image(const std::filesystem::path& path) {
  const auto ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm") return read_pgm(path);
  throw std::runtime_error("unsupported image format: " + path.string());
}

void write_image(const std::filesystem::path& path, const ImageBuffer& img) {
  const auto ext = lower_extension(path);
  if (ext == ".png") return write_png(path, img);
  if (ext == ".pgm") return write_pgm(path, img);
  throw std::runtime_error("unsupported image format: " + path.string());
}

}  // namespace cpercept
