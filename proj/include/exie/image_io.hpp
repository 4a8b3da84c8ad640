#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include <png.h>

#include "exie/error.hpp"
#include "exie/image.hpp"

namespace exie {

namespace detail {

inline std::uint8_t quantize8(double v) noexcept {
  const long q = std::lround(clamp01(v) * 255.0);
  return static_cast<std::uint8_t>(q < 0 ? 0 : (q > 255 ? 255 : q));
}

/// Interleaved 8-bit RGB bytes for an image, row-major.
inline std::vector<std::uint8_t> to_rgb8(const Image& img) {
  std::vector<std::uint8_t> bytes(img.pixel_count() * 3);
  std::size_t k = 0;
  for (int i = 0; i < img.height(); ++i)
    for (int j = 0; j < img.width(); ++j)
      for (int c = 0; c < 3; ++c)
        bytes[k++] = quantize8(img.at(i, j, c));
  return bytes;
}

inline Image from_rgb8(int height, int width, const std::uint8_t* bytes,
                       std::size_t stride_samples) {
  Image img(height, width);
  for (int i = 0; i < height; ++i) {
    const std::uint8_t* row = bytes + static_cast<std::size_t>(i) * width *
                                          stride_samples;
    for (int j = 0; j < width; ++j)
      for (int c = 0; c < 3; ++c)
        img.at(i, j, c) = row[j * stride_samples + c] / 255.0;
  }
  return img;
}

inline Image load_png(const std::string& path) {
  png_image pim;
  std::memset(&pim, 0, sizeof pim);
  pim.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&pim, path.c_str())) {
    std::string msg = pim.message;
    png_image_free(&pim);
    throw FormatError("cannot decode PNG " + path + ": " + msg);
  }
  // Read as RGBA and drop the alpha bytes ourselves; asking libpng for RGB
  // would composite transparency against a background instead.
  pim.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(pim));
  if (!png_image_finish_read(&pim, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = pim.message;
    png_image_free(&pim);
    throw FormatError("cannot decode PNG " + path + ": " + msg);
  }
  const int h = static_cast<int>(pim.height);
  const int w = static_cast<int>(pim.width);
  if (h < 1 || w < 1)
    throw FormatError("PNG has zero dimension: " + path);
  return from_rgb8(h, w, buf.data(), 4);
}

inline void save_png(const Image& img, const std::string& path) {
  const std::vector<std::uint8_t> bytes = to_rgb8(img);
  png_image pim;
  std::memset(&pim, 0, sizeof pim);
  pim.version = PNG_IMAGE_VERSION;
  pim.width = static_cast<png_uint_32>(img.width());
  pim.height = static_cast<png_uint_32>(img.height());
  pim.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&pim, path.c_str(), 0, bytes.data(), 0,
                               nullptr)) {
    std::string msg = pim.message;
    png_image_free(&pim);
    throw IoError("cannot write PNG " + path + ": " + msg);
  }
}

/// Read one PPM header token, skipping whitespace and # comments.
inline std::string ppm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {}
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

inline Image load_ppm(std::istream& in, const std::string& path) {
  const std::string magic = ppm_token(in);
  if (magic != "P6")
    throw FormatError("not a binary PPM (P6): " + path);
  long w = 0, h = 0, maxval = 0;
  try {
    w = std::stol(ppm_token(in));
    h = std::stol(ppm_token(in));
    maxval = std::stol(ppm_token(in));
  } catch (const std::exception&) {
    throw FormatError("malformed PPM header: " + path);
  }
  if (w < 1 || h < 1)
    throw FormatError("PPM has zero dimension: " + path);
  if (maxval != 255)
    throw FormatError("unsupported PPM maxval (want 255): " + path);
  // The header ends with exactly one whitespace byte before the raster.
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h * 3);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
    throw FormatError("truncated PPM raster: " + path);
  return from_rgb8(static_cast<int>(h), static_cast<int>(w), bytes.data(), 3);
}

inline void save_ppm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open for writing: " + path);
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  const std::vector<std::uint8_t> bytes = to_rgb8(img);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IoError("write failed: " + path);
}

inline bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace detail

/// Load a PNG or binary PPM image.  The format is detected from the file's
/// leading bytes, not its name.  Samples are mapped to doubles as v / 255.
/// Any alpha channel in a PNG is dropped.  Throws IoError when the file
/// cannot be opened and FormatError when it cannot be decoded.
inline Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open for reading: " + path);
  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G',
                                           '\r', '\n', 0x1a, '\n'};
  unsigned char head[8] = {};
  in.read(reinterpret_cast<char*>(head), sizeof head);
  const std::streamsize got = in.gcount();
  if (got >= 8 && std::memcmp(head, png_sig, 8) == 0) {
    in.close();
    return detail::load_png(path);
  }
  if (got >= 2 && head[0] == 'P' && head[1] == '6') {
    in.clear();
    in.seekg(0);
    return detail::load_ppm(in, path);
  }
  throw FormatError("unrecognized image format: " + path);
}

/// Save an image as PNG, or as binary PPM when the path ends in ".ppm".
/// Samples are quantized as round(v * 255).  Throws IoError on failure.
inline void save_image(const Image& img, const std::string& path) {
  if (detail::has_suffix(path, ".ppm"))
    detail::save_ppm(img, path);
  else
    detail::save_png(img, path);
}

} // namespace exie
