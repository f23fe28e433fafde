#include "blastvox/simcli/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "blastvox/errors.hpp"

namespace blastvox {

namespace {

void pngWarning(png_structp, png_const_charp) {}

void appendBytes(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}
void noFlush(png_structp) {}

struct ReadSource {
  const std::vector<std::uint8_t>* bytes;
  std::size_t offset;
};

void readBytes(png_structp png, png_bytep data, png_size_t len) {
  auto* src = static_cast<ReadSource*>(png_get_io_ptr(png));
  if (src->offset + len > src->bytes->size()) png_error(png, "unexpected end of file");
  std::memcpy(data, src->bytes->data() + src->offset, len);
  src->offset += len;
}

}  // namespace

std::vector<std::uint8_t> encodePng(const Image8& image, const ImageMetadata& metadata) {
  if (image.width <= 0 || image.height <= 0) throw IoError("cannot encode an empty image");
  std::vector<std::uint8_t> out;
  std::vector<std::string> keys;
  std::vector<std::string> values;
  std::vector<png_text> texts;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, pngWarning);
  if (!png) throw IoError("png: out of memory");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* p;
    png_infop* i;
    ~Guard() { png_destroy_write_struct(p, i); }
  } guard{&png, &info};
  if (setjmp(png_jmpbuf(png))) throw IoError("png encoding failed");
  png_set_write_fn(png, &out, appendBytes, noFlush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  for (const auto& [k, v] : metadata) {
    keys.push_back(k.substr(0, 79));
    values.push_back(v);
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    png_text t{};
    t.compression = PNG_TEXT_COMPRESSION_NONE;
    t.key = keys[i].data();
    t.text = values[i].data();
    t.text_length = values[i].size();
    texts.push_back(t);
  }
  if (!texts.empty()) png_set_text(png, info, texts.data(), static_cast<int>(texts.size()));
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(image.pixel(0, y)));
  }
  png_write_end(png, nullptr);
  return out;
}

void writePng(const std::filesystem::path& path, const Image8& image, const ImageMetadata& metadata) {
  const std::vector<std::uint8_t> bytes = encodePng(image, metadata);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

DecodedPng readPng(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ReadSource src{&bytes, 0};
  DecodedPng out;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, pngWarning);
  if (!png) throw IoError("png: out of memory");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* p;
    png_infop* i;
    ~Guard() { png_destroy_read_struct(p, i, nullptr); }
  } guard{&png, &info};
  if (setjmp(png_jmpbuf(png))) throw IoError("cannot decode " + path.string());
  png_set_read_fn(png, &src, readBytes);
  png_read_info(png, info);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_palette_to_rgb(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  out.image = Image8(static_cast<int>(png_get_image_width(png, info)), static_cast<int>(png_get_image_height(png, info)));
  for (int y = 0; y < out.image.height; ++y) png_read_row(png, out.image.pixel(0, y), nullptr);
  png_read_end(png, info);
  png_textp text = nullptr;
  int count = 0;
  png_get_text(png, info, &text, &count);
  for (int i = 0; i < count; ++i) out.metadata[text[i].key] = std::string(text[i].text, text[i].text_length);
  return out;
}

Image8 toImage8(const RgbaImage& image) {
  Image8 out(image.width, image.height);
  const auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Rgba& c = image.at(x, y);
      std::uint8_t* p = out.pixel(x, y);
      p[0] = q(c.r);
      p[1] = q(c.g);
      p[2] = q(c.b);
    }
  }
  return out;
}

}  // namespace blastvox
