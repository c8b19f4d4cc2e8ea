#include "passchart/image.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>

namespace passchart {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  return FilePtr(std::fopen(path.c_str(), mode));
}

// libpng reports errors through longjmp; the message is stashed here first.
struct PngErrorSlot {
  char message[256] = {};
};

void record_png_error(png_structp png, png_const_charp message) {
  auto* slot = static_cast<PngErrorSlot*>(png_get_error_ptr(png));
  std::snprintf(slot->message, sizeof slot->message, "%s", message);
  png_longjmp(png, 1);
}

void ignore_png_warning(png_structp, png_const_charp) {}

bool has_png_signature(std::FILE* file) {
  png_byte header[8];
  if (std::fread(header, 1, sizeof header, file) != sizeof header) return false;
  return png_sig_cmp(header, 0, sizeof header) == 0;
}

struct ReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadState() { png_destroy_read_struct(&png, &info, nullptr); }
};

// Decodes into `image` (left empty when header_only). Returns false on a
// libpng error, with the message in `slot`.
bool decode_png(std::FILE* file, bool header_only, PngErrorSlot& slot, RasterImage& image,
                std::vector<png_bytep>& rows, int& width, int& height) {
  ReadState state;
  state.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &slot, record_png_error,
                                     ignore_png_warning);
  if (!state.png) return false;
  state.info = png_create_info_struct(state.png);
  if (!state.info) return false;
  png_structp png = state.png;
  png_infop info = state.info;

  if (setjmp(png_jmpbuf(png))) return false;

  png_init_io(png, file);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  if (header_only) return true;

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * 3) {
    std::snprintf(slot.message, sizeof slot.message, "unsupported PNG layout");
    return false;
  }
  // `image` and `rows` are owned by the caller so a longjmp never skips their
  // destructors.
  image = RasterImage(width, height);
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] = reinterpret_cast<png_bytep>(&image.at(0, y));
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  return true;
}

struct WriteState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~WriteState() { png_destroy_write_struct(&png, &info); }
};

bool encode_png(std::FILE* file, const RasterImage& image, PngErrorSlot& slot) {
  WriteState state;
  state.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &slot, record_png_error,
                                      ignore_png_warning);
  if (!state.png) return false;
  state.info = png_create_info_struct(state.png);
  if (!state.info) return false;
  png_structp png = state.png;
  png_infop info = state.info;

  if (setjmp(png_jmpbuf(png))) return false;

  png_init_io(png, file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height(); ++y) {
    png_write_row(png, reinterpret_cast<png_const_bytep>(&image.at(0, y)));
  }
  png_write_end(png, nullptr);
  return true;
}

}  // namespace

RasterImage::RasterImage(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ImageError("negative image dimensions");
  pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

std::size_t PixelMask::count() const noexcept {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

std::vector<PixelPoint> PixelMask::points() const {
  std::vector<PixelPoint> out;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (test(x, y)) out.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
  }
  return out;
}

RasterImage read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  if (!file) throw ImageError("cannot open " + path.string());
  if (!has_png_signature(file.get())) throw ImageError(path.string() + " is not a PNG file");
  PngErrorSlot slot;
  RasterImage image;
  std::vector<png_bytep> rows;
  int width = 0;
  int height = 0;
  if (!decode_png(file.get(), false, slot, image, rows, width, height)) {
    throw ImageError("cannot decode " + path.string() + ": " + slot.message);
  }
  return image;
}

void write_png(const std::filesystem::path& path, const RasterImage& image) {
  FilePtr file = open_file(path, "wb");
  if (!file) throw ImageError("cannot write " + path.string());
  PngErrorSlot slot;
  if (!encode_png(file.get(), image, slot)) {
    throw ImageError("cannot encode " + path.string() + ": " + slot.message);
  }
}

std::optional<std::pair<int, int>> probe_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  if (!file || !has_png_signature(file.get())) return std::nullopt;
  PngErrorSlot slot;
  RasterImage unused;
  std::vector<png_bytep> rows;
  int width = 0;
  int height = 0;
  if (!decode_png(file.get(), true, slot, unused, rows, width, height)) return std::nullopt;
  return std::pair{width, height};
}

}  // namespace passchart
