#include "specmerge/png.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <string>

#include "specmerge/error.hpp"

namespace specmerge {

namespace {

struct ReadState {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t len) {
  auto* st = static_cast<ReadState*>(png_get_io_ptr(png));
  if (st->pos + len > st->bytes.size()) png_error(png, "truncated PNG stream");
  std::memcpy(out, st->bytes.data() + st->pos, len);
  st->pos += len;
}

void write_callback(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void flush_callback(png_structp) {}

void warning_callback(png_structp, png_const_charp) {}

}  // namespace

bool looks_like_png(std::span<const std::uint8_t> bytes) noexcept {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

std::vector<std::uint8_t> encode_png(const RawImage& img) {
  const bool wide = img.maxval > 255;
  const std::size_t stride = img.cols * (wide ? 2 : 1);
  std::vector<std::uint8_t> raster(stride * img.rows);
  for (std::size_t i = 0; i < img.samples.size(); ++i) {
    std::uint32_t s = img.samples[i];
    if (wide) {
      if (img.maxval != 65535) s = (s * 65535u + img.maxval / 2) / img.maxval;
      raster[2 * i] = static_cast<std::uint8_t>(s >> 8);
      raster[2 * i + 1] = static_cast<std::uint8_t>(s & 0xFF);
    } else {
      if (img.maxval != 255) s = (s * 255u + img.maxval / 2) / img.maxval;
      raster[i] = static_cast<std::uint8_t>(s);
    }
  }

  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                            warning_callback);
  if (!png) throw Error(ErrorCode::io_error, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::io_error, "PNG encoding failed");
  }
  png_set_write_fn(png, &out, write_callback, flush_callback);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.cols), static_cast<png_uint_32>(img.rows),
               wide ? 16 : 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t r = 0; r < img.rows; ++r) png_write_row(png, raster.data() + r * stride);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

RawImage decode_png(std::span<const std::uint8_t> bytes) {
  if (!looks_like_png(bytes)) throw Error(ErrorCode::malformed_header, "missing PNG signature");

  ReadState state{bytes, 0};
  RawImage img;
  std::vector<std::uint8_t> raster;
  std::vector<png_bytep> rows;
  volatile bool unsupported = false;

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                           warning_callback);
  if (!png) throw Error(ErrorCode::io_error, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    if (unsupported) throw Error(ErrorCode::unsupported_format, "only grayscale PNG is supported");
    throw Error(ErrorCode::truncated_payload, "corrupt or truncated PNG");
  }
  png_set_read_fn(png, &state, read_callback);
  png_read_info(png, info);

  const auto color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    unsupported = true;
    png_error(png, "unsupported color type");
  }
  if (depth < 8) png_set_packing(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  img.rows = png_get_image_height(png, info);
  img.cols = png_get_image_width(png, info);
  img.maxval = (1u << depth) - 1u;
  const std::size_t stride = png_get_rowbytes(png, info);
  raster.resize(stride * img.rows);
  rows.resize(img.rows);
  for (std::size_t r = 0; r < img.rows; ++r) rows[r] = raster.data() + r * stride;
  png_read_image(png, rows.data());

  img.samples.resize(img.rows * img.cols);
  for (std::size_t r = 0; r < img.rows; ++r) {
    const std::uint8_t* row = rows[r];
    for (std::size_t c = 0; c < img.cols; ++c) {
      img.samples[r * img.cols + c] =
          depth == 16 ? (std::uint32_t{row[2 * c]} << 8) | row[2 * c + 1] : row[c];
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

}  // namespace specmerge
