#include "specmerge/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>

#include "specmerge/error.hpp"
#include "specmerge/png.hpp"

namespace specmerge {

namespace {

constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 28;

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool at_end() const { return pos_ >= bytes_.size(); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::uint8_t peek() const { return bytes_[pos_]; }
  std::uint8_t next() { return bytes_[pos_++]; }

  void skip_space_and_comments() {
    while (!at_end()) {
      const auto ch = peek();
      if (ch == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  /// Reads an unsigned decimal token; nullopt if the next byte is not a digit.
  std::optional<std::uint64_t> read_uint() {
    if (at_end() || !std::isdigit(peek())) return std::nullopt;
    std::uint64_t value = 0;
    while (!at_end() && std::isdigit(peek())) {
      value = value * 10 + (next() - '0');
      if (value > std::numeric_limits<std::uint32_t>::max()) return std::nullopt;
    }
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint64_t header_field(Cursor& cur, const char* name) {
  cur.skip_space_and_comments();
  if (cur.at_end()) throw Error(ErrorCode::malformed_header, std::string("missing ") + name);
  auto v = cur.read_uint();
  if (!v) throw Error(ErrorCode::malformed_header, std::string("invalid ") + name);
  if (!cur.at_end() && !std::isspace(cur.peek()) && cur.peek() != '#') {
    throw Error(ErrorCode::malformed_header, std::string("invalid ") + name);
  }
  return *v;
}

void check_sample(std::uint64_t s, std::uint32_t maxval, std::size_t index) {
  if (s > maxval) {
    throw Error(ErrorCode::sample_out_of_range, "sample " + std::to_string(index) + " = " +
                                                    std::to_string(s) + " exceeds maxval " +
                                                    std::to_string(maxval));
  }
}

}  // namespace

RawImage decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw Error(ErrorCode::malformed_header, "expected P2 or P5 magic");
  }
  const bool binary = bytes[1] == '5';
  Cursor cur(bytes.subspan(2));
  if (!cur.at_end() && !std::isspace(cur.peek()) && cur.peek() != '#') {
    throw Error(ErrorCode::malformed_header, "expected whitespace after magic");
  }

  const auto cols = header_field(cur, "width");
  const auto rows = header_field(cur, "height");
  const auto maxval = header_field(cur, "maxval");
  if (cols == 0 || rows == 0) throw Error(ErrorCode::malformed_header, "zero dimension");
  if (rows * cols > kMaxPixels) throw Error(ErrorCode::malformed_header, "image too large");
  if (maxval == 0 || maxval > 65535) {
    throw Error(ErrorCode::malformed_header, "maxval must be in [1, 65535]");
  }

  RawImage img;
  img.rows = rows;
  img.cols = cols;
  img.maxval = static_cast<std::uint32_t>(maxval);
  const std::size_t count = rows * cols;
  img.samples.reserve(count);

  if (binary) {
    // exactly one whitespace byte separates the header from the raster
    if (cur.at_end()) throw Error(ErrorCode::truncated_payload, "no raster data");
    cur.next();
    const std::size_t width = maxval < 256 ? 1 : 2;
    if (cur.remaining() < count * width) {
      throw Error(ErrorCode::truncated_payload, "expected " + std::to_string(count * width) +
                                                    " raster bytes, found " +
                                                    std::to_string(cur.remaining()));
    }
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t s = cur.next();
      if (width == 2) s = (s << 8) | cur.next();
      check_sample(s, img.maxval, i);
      img.samples.push_back(s);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      cur.skip_space_and_comments();
      if (cur.at_end()) {
        throw Error(ErrorCode::truncated_payload, "expected " + std::to_string(count) +
                                                      " samples, found " + std::to_string(i));
      }
      auto s = cur.read_uint();
      if (!s) throw Error(ErrorCode::malformed_payload, "non-numeric sample " + std::to_string(i));
      check_sample(*s, img.maxval, i);
      img.samples.push_back(static_cast<std::uint32_t>(*s));
    }
  }
  return img;
}

Bytes encode_pgm(const RawImage& img, bool binary) {
  std::string header = std::string(binary ? "P5" : "P2") + "\n" + std::to_string(img.cols) + " " +
                       std::to_string(img.rows) + "\n" + std::to_string(img.maxval) + "\n";
  Bytes out(header.begin(), header.end());
  if (binary) {
    const bool wide = img.maxval >= 256;
    out.reserve(out.size() + img.samples.size() * (wide ? 2 : 1));
    for (auto s : img.samples) {
      if (wide) out.push_back(static_cast<std::uint8_t>((s >> 8) & 0xFF));
      out.push_back(static_cast<std::uint8_t>(s & 0xFF));
    }
    return out;
  }
  std::string body;
  for (std::size_t r = 0; r < img.rows; ++r) {
    for (std::size_t c = 0; c < img.cols; ++c) {
      if (c) body += ' ';
      body += std::to_string(img.samples[r * img.cols + c]);
    }
    body += '\n';
  }
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Bytes read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::file_not_found, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::io_error, "short write to " + path.string());
}

RawImage decode_image(std::span<const std::uint8_t> bytes) {
  if (looks_like_png(bytes)) return decode_png(bytes);
  return decode_pgm(bytes);
}

RawImage load_image(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

}  // namespace specmerge
