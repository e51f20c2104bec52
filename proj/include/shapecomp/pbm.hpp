/// @file pbm.hpp
/// @brief Netpbm bitmap (PBM) reading and writing, plain (P1) and raw (P4).
///
/// PBM's 1 (black) is a set mask bit, i.e. an adversarial-patch pixel.

#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "shapecomp/mask.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <unistd.h>
#endif

namespace shapecomp::pbm {

enum class Format { Plain, Raw };  // P1, P4

class PbmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view data) : data_(data) {}

  [[nodiscard]] bool done() const noexcept { return pos_ >= data_.size(); }
  [[nodiscard]] std::size_t pos() const noexcept { return pos_; }
  [[nodiscard]] std::string_view rest() const noexcept { return data_.substr(pos_); }

  void skip_space_and_comments() {
    while (!done()) {
      const char ch = data_[pos_];
      if (ch == '#') {
        while (!done() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::size_t read_positive(const char* what) {
    skip_space_and_comments();
    if (done() || !std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      throw PbmError(std::string("pbm: expected ") + what);
    }
    std::size_t v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      const auto digit = static_cast<std::size_t>(data_[pos_] - '0');
      if (v > (std::numeric_limits<std::uint32_t>::max() - digit) / 10) {
        throw PbmError(std::string("pbm: ") + what + " too large");
      }
      v = v * 10 + digit;
      ++pos_;
    }
    if (v == 0) throw PbmError(std::string("pbm: ") + what + " must be positive");
    return v;
  }

  char get() { return data_[pos_++]; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

[[nodiscard]] inline BinaryMask decode(std::string_view data) {
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '1' && data[1] != '4')) {
    throw PbmError("pbm: missing P1/P4 magic number");
  }
  const bool raw = data[1] == '4';
  detail::Cursor in(data.substr(2));
  const std::size_t width = in.read_positive("width");
  const std::size_t height = in.read_positive("height");
  if (width * height > (std::size_t{1} << 31)) throw PbmError("pbm: image too large");
  BinaryMask mask(height, width);

  if (raw) {
    if (in.done() || !std::isspace(static_cast<unsigned char>(in.get()))) {
      throw PbmError("pbm: expected a single whitespace before raster");
    }
    const std::size_t stride = (width + 7) / 8;
    const std::string_view raster = in.rest();
    if (raster.size() < stride * height) throw PbmError("pbm: truncated P4 raster");
    for (std::size_t r = 0; r < height; ++r) {
      auto line = mask.row(r);
      for (std::size_t c = 0; c < width; ++c) {
        const auto byte = static_cast<unsigned char>(raster[r * stride + c / 8]);
        line[c] = (byte >> (7 - c % 8)) & 1U;
      }
    }
  } else {
    for (std::size_t r = 0; r < height; ++r) {
      auto line = mask.row(r);
      for (std::size_t c = 0; c < width; ++c) {
        in.skip_space_and_comments();
        if (in.done()) throw PbmError("pbm: truncated P1 raster");
        const char ch = in.get();
        if (ch != '0' && ch != '1') throw PbmError(std::string("pbm: bad P1 pixel '") + ch + "'");
        line[c] = ch == '1' ? 1 : 0;
      }
    }
  }
  return mask;
}

[[nodiscard]] inline std::string encode(const BinaryMask& mask, Format format) {
  std::string out = format == Format::Raw ? "P4\n" : "P1\n";
  out += std::to_string(mask.cols()) + " " + std::to_string(mask.rows()) + "\n";
  if (format == Format::Raw) {
    const std::size_t stride = (mask.cols() + 7) / 8;
    std::string raster(stride * mask.rows(), '\0');
    for (std::size_t r = 0; r < mask.rows(); ++r) {
      auto line = mask.row(r);
      for (std::size_t c = 0; c < line.size(); ++c) {
        if (line[c]) raster[r * stride + c / 8] |= static_cast<char>(0x80U >> (c % 8));
      }
    }
    out += raster;
  } else {
    // plain PBM lines stay within 70 characters
    for (std::size_t r = 0; r < mask.rows(); ++r) {
      auto line = mask.row(r);
      for (std::size_t c = 0; c < line.size(); ++c) {
        out += line[c] ? '1' : '0';
        if ((c + 1) % 70 == 0 && c + 1 < line.size()) out += '\n';
      }
      out += '\n';
    }
  }
  return out;
}

/// Any I/O failure on a mask file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return data;
}

/// Writes through a temporary file in the same directory, then renames.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  std::filesystem::path tmp = path;
#if defined(__unix__) || defined(__APPLE__)
  tmp += ".tmp." + std::to_string(::getpid());
#else
  tmp += ".tmp";
#endif
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

[[nodiscard]] inline BinaryMask load(const std::filesystem::path& path) {
  return decode(read_file(path));
}

inline void save(const std::filesystem::path& path, const BinaryMask& mask, Format format) {
  write_file_atomic(path, encode(mask, format));
}

}  // namespace shapecomp::pbm
