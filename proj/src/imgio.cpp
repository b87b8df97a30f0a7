#include "twophase/imgio.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "twophase/error.hpp"

namespace twophase {

namespace {

constexpr double kRed = 0.299;
constexpr double kGreen = 0.587;
constexpr double kBlue = 0.114;

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return bytes;
}

bool is_png(const std::vector<unsigned char>& bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

bool is_pgm(const std::vector<unsigned char>& bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5');
}

// ---------------------------------------------------------------- PGM

class PgmCursor {
 public:
  PgmCursor(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  long header_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail("expected an integer");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1'000'000'000L) fail("header value too large");
    }
    return value;
  }

  long sample() { return header_int(); }

  /// Raster starts after exactly one whitespace byte following maxval.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("missing raster separator");
    return pos_ + 1;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw UnsupportedFormatError("malformed PGM '" + path_.string() + "': " + what);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 2;
};

LoadedImage decode_pgm(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  const bool ascii = bytes[1] == '2';
  PgmCursor cur(bytes, path);
  const long width = cur.header_int();
  const long height = cur.header_int();
  const long maxval = cur.header_int();
  if (width == 0 || height == 0) throw EmptyImageError("image '" + path.string() + "' has zero size");
  if (maxval < 1 || maxval > 65535) cur.fail("maxval must be in [1, 65535]");
  if (width > 1'000'000 || height > 1'000'000) cur.fail("dimensions too large");

  LoadedImage out;
  out.source = {path, ImageFormat::pgm, maxval > 255 ? 16 : 8, 1, static_cast<int>(width),
                static_cast<int>(height)};
  out.pixels = ScalarField(static_cast<int>(width), static_cast<int>(height));
  const std::size_t count = out.pixels.size();
  const double scale = 1.0 / static_cast<double>(maxval);

  const auto store = [&](std::size_t k, long v) {
    if (v > maxval) cur.fail("sample exceeds maxval");
    out.pixels[k] = static_cast<double>(v) * scale;
  };

  if (ascii) {
    for (std::size_t k = 0; k < count; ++k) store(k, cur.sample());
  } else {
    const std::size_t offset = cur.raster_offset();
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (bytes.size() < offset + count * bytes_per) cur.fail("raster is truncated");
    const unsigned char* p = bytes.data() + offset;
    for (std::size_t k = 0; k < count; ++k) {
      const long v = bytes_per == 2 ? (static_cast<long>(p[2 * k]) << 8) | p[2 * k + 1] : p[k];
      store(k, v);
    }
  }
  return out;
}

void write_pgm(const Mask& mask, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
  std::string raster(mask.size(), '\0');
  for (std::size_t k = 0; k < mask.size(); ++k) raster[k] = mask[k] ? '\xff' : '\0';
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------- PNG

struct MemoryReader {
  const std::vector<unsigned char>* bytes;
  std::size_t pos;
};

void read_from_memory(png_structp png, png_bytep data, png_size_t length) {
  auto* src = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (src->pos + length > src->bytes->size()) png_error(png, "unexpected end of PNG data");
  std::copy_n(src->bytes->data() + src->pos, length, data);
  src->pos += length;
}

void capture_png_error(png_structp png, png_const_charp message) {
  auto* buffer = static_cast<std::string*>(png_get_error_ptr(png));
  if (buffer) *buffer = message;
  png_longjmp(png, 1);
}

void ignore_png_warning(png_structp, png_const_charp) {}

struct PngRaster {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  int bit_depth = 8;
  int channels = 1;
  std::vector<unsigned char> rows;  // host-endian 8- or 16-bit samples
  std::vector<png_bytep> row_ptrs;
};

// All locals touched after setjmp live in `raster` / `message`, which outlive the jump.
bool decode_png_raster(const std::vector<unsigned char>& bytes, PngRaster& raster,
                       std::string& message) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, capture_png_error, ignore_png_warning);
  if (!png) {
    message = "out of memory";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    message = "out of memory";
    return false;
  }
  MemoryReader reader{&bytes, 0};

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }

  png_set_read_fn(png, &reader, read_from_memory);
  png_read_info(png, info);

  raster.width = png_get_image_width(png, info);
  raster.height = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__
  if (png_get_bit_depth(png, info) == 16) png_set_swap(png);
#endif
  png_read_update_info(png, info);

  raster.bit_depth = png_get_bit_depth(png, info);
  raster.channels = png_get_channels(png, info);
  const png_size_t stride = png_get_rowbytes(png, info);
  raster.rows.resize(stride * raster.height);
  raster.row_ptrs.resize(raster.height);
  for (std::uint32_t j = 0; j < raster.height; ++j)
    raster.row_ptrs[j] = raster.rows.data() + j * stride;
  png_read_image(png, raster.row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

LoadedImage decode_png(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  PngRaster raster;
  std::string message;
  if (!decode_png_raster(bytes, raster, message)) {
    if (raster.width == 0 || raster.height == 0) {
      if (message.find("Image width is zero") != std::string::npos ||
          message.find("Image height is zero") != std::string::npos)
        throw EmptyImageError("image '" + path.string() + "' has zero size");
    }
    throw UnsupportedFormatError("cannot decode PNG '" + path.string() + "': " + message);
  }
  if (raster.width == 0 || raster.height == 0)
    throw EmptyImageError("image '" + path.string() + "' has zero size");
  if (raster.channels != 1 && raster.channels != 3)
    throw UnsupportedFormatError("PNG '" + path.string() + "' has " +
                                 std::to_string(raster.channels) + " channels");

  LoadedImage out;
  out.source = {path,
                ImageFormat::png,
                raster.bit_depth,
                raster.channels,
                static_cast<int>(raster.width),
                static_cast<int>(raster.height)};
  out.pixels = ScalarField(out.source.width, out.source.height);
  const bool wide = raster.bit_depth == 16;
  const double scale = 1.0 / (wide ? 65535.0 : 255.0);

  const auto sample = [&](std::size_t s) -> double {
    if (wide) {
      std::uint16_t v;
      std::memcpy(&v, raster.rows.data() + 2 * s, sizeof v);
      return v;
    }
    return raster.rows[s];
  };

  // Rows are tightly packed: channels * depth is always a whole number of bytes here.
  for (std::size_t k = 0; k < out.pixels.size(); ++k) {
    if (raster.channels == 1) {
      out.pixels[k] = sample(k) * scale;
    } else {
      const double y = kRed * sample(3 * k) + kGreen * sample(3 * k + 1) + kBlue * sample(3 * k + 2);
      out.pixels[k] = std::clamp(y * scale, 0.0, 1.0);
    }
  }
  return out;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};

bool encode_png(std::FILE* file, int width, int height, int bit_depth,
                const std::vector<unsigned char>& rows, std::string& message) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, capture_png_error, ignore_png_warning);
  if (!png) {
    message = "out of memory";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    message = "out of memory";
    return false;
  }
  std::vector<png_bytep> row_ptrs(static_cast<std::size_t>(height));

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }

  png_init_io(png, file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_LITTLE_ENDIAN__
  if (bit_depth == 16) png_set_swap(png);
#endif
  const std::size_t stride = static_cast<std::size_t>(width) * (bit_depth == 16 ? 2 : 1);
  for (int j = 0; j < height; ++j)
    row_ptrs[static_cast<std::size_t>(j)] =
        const_cast<png_bytep>(rows.data() + static_cast<std::size_t>(j) * stride);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void write_gray_png(const std::filesystem::path& path, int width, int height, int bit_depth,
                    const std::vector<unsigned char>& rows) {
  if (width <= 0 || height <= 0) throw EmptyImageError("cannot write an empty image");
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  std::string message;
  if (!encode_png(file.get(), width, height, bit_depth, rows, message))
    throw IoError("failed writing PNG '" + path.string() + "': " + message);
  if (std::fflush(file.get()) != 0) throw IoError("failed writing '" + path.string() + "'");
}

bool has_pgm_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".pgm" || ext == ".pnm";
}

}  // namespace

LoadedImage load_image(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  if (is_png(bytes)) return decode_png(bytes, path);
  if (is_pgm(bytes)) return decode_pgm(bytes, path);
  throw UnsupportedFormatError("'" + path.string() + "' is neither PGM (P2/P5) nor PNG");
}

ScalarField read_image(const std::filesystem::path& path) { return load_image(path).pixels; }

void write_mask(const Mask& mask, const std::filesystem::path& path) {
  if (mask.empty()) throw EmptyImageError("cannot write an empty mask");
  if (has_pgm_extension(path)) {
    write_pgm(mask, path);
    return;
  }
  std::vector<unsigned char> rows(mask.size());
  for (std::size_t k = 0; k < mask.size(); ++k) rows[k] = mask[k] ? 255 : 0;
  write_gray_png(path, mask.width(), mask.height(), 8, rows);
}

void write_field(const ScalarField& u, const std::filesystem::path& path) {
  if (u.empty()) throw EmptyImageError("cannot write an empty field");
  std::vector<unsigned char> rows(u.size() * 2);
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double v = u[k];
    if (!(v >= 0.0 && v <= 1.0))
      throw ContractError("write_field: value " + std::to_string(v) + " outside [0, 1]");
    const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    std::memcpy(rows.data() + 2 * k, &q, sizeof q);
  }
  write_gray_png(path, u.width(), u.height(), 16, rows);
}

void write_energy_csv(std::span<const double> trace, const std::filesystem::path& path) {
  if (trace.empty()) throw ContractError("write_energy_csv: empty trace");
  std::string text = "iteration,energy\n";
  char buf[64];
  for (std::size_t k = 0; k < trace.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", k, trace[k]);
    text += buf;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<double> read_energy_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "iteration,energy")
    throw UnsupportedFormatError("'" + path.string() + "' lacks the iteration,energy header");
  std::vector<double> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw UnsupportedFormatError("malformed CSV row in '" + path.string() + "'");
    const std::size_t row = std::stoul(line.substr(0, comma));
    if (row != trace.size())
      throw UnsupportedFormatError("non-consecutive iteration index in '" + path.string() + "'");
    trace.push_back(std::stod(line.substr(comma + 1)));
  }
  return trace;
}

Mask to_mask(const ScalarField& f) {
  Mask mask(f.width(), f.height());
  for (std::size_t k = 0; k < f.size(); ++k) mask[k] = f[k] >= 0.5 ? 1 : 0;
  return mask;
}

}  // namespace twophase
