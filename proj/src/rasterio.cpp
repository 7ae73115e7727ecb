#include "mroi/rasterio.hpp"

#include <png.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <thread>

#include "mroi/errors.hpp"

namespace mroi {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::io, "read failed for " + path.string());
  return bytes;
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// ---------------------------------------------------------------------------
// PNM (P5 / P6, maxval 255)

struct PnmCursor {
  const std::string& bytes;
  std::size_t pos = 0;

  void skip_space_and_comments() {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  long next_int(const fs::path& path) {
    skip_space_and_comments();
    long v = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > (1L << 24)) throw Error(ErrorCode::malformed, "header value too large in " + path.string());
      ++pos;
      ++digits;
    }
    if (digits == 0) throw Error(ErrorCode::malformed, "bad PNM header in " + path.string());
    return v;
  }
};

RasterImage decode_pnm(const std::string& bytes, const fs::path& path) {
  const int channels = bytes[1] == '5' ? 1 : 3;
  PnmCursor cur{bytes, 2};
  const long width = cur.next_int(path);
  const long height = cur.next_int(path);
  const long maxval = cur.next_int(path);
  if (maxval > 255) {
    throw Error(ErrorCode::unsupported_bit_depth, "PNM maxval " + std::to_string(maxval) + " in " + path.string());
  }
  if (maxval != 255) {
    throw Error(ErrorCode::unsupported_format, "PNM maxval must be 255 in " + path.string());
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (cur.pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[cur.pos]))) {
    throw Error(ErrorCode::malformed, "bad PNM header in " + path.string());
  }
  ++cur.pos;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
  if (bytes.size() - cur.pos < n) throw Error(ErrorCode::malformed, "truncated PNM raster in " + path.string());
  std::vector<std::uint8_t> samples(bytes.begin() + static_cast<std::ptrdiff_t>(cur.pos),
                                    bytes.begin() + static_cast<std::ptrdiff_t>(cur.pos + n));
  return RasterImage(static_cast<int>(width), static_cast<int>(height), channels, std::move(samples));
}

std::string encode_pnm(const RasterImage& img) {
  std::ostringstream out;
  out << (img.channels() == 1 ? "P5" : "P6") << '\n' << img.width() << ' ' << img.height() << "\n255\n";
  std::string bytes = out.str();
  const auto s = img.samples();
  bytes.append(reinterpret_cast<const char*>(s.data()), s.size());
  return bytes;
}

// ---------------------------------------------------------------------------
// PNG via libpng

struct PngReadSource {
  const std::string& bytes;
  std::size_t pos = 0;
};

void png_read_from_buffer(png_structp png, png_bytep out, png_size_t len) {
  auto* src = static_cast<PngReadSource*>(png_get_io_ptr(png));
  if (src->bytes.size() - src->pos < len) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, src->bytes.data() + src->pos, len);
  src->pos += len;
}

void png_write_to_string(png_structp png, png_bytep data, png_size_t len) {
  auto* dst = static_cast<std::string*>(png_get_io_ptr(png));
  dst->append(reinterpret_cast<const char*>(data), len);
}

void png_flush_noop(png_structp) {}

// libpng reports fatal errors through longjmp; the message is captured here
// and rethrown as an exception once control is back in C++ frames.
struct PngErrorSink {
  std::string message;
};

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  if (sink) sink->message = msg;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

RasterImage decode_png(const std::string& bytes, const fs::path& path) {
  PngErrorSink sink;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, png_error_handler, png_warning_handler);
  if (!png) throw Error(ErrorCode::io, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::io, "libpng init failed");
  }

  PngReadSource src{bytes};
  // Sample storage must outlive the setjmp frame without being a
  // non-trivially-destructible local inside it.
  std::vector<std::uint8_t> samples;
  std::vector<png_bytep> rows;
  // Written after setjmp and read after the jump target returns.
  volatile int width = 0;
  volatile int height = 0;
  volatile int channels = 0;
  volatile bool bad_depth = false;
  volatile int depth_seen = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::malformed, "PNG decode failed for " + path.string() + ": " + sink.message);
  }

  png_set_read_fn(png, &src, png_read_from_buffer);
  png_read_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  depth_seen = bit_depth;

  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
    channels = 3;
  } else if (bit_depth != 8) {
    bad_depth = true;
  } else if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    channels = 1;
  } else {
    channels = 3;
  }

  if (!bad_depth) {
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) {
      // tRNS only adds alpha; drop it entirely.
      png_set_tRNS_to_alpha(png);
      png_set_strip_alpha(png);
    }
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * channels) {
      png_error(png, "unexpected row layout after transforms");
    }
    samples.resize(static_cast<std::size_t>(width) * height * channels);
    rows.resize(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) {
      rows[static_cast<std::size_t>(y)] = samples.data() + static_cast<std::size_t>(y) * width * channels;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  if (bad_depth) {
    throw Error(ErrorCode::unsupported_bit_depth,
                std::to_string(depth_seen) + "-bit PNG " + path.string() + " (only 8-bit is accepted)");
  }
  return RasterImage(width, height, channels, std::move(samples));
}

std::string encode_png(const RasterImage& img) {
  std::string out;
  PngErrorSink sink;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, png_error_handler, png_warning_handler);
  if (!png) throw Error(ErrorCode::io, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::io, "libpng init failed");
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  const auto s = img.samples();
  const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
  for (int y = 0; y < img.height(); ++y) {
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(s.data() + static_cast<std::size_t>(y) * stride);
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::io, "PNG encode failed: " + sink.message);
  }
  png_set_write_fn(png, &out, png_write_to_string, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
               img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

RasterImage plane_image(const ChannelPlane& plane) {
  const auto s = plane.samples();
  return RasterImage(plane.width(), plane.height(), 1, std::vector<std::uint8_t>(s.begin(), s.end()));
}

}  // namespace

RasterImage load_image(const fs::path& path) {
  const std::string bytes = read_file(path);
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0) {
    return decode_png(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
    return decode_pnm(bytes, path);
  }
  throw Error(ErrorCode::unsupported_format, path.string() + " is neither PNG nor binary PGM/PPM");
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000) + "." +
         std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::io, "write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::io, "cannot rename into " + path.string());
  }
}

void save_image(const RasterImage& img, const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_file_atomic(path, encode_png(img));
  } else if (ext == ".pgm" || ext == ".ppm") {
    if ((ext == ".pgm") != (img.channels() == 1)) {
      throw Error(ErrorCode::unsupported_format, "channel count does not match extension " + ext);
    }
    write_file_atomic(path, encode_pnm(img));
  } else {
    throw Error(ErrorCode::unsupported_format, "cannot write extension '" + ext + "'");
  }
}

void save_mask(const BinaryMask& mask, const fs::path& path) { save_plane(to_plane(mask), path); }

void save_plane(const ChannelPlane& plane, const fs::path& path) { save_image(plane_image(plane), path); }

std::array<ChannelPlane, 3> split_channels(const RasterImage& img) {
  const int w = img.width();
  const int h = img.height();
  if (img.channels() == 1) {
    const auto s = img.samples();
    ChannelPlane gray(w, h, std::vector<std::uint8_t>(s.begin(), s.end()));
    return {gray, gray, gray};
  }
  std::array<ChannelPlane, 3> planes{ChannelPlane(w, h), ChannelPlane(w, h), ChannelPlane(w, h)};
  const auto s = img.samples();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  for (int c = 0; c < 3; ++c) {
    auto dst = planes[static_cast<std::size_t>(c)].samples();
    for (std::size_t i = 0; i < n; ++i) dst[i] = s[i * 3 + static_cast<std::size_t>(c)];
  }
  return planes;
}

RasterImage interleave_channels(const std::array<ChannelPlane, 3>& planes) {
  const int w = planes[0].width();
  const int h = planes[0].height();
  for (const auto& p : planes) {
    if (p.width() != w || p.height() != h) {
      throw Error(ErrorCode::dimension_mismatch, "channel planes differ in size");
    }
  }
  RasterImage img(w, h, 3);
  auto dst = img.samples();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  for (int c = 0; c < 3; ++c) {
    const auto src = planes[static_cast<std::size_t>(c)].samples();
    for (std::size_t i = 0; i < n; ++i) dst[i * 3 + static_cast<std::size_t>(c)] = src[i];
  }
  return img;
}

RasterImage to_rgb(const RasterImage& img) {
  if (img.channels() == 3) return img;
  return interleave_channels(split_channels(img));
}

RasterImage rasterize_overlay(const OverlaySpec& spec) {
  RasterImage out = to_rgb(spec.base);
  const int w = out.width();
  const int h = out.height();

  if (spec.mask) {
    if (spec.mask->width() != w || spec.mask->height() != h) {
      throw Error(ErrorCode::dimension_mismatch, "overlay mask does not match base image");
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!spec.mask->test(x, y)) continue;
        for (int c = 0; c < 3; ++c) {
          auto& px = out.at(x, y, c);
          px = static_cast<std::uint8_t>((px + spec.tint[static_cast<std::size_t>(c)] + 1) / 2);
        }
      }
    }
  }

  for (const auto& box : spec.boxes) {
    const Rect& r = box.rect;
    if (!r.within(w, h)) throw Error(ErrorCode::malformed, "overlay box outside base image");
    if (r.empty()) continue;
    auto paint = [&](int x, int y) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = box.color[static_cast<std::size_t>(c)];
    };
    for (int x = r.x; x < r.right(); ++x) {
      paint(x, r.y);
      paint(x, r.bottom() - 1);
    }
    for (int y = r.y; y < r.bottom(); ++y) {
      paint(r.x, y);
      paint(r.right() - 1, y);
    }
  }
  return out;
}

void render_overlay(const OverlaySpec& spec, const fs::path& path) {
  write_file_atomic(path, encode_png(rasterize_overlay(spec)));
}

}  // namespace mroi
