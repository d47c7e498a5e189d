#include "pnp/pnm.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "pnp/errors.hpp"

namespace pnp {

namespace {

// Reads the next header token, skipping whitespace and '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) continue;
    tok.push_back(static_cast<char>(c));
    while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') tok.push_back(static_cast<char>(c));
    // leave the delimiter in the stream: the caller checks the single
    // whitespace byte that must terminate the header
    if (c != EOF) in.unget();
    return tok;
  }
  return tok;
}

int parse_header_int(std::istream& in, const char* what) {
  const std::string tok = next_token(in);
  if (tok.empty()) throw IoError(IoError::Kind::malformed_header, std::string("missing ") + what);
  int value = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9')
      throw IoError(IoError::Kind::malformed_header, std::string("non-numeric ") + what + ": '" + tok + "'");
    value = value * 10 + (ch - '0');
    if (value > 1 << 30) throw IoError(IoError::Kind::malformed_header, std::string(what) + " out of range");
  }
  return value;
}

}  // namespace

ImageBuffer read_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Kind::file_access, "cannot open " + path);

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != 'P')
    throw IoError(IoError::Kind::unsupported_magic, path + ": not a PNM file");
  if (m1 != '5' && m1 != '6')
    throw IoError(IoError::Kind::unsupported_magic,
                  path + ": unsupported magic P" + std::string(1, m1) + " (binary P5/P6 only)");
  const int channels = m1 == '5' ? 1 : 3;

  const int width = parse_header_int(in, "width");
  const int height = parse_header_int(in, "height");
  const int maxval = parse_header_int(in, "maxval");
  if (width <= 0 || height <= 0)
    throw IoError(IoError::Kind::malformed_header, path + ": empty image dimensions");
  if (maxval <= 0 || maxval > 65535)
    throw IoError(IoError::Kind::malformed_header, path + ": maxval out of range");
  // exactly one whitespace byte separates header and payload
  const int sep = in.get();
  if (sep == EOF || !std::isspace(sep))
    throw IoError(IoError::Kind::malformed_header, path + ": missing header terminator");

  const int bytes_per_sample = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned char> raw(n * bytes_per_sample);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw IoError(IoError::Kind::truncated_payload,
                  path + ": expected " + std::to_string(raw.size()) + " payload bytes, got " +
                      std::to_string(in.gcount()));

  ImageBuffer img(height, width, channels);
  const double scale = 1.0 / maxval;
  if (bytes_per_sample == 1) {
    for (std::size_t i = 0; i < n; ++i) img.data[i] = raw[i] * scale;
  } else {
    // 16-bit samples are big-endian per the format
    for (std::size_t i = 0; i < n; ++i)
      img.data[i] = ((raw[2 * i] << 8) | raw[2 * i + 1]) * scale;
  }
  return img;
}

void write_image(const std::string& path, const ImageBuffer& img, int bits) {
  if (bits != 8 && bits != 16) throw std::invalid_argument("write_image: bits must be 8 or 16");
  if (img.channels != 1 && img.channels != 3)
    throw std::invalid_argument("write_image: channels must be 1 or 3");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoError::Kind::file_access, "cannot create " + path);

  const int maxval = bits == 8 ? 255 : 65535;
  out << (img.channels == 1 ? "P5" : "P6") << "\n"
      << img.width << " " << img.height << "\n"
      << maxval << "\n";

  std::vector<unsigned char> raw;
  raw.reserve(img.size() * (bits / 8));
  for (double v : img.data) {
    double c = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    const int q = static_cast<int>(std::lround(c * maxval));
    if (bits == 8) {
      raw.push_back(static_cast<unsigned char>(q));
    } else {
      raw.push_back(static_cast<unsigned char>(q >> 8));
      raw.push_back(static_cast<unsigned char>(q & 0xff));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError(IoError::Kind::file_access, "short write to " + path);
}

}  // namespace pnp
