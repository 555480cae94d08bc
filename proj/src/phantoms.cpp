/*
Copyright 2026 The spartomo Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "spartomo/phantoms.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

namespace spartomo {

namespace {

// Supersampled rasterization of an intensity field given on [-0.5, 0.5]^2,
// with y pointing up.
template <class Field>
Image rasterize(int side, int oversample, Field&& field) {
  Image img(side);
  const double h = 1.0 / side;
  const double sub = h / oversample;
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      double acc = 0.0;
      for (int i = 0; i < oversample; ++i) {
        for (int j = 0; j < oversample; ++j) {
          const double x = -0.5 + c * h + (j + 0.5) * sub;
          const double y = 0.5 - r * h - (i + 0.5) * sub;
          acc += field(x, y);
        }
      }
      img(r, c) = acc / (oversample * oversample);
    }
  }
  return img;
}

Image normalize_unit_max(Image img) {
  for (double& v : img.values()) v = std::max(v, 0.0);
  const double m = img.max();
  if (m <= 0.0) throw std::logic_error("phantom generator produced an empty image");
  for (double& v : img.values()) v /= m;
  return img;
}

struct Ellipse {
  double amplitude, a, b, x0, y0, phi_deg;
};

constexpr std::array<Ellipse, 10> kSheppLogan{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
    {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
}};

Image shepp_logan(int side, std::uint64_t seed) {
  auto ellipses = kSheppLogan;
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.02, 0.02);
    for (auto& e : ellipses) {
      e.x0 += jitter(rng);
      e.y0 += jitter(rng);
      e.phi_deg += 50.0 * jitter(rng);
    }
  }
  return normalize_unit_max(rasterize(side, 3, [&](double x, double y) {
    // Shepp-Logan lives on [-1, 1]^2.
    const double u = 2.0 * x, v = 2.0 * y;
    double val = 0.0;
    for (const auto& e : ellipses) {
      const double phi = e.phi_deg * kPi / 180.0;
      const double du = u - e.x0, dv = v - e.y0;
      const double ru = (du * std::cos(phi) + dv * std::sin(phi)) / e.a;
      const double rv = (-du * std::sin(phi) + dv * std::cos(phi)) / e.b;
      if (ru * ru + rv * rv <= 1.0) val += e.amplitude;
    }
    return val;
  }));
}

struct Leaf {
  double cx, cy, angle, length, width, level;
};

Image plant(int side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const double bend = 0.05 + 0.05 * unif(rng);
  const double freq = 2.0 + 2.0 * unif(rng);
  const double phase = 2.0 * kPi * unif(rng);
  auto stem_x = [&](double y) { return bend * std::sin(freq * y + phase); };
  const double stem_bottom = -0.36, stem_top = 0.24;
  const double stem_half_width = 0.018;

  std::vector<Leaf> leaves;
  const int n_leaves = 4 + int(3.0 * unif(rng));
  for (int i = 0; i < n_leaves; ++i) {
    const double t = (i + 0.5 + 0.3 * (unif(rng) - 0.5)) / n_leaves;
    const double y = stem_bottom + 0.1 + t * (stem_top - stem_bottom - 0.15);
    const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
    const double angle = sgn * (0.35 + 0.5 * unif(rng));
    const double length = 0.12 + 0.06 * unif(rng);
    const double width = 0.035 + 0.02 * unif(rng);
    // Offset by one semi-axis so the leaf base touches the stem.
    const double cx = stem_x(y) + sgn * length * std::cos(angle);
    const double cy = y + length * std::sin(std::abs(angle));
    leaves.push_back({cx, cy, sgn > 0 ? std::abs(angle) : kPi - std::abs(angle), length, width,
                      0.55 + 0.3 * unif(rng)});
  }
  const double head_r = 0.07 + 0.03 * unif(rng);
  const double head_x = stem_x(stem_top + head_r * 0.6);
  const double head_y = stem_top + head_r * 0.6;

  return normalize_unit_max(rasterize(side, 3, [&](double x, double y) {
    double val = 0.0;
    // Pot: trapezoid at the bottom with a soft vertical gradient.
    if (y < -0.36 && y > -0.47) {
      const double half = 0.16 + 0.35 * (y + 0.47) * 0.5;
      if (std::abs(x) < half) val = std::max(val, 0.25 + 0.1 * (y + 0.47) / 0.11);
    }
    if (y >= stem_bottom - 0.01 && y <= stem_top + 0.02) {
      const double d = std::abs(x - stem_x(y));
      if (d < stem_half_width) val = std::max(val, 0.45 + 0.2 * (y - stem_bottom));
    }
    for (const auto& lf : leaves) {
      const double dx = x - lf.cx, dy = y - lf.cy;
      const double u = (dx * std::cos(lf.angle) + dy * std::sin(lf.angle)) / lf.length;
      // Slight curvature of the leaf blade.
      const double v = (-dx * std::sin(lf.angle) + dy * std::cos(lf.angle) - 0.03 * u * u) / lf.width;
      const double r2 = u * u + v * v;
      if (r2 <= 1.0) {
        double shade = lf.level * (0.75 + 0.25 * (1.0 - r2));
        if (std::abs(v) < 0.08) shade *= 0.8;  // midrib
        val = std::max(val, shade);
      }
    }
    const double hr = std::hypot(x - head_x, y - head_y) / head_r;
    if (hr <= 1.0) val = std::max(val, 0.7 + 0.3 * std::cos(0.5 * kPi * hr));
    return val;
  }));
}

Image blocks(int side, std::uint64_t seed) {
  static constexpr std::array<double, 3> kLevels{1.0, 0.5, 0.25};
  std::mt19937_64 rng(seed);
  Image img(side);
  const int n_blocks = 3 + int(rng() % 4);
  for (int b = 0; b < n_blocks; ++b) {
    const int h = 2 + int(rng() % std::uint64_t(side / 3));
    const int w = 2 + int(rng() % std::uint64_t(side / 3));
    const int r0 = int(rng() % std::uint64_t(side - h));
    const int c0 = int(rng() % std::uint64_t(side - w));
    // The first block is always at full intensity so that max = 1.
    const double level = b == 0 ? 1.0 : kLevels[rng() % kLevels.size()];
    for (int r = r0; r < r0 + h; ++r)
      for (int c = c0; c < c0 + w; ++c) img(r, c) = level;
  }
  // Later blocks may cover the first one completely.
  bool has_one = false;
  for (double v : img.values()) has_one = has_one || v == 1.0;
  if (!has_one) img(side / 2, side / 2) = 1.0;
  return img;
}

std::string next_pgm_token(std::istream& in) {
  std::string tok;
  while (in) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string comment;
      std::getline(in, comment);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      break;
    }
  }
  in >> tok;
  if (tok.empty()) throw std::runtime_error("load_image: malformed PGM header");
  return tok;
}

int parse_positive(const std::string& tok) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("load_image: malformed PGM header token '" + tok + "'");
  }
  if (used != tok.size() || v <= 0)
    throw std::runtime_error("load_image: malformed PGM header token '" + tok + "'");
  return v;
}

Image rescale_by_max(int side, Vector values) {
  Image img(side, std::move(values));
  const double m = img.max();
  if (m <= 0.0) throw std::runtime_error("load_image: image has no positive pixel");
  for (double& v : img.values()) v /= m;
  return img;
}

Image load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_image: cannot open " + path.string());
  if (next_pgm_token(in) != "P5") throw std::runtime_error("load_image: not a binary PGM (P5)");
  const int width = parse_positive(next_pgm_token(in));
  const int height = parse_positive(next_pgm_token(in));
  const int maxval = parse_positive(next_pgm_token(in));
  if (maxval > 65535) throw std::runtime_error("load_image: PGM maxval out of range");
  in.get();  // single whitespace after maxval
  if (width != height) throw std::runtime_error("load_image: non-square image");
  const std::size_t n = std::size_t(width) * height;
  Vector values(n);
  if (maxval < 256) {
    std::vector<unsigned char> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(n));
    if (std::size_t(in.gcount()) != n) throw std::runtime_error("load_image: truncated PGM data");
    for (std::size_t i = 0; i < n; ++i) values[i] = buf[i];
  } else {
    std::vector<unsigned char> buf(2 * n);
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(2 * n));
    if (std::size_t(in.gcount()) != 2 * n) throw std::runtime_error("load_image: truncated PGM data");
    for (std::size_t i = 0; i < n; ++i) values[i] = (buf[2 * i] << 8) | buf[2 * i + 1];
  }
  return rescale_by_max(width, std::move(values));
}

Image load_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("load_image: cannot open " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % 8 != 0) throw std::runtime_error("load_image: raw_f64 length is not a multiple of 8");
  const std::size_t n = bytes / 8;
  const auto side = static_cast<int>(std::llround(std::sqrt(double(n))));
  if (std::size_t(side) * side != n) throw std::runtime_error("load_image: non-square raw_f64 data");
  in.seekg(0);
  std::vector<unsigned char> buf(bytes);
  in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(bytes));
  Vector values(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | buf[8 * i + b];
    values[i] = std::bit_cast<double>(bits);
  }
  return rescale_by_max(side, std::move(values));
}

}  // namespace

PhantomKind parse_phantom_kind(std::string_view name) {
  if (name == "plant_like") return PhantomKind::plant_like;
  if (name == "shepp_logan_like") return PhantomKind::shepp_logan_like;
  if (name == "blocks") return PhantomKind::blocks;
  throw std::invalid_argument("unsupported phantom kind '" + std::string(name) + "'");
}

std::string_view to_string(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::plant_like: return "plant_like";
    case PhantomKind::shepp_logan_like: return "shepp_logan_like";
    case PhantomKind::blocks: return "blocks";
  }
  return "unknown";
}

Image generate_phantom(PhantomKind kind, int side, std::uint64_t seed) {
  if (side < 16) throw std::invalid_argument("generate_phantom: side must be >= 16");
  switch (kind) {
    case PhantomKind::plant_like: return plant(side, seed);
    case PhantomKind::shepp_logan_like: return shepp_logan(side, seed);
    case PhantomKind::blocks: return blocks(side, seed);
  }
  throw std::invalid_argument("generate_phantom: unsupported kind");
}

Image load_image(const std::filesystem::path& path, ImageFormat format) {
  return format == ImageFormat::pgm ? load_pgm(path) : load_raw(path);
}

void save_raw_f64(const std::filesystem::path& path, std::span<const double> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_raw_f64: cannot open " + path.string());
  std::vector<unsigned char> buf(8 * values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) {
      buf[8 * i + b] = static_cast<unsigned char>(bits & 0xff);
      bits >>= 8;
    }
  }
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
}

void save_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_pgm: cannot open " + path.string());
  out << "P5\n" << img.side() << ' ' << img.side() << "\n255\n";
  std::vector<unsigned char> buf(img.size());
  for (std::size_t i = 0; i < img.size(); ++i)
    buf[i] = static_cast<unsigned char>(std::lround(255.0 * std::clamp(img.values()[i], 0.0, 1.0)));
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
}

Vector rescale_clip(std::span<const double> values) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values) m = std::max(m, v);
  if (!(m > 0.0)) throw std::invalid_argument("rescale_clip: all pixels are non-positive");
  Vector out(values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(values[i] / m, 0.0);
  return out;
}

Image rescale_clip(const Image& img) { return Image(img.side(), rescale_clip(img.span())); }

}  // namespace spartomo
