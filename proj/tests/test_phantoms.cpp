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

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "spartomo/phantoms.hpp"

using namespace spartomo;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("spartomo_" + name); }

}  // namespace

TEST(Phantoms, BlocksUseFourLevels) {
  const Image img = generate_phantom(PhantomKind::blocks, 16, 7);
  const std::set<double> allowed{0.0, 0.25, 0.5, 1.0};
  for (double v : img.values()) EXPECT_TRUE(allowed.count(v)) << v;
}

TEST(Phantoms, SheppLoganIsDeterministic) {
  const Image a = generate_phantom(PhantomKind::shepp_logan_like, 64, 0);
  const Image b = generate_phantom(PhantomKind::shepp_logan_like, 64, 0);
  EXPECT_EQ(a.values(), b.values());
}

TEST(Phantoms, PlantRangeIsUnit) {
  const Image img = generate_phantom(PhantomKind::plant_like, 128, 3);
  EXPECT_GE(img.min(), 0.0);
  EXPECT_EQ(img.max(), 1.0);
}

TEST(Phantoms, SeedsChangeTheImage) {
  const Image a = generate_phantom(PhantomKind::plant_like, 32, 1);
  const Image b = generate_phantom(PhantomKind::plant_like, 32, 2);
  EXPECT_NE(a.values(), b.values());
}

TEST(Phantoms, RejectsSmallSideAndUnknownKind) {
  EXPECT_THROW(generate_phantom(PhantomKind::blocks, 8, 0), std::invalid_argument);
  EXPECT_THROW(parse_phantom_kind("lotus"), std::invalid_argument);
  EXPECT_EQ(parse_phantom_kind("plant_like"), PhantomKind::plant_like);
}

TEST(RescaleClip, Examples) {
  EXPECT_EQ(rescale_clip(Vector{-1, 2, 4}), (Vector{0, 0.5, 1}));
  EXPECT_EQ(rescale_clip(Vector{0, 1}), (Vector{0, 1}));
  EXPECT_EQ(rescale_clip(Vector{-3, -1, 2}), (Vector{0, 0, 1}));
  EXPECT_THROW(rescale_clip(Vector{-1, 0}), std::invalid_argument);
}

TEST(RescaleClip, Idempotent) {
  Image img = generate_phantom(PhantomKind::shepp_logan_like, 32, 5);
  for (std::size_t i = 0; i < img.size(); ++i) img.values()[i] = 3.0 * img.values()[i] - 0.7;
  const Image once = rescale_clip(img);
  EXPECT_EQ(rescale_clip(once).values(), once.values());
}

TEST(ImageIO, RawRoundTripIsExact) {
  const Image img = generate_phantom(PhantomKind::plant_like, 32, 4);
  const fs::path path = temp_path("raw.f64");
  save_raw_f64(path, img.span());
  const Image back = load_image(path, ImageFormat::raw_f64);
  EXPECT_EQ(back.side(), 32);
  EXPECT_EQ(back.values(), img.values());
  fs::remove(path);
}

TEST(ImageIO, PgmRoundTripQuantizes) {
  const Image img = generate_phantom(PhantomKind::blocks, 16, 7);
  const fs::path path = temp_path("img.pgm");
  save_pgm(path, img);
  const Image back = load_image(path, ImageFormat::pgm);
  for (std::size_t i = 0; i < img.size(); ++i) EXPECT_NEAR(back.values()[i], img.values()[i], 0.5 / 255 + 1e-12);
  fs::remove(path);
}

TEST(ImageIO, SixteenBitPgm) {
  const fs::path path = temp_path("img16.pgm");
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n# comment\n2 2\n65535\n";
    const unsigned char px[] = {0, 0, 0x80, 0x00, 0xff, 0xff, 0x40, 0x00};
    out.write(reinterpret_cast<const char*>(px), sizeof px);
  }
  const Image img = load_image(path, ImageFormat::pgm);
  EXPECT_DOUBLE_EQ(img(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(img(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(img(0, 1), 32768.0 / 65535.0);
  fs::remove(path);
}

TEST(ImageIO, MalformedInputsThrow) {
  const fs::path path = temp_path("bad.pgm");
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n3 2\n255\n" << std::string(6, '\x10');
  }
  EXPECT_THROW(load_image(path, ImageFormat::pgm), std::runtime_error);
  {
    std::ofstream out(path, std::ios::binary);
    out << "P2\n2 2\n255\n";
  }
  EXPECT_THROW(load_image(path, ImageFormat::pgm), std::runtime_error);
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n2 2\n255\n" << std::string(2, '\x10');
  }
  EXPECT_THROW(load_image(path, ImageFormat::pgm), std::runtime_error);
  {
    std::ofstream out(path, std::ios::binary);
    const double v[3] = {1, 2, 3};
    out.write(reinterpret_cast<const char*>(v), sizeof v);
  }
  EXPECT_THROW(load_image(path, ImageFormat::raw_f64), std::runtime_error);
  fs::remove(path);
}
