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

#include <filesystem>
#include <fstream>
#include <random>

#include "spartomo/phantoms.hpp"
#include "spartomo/transforms.hpp"

using namespace spartomo;

namespace {

Vector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (double& e : v) e = g(rng);
  return v;
}

TransformSpec spec_of(TransformKind kind) {
  TransformSpec s;
  s.kind = kind;
  return s;
}

double adjoint_mismatch(const Transform& m, std::uint64_t seed) {
  const Vector f = random_vector(m.image_size(), seed), c = random_vector(m.coeff_size(), seed + 1);
  Vector mf(m.coeff_size()), mtc(m.image_size());
  m.analysis(f, mf);
  m.adjoint(c, mtc);
  return std::abs(dot(mf, c) - dot(f, mtc)) / (norm2(f) * norm2(c));
}

}  // namespace

TEST(Haar, ConstantImageHasOneCoefficient) {
  TransformSpec s = spec_of(TransformKind::wavelet);
  s.levels = 5;
  auto m = make_transform(s, 32);
  Image img(32);
  std::fill(img.values().begin(), img.values().end(), 0.7);
  const CoeffStack c = m->analysis(img);
  EXPECT_NEAR(c.values[0], 0.7 * 32, 1e-12);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_NEAR(c.values[i], 0.0, 1e-12);
}

TEST(Haar, TwoByTwoBlock) {
  TransformSpec s = spec_of(TransformKind::wavelet);
  s.levels = 1;
  auto m = make_transform(s, 2);
  const Vector f{1, 2, 3, 4};
  Vector c(4);
  m->analysis(f, c);
  // average, horizontal, vertical, diagonal detail
  EXPECT_DOUBLE_EQ(c[0], 5.0);
  EXPECT_DOUBLE_EQ(c[1], -1.0);
  EXPECT_DOUBLE_EQ(c[2], -2.0);
  EXPECT_DOUBLE_EQ(c[3], 0.0);
}

TEST(Haar, PerfectReconstructionBothWays) {
  auto m = make_transform(spec_of(TransformKind::wavelet), 64);
  const Vector f = random_vector(m->image_size(), 3);
  Vector c(f.size()), back(f.size()), c2(f.size());
  m->analysis(f, c);
  m->adjoint(c, back);
  m->analysis(back, c2);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_NEAR(back[i], f[i], 1e-10);
    EXPECT_NEAR(c2[i], c[i], 1e-10);
  }
  EXPECT_NEAR(norm2(c), norm2(f), 1e-10 * norm2(f));
}

TEST(Haar, DefaultLevelsAndValidation) {
  EXPECT_EQ(default_wavelet_levels(128), 5);
  EXPECT_EQ(default_wavelet_levels(64), 4);
  TransformSpec s = spec_of(TransformKind::wavelet);
  s.levels = 3;
  EXPECT_THROW(make_transform(s, 12), std::invalid_argument);
}

TEST(Identity, CopiesValues) {
  auto m = make_transform(spec_of(TransformKind::identity), 8);
  const Vector f = random_vector(64, 1);
  Vector c(64);
  m->analysis(f, c);
  EXPECT_EQ(c, f);
  const FrameBounds b = frame_bounds(*m);
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
}

TEST(Transforms, AdjointDotTests) {
  for (TransformKind k : {TransformKind::identity, TransformKind::wavelet, TransformKind::shearlet}) {
    auto m = make_transform(spec_of(k), 64);
    EXPECT_LT(adjoint_mismatch(*m, 21), 1e-12) << to_string(k);
  }
}

TEST(Transforms, ZeroMapsToZero) {
  auto m = make_transform(spec_of(TransformKind::shearlet), 32);
  const CoeffStack c = m->analysis(Image(32));
  EXPECT_EQ(norm_inf(c.values), 0.0);
  CoeffStack z{m->sigma(), 32, Vector(m->coeff_size(), 0.0)};
  EXPECT_EQ(norm_inf(m->adjoint(z).values()), 0.0);
}

TEST(Shearlet, SubbandLayout) {
  auto m = make_transform(spec_of(TransformKind::shearlet), 64);
  EXPECT_EQ(m->sigma(), 33);
  EXPECT_FALSE(m->orthonormal());
  const CoeffStack c = m->analysis(generate_phantom(PhantomKind::plant_like, 64, 1));
  EXPECT_EQ(c.sigma, 33);
  const auto loc = c.locate(2 * 64 * 64 + 5 * 64 + 7);
  EXPECT_EQ(loc.subband, 2);
  EXPECT_EQ(loc.row, 5);
  EXPECT_EQ(loc.col, 7);
  EXPECT_EQ(m->coefficient_scale(0), 0);
  EXPECT_EQ(m->coefficient_scale(std::size_t(32) * 64 * 64), 3);
  EXPECT_THROW(make_transform(spec_of(TransformKind::shearlet), 16), std::invalid_argument);
}

TEST(Shearlet, DualFrameReconstruction) {
  auto m = make_transform(spec_of(TransformKind::shearlet), 64);
  const Image f = generate_phantom(PhantomKind::plant_like, 64, 2);
  const Image back = dual_frame_reconstruct(*m, m->analysis(f));
  double num = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) num += std::pow(back.values()[i] - f.values()[i], 2);
  EXPECT_LT(std::sqrt(num) / norm2(f.values()), 1e-8);
}

TEST(Shearlet, FrameBoundsArePositive) {
  auto m = make_transform(spec_of(TransformKind::shearlet), 64);
  const FrameBounds b = frame_bounds(*m);
  EXPECT_GT(b.lower, 0.0);
  EXPECT_GE(b.upper, b.lower);
}

TEST(Shearlet, TightOptionIsParseval) {
  TransformSpec s = spec_of(TransformKind::shearlet);
  s.tight = true;
  auto m = make_transform(s, 64);
  for (std::uint64_t seed : {1ull, 2ull}) {
    const Vector f = random_vector(m->image_size(), seed);
    Vector c(m->coeff_size());
    m->analysis(f, c);
    EXPECT_NEAR(norm2(c), norm2(f), 1e-8 * norm2(f));
  }
}

TEST(Shearlet, RowEnergyIsDiagonalOfMMt) {
  auto m = make_transform(spec_of(TransformKind::shearlet), 32);
  Vector e(m->coeff_size(), 0.0), img(m->image_size());
  for (std::size_t l : {0ul, 1000ul, std::size_t(5) * 1024 + 17, std::size_t(32) * 1024 + 600}) {
    e[l] = 1.0;
    m->adjoint(e, img);
    EXPECT_NEAR(dot(img, img), m->row_energy(l), 1e-12) << l;
    e[l] = 0.0;
  }
}

TEST(Shearlet, PeriodicShiftEquivariance) {
  const int n = 32;
  auto m = make_transform(spec_of(TransformKind::shearlet), n);
  const Vector f = random_vector(std::size_t(n) * n, 4);
  Vector g(f.size());
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g[std::size_t((r + 3) % n) * n + (c + 5) % n] = f[std::size_t(r) * n + c];
  Vector cf(m->coeff_size()), cg(m->coeff_size());
  m->analysis(f, cf);
  m->analysis(g, cg);
  const std::size_t plane = std::size_t(n) * n;
  for (int b = 0; b < m->sigma(); ++b)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        ASSERT_NEAR(cg[b * plane + std::size_t((r + 3) % n) * n + (c + 5) % n], cf[b * plane + std::size_t(r) * n + c],
                    1e-12);
}

TEST(Weights, UniformAndBesov) {
  auto u = make_transform(spec_of(TransformKind::wavelet), 32);
  for (double w : u->weights()) EXPECT_EQ(w, 1.0);
  TransformSpec s = spec_of(TransformKind::wavelet);
  s.weight_mode = WeightMode::besov;
  s.besov_s = 0.5;
  s.besov_p = 1.5;
  auto b = make_transform(s, 32);
  const double rho = 0.5 + 1.0 - 2.0 / 1.5;
  for (std::size_t i = 0; i < b->coeff_size(); i += 37) {
    EXPECT_GT(b->weights()[i], 0.0);
    EXPECT_DOUBLE_EQ(b->weights()[i], std::exp2(rho * b->coefficient_scale(i)));
  }
}

TEST(CoeffStack, DumpHasHeader) {
  auto m = make_transform(spec_of(TransformKind::wavelet), 16);
  const CoeffStack c = m->analysis(generate_phantom(PhantomKind::blocks, 16, 1));
  const auto path = std::filesystem::temp_directory_path() / "spartomo_coeffs.bin";
  write_coeff_stack(path, c);
  EXPECT_EQ(std::filesystem::file_size(path), 8 + 8 * c.size());
  std::ifstream in(path, std::ios::binary);
  std::int32_t hdr[2];
  in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
  EXPECT_EQ(hdr[0], 1);
  EXPECT_EQ(hdr[1], 16);
  std::filesystem::remove(path);
}
