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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

#include "spartomo/image.hpp"

namespace spartomo {

enum class PhantomKind { plant_like, shepp_logan_like, blocks };

PhantomKind parse_phantom_kind(std::string_view name);
std::string_view to_string(PhantomKind kind);

// Deterministic synthetic ground truth with values in [0, 1] and max 1.
// blocks: axis-aligned rectangles with levels {0, 0.25, 0.5, 1}.
// shepp_logan_like: modified Shepp-Logan ellipses; seed != 0 jitters them.
// plant_like: curved stem with leaves and smooth internal shading.
Image generate_phantom(PhantomKind kind, int side, std::uint64_t seed);

enum class ImageFormat { pgm, raw_f64 };

// Loads a square image and rescales it to [0, 1] by dividing by its maximum.
Image load_image(const std::filesystem::path& path, ImageFormat format);

// Writes little-endian float64 pixels, row-major, no header.
void save_raw_f64(const std::filesystem::path& path, std::span<const double> values);
// Writes an 8-bit binary PGM; values are clamped to [0, 1] before quantization.
void save_pgm(const std::filesystem::path& path, const Image& img);

// [f]_i <- max(f_i / max_j f_j, 0). Throws when max_j f_j <= 0.
Image rescale_clip(const Image& img);
Vector rescale_clip(std::span<const double> values);

}  // namespace spartomo
