#pragma once

// Plain-text persistence: CSV matrices with shortest round-trip numbers and
// 8-bit PGM exports of image maps.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "layerscope/imaging.hpp"

namespace layerscope {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
/// Whole-string parse; throws std::runtime_error on malformed text.
double parse_double(std::string_view text);

/// Real matrix, header `d1,...,dN` (one column per incidence).
void write_real_csv(const std::filesystem::path& path, const Eigen::MatrixXd& data);
Eigen::MatrixXd read_real_csv(const std::filesystem::path& path);

/// Complex matrix, header `d1_re,d1_im,...,dN_re,dN_im`: column q of the data
/// occupies the adjacent text columns 2q-1 (real) and 2q (imaginary).
void write_complex_csv(const std::filesystem::path& path, const Eigen::MatrixXcd& data);
Eigen::MatrixXcd read_complex_csv(const std::filesystem::path& path);

/// ny rows of nx raw values, ascending z2; header `i1,...,i<nx>`.
void write_image_csv(const std::filesystem::path& path, const ImageMap& image);

/// Pixels after min-max normalization to 0..255, row 0 = largest z2. A
/// constant map becomes all zeros.
std::vector<std::uint8_t> pgm_pixels(const ImageMap& image);
/// Binary P5 file built from pgm_pixels.
void write_pgm(const std::filesystem::path& path, const ImageMap& image);

}  // namespace layerscope
