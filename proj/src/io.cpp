#include "layerscope/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace layerscope {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::vector<std::vector<double>> read_table(const std::filesystem::path& path, std::size_t& columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  columns = split(line).size();
  std::vector<std::vector<double>> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != columns) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(number) + " has " +
                               std::to_string(cells.size()) + " fields, expected " +
                               std::to_string(columns));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        row.push_back(parse_double(c));
      } catch (const std::runtime_error& e) {
        throw std::runtime_error(path.string() + ": line " + std::to_string(number) + ": " + e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string header(std::size_t columns, bool complex) {
  std::string h;
  for (std::size_t q = 1; q <= columns; ++q) {
    if (q > 1) h += ',';
    const std::string d = "d" + std::to_string(q);
    h += complex ? d + "_re," + d + "_im" : d;
  }
  return h;
}

void check_header(const std::filesystem::path& path, bool complex) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::size_t fields = split(line).size();
  const std::size_t columns = complex ? fields / 2 : fields;
  if ((complex && fields % 2 != 0) || line != header(columns, complex)) {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::runtime_error("not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_real_csv(const std::filesystem::path& path, const Eigen::MatrixXd& data) {
  auto out = open_out(path);
  out << header(static_cast<std::size_t>(data.cols()), false) << '\n';
  for (Eigen::Index p = 0; p < data.rows(); ++p) {
    for (Eigen::Index q = 0; q < data.cols(); ++q) {
      if (q > 0) out << ',';
      out << format_double(data(p, q));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_real_csv(const std::filesystem::path& path) {
  std::size_t columns = 0;
  const auto rows = read_table(path, columns);
  check_header(path, false);
  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns));
  for (std::size_t p = 0; p < rows.size(); ++p) {
    for (std::size_t q = 0; q < columns; ++q) {
      data(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = rows[p][q];
    }
  }
  return data;
}

void write_complex_csv(const std::filesystem::path& path, const Eigen::MatrixXcd& data) {
  auto out = open_out(path);
  out << header(static_cast<std::size_t>(data.cols()), true) << '\n';
  for (Eigen::Index p = 0; p < data.rows(); ++p) {
    for (Eigen::Index q = 0; q < data.cols(); ++q) {
      if (q > 0) out << ',';
      out << format_double(data(p, q).real()) << ',' << format_double(data(p, q).imag());
    }
    out << '\n';
  }
}

Eigen::MatrixXcd read_complex_csv(const std::filesystem::path& path) {
  std::size_t columns = 0;
  const auto rows = read_table(path, columns);
  check_header(path, true);
  const std::size_t n = columns / 2;
  Eigen::MatrixXcd data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < rows.size(); ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      data(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
          Complex(rows[p][2 * q], rows[p][2 * q + 1]);
    }
  }
  return data;
}

void write_image_csv(const std::filesystem::path& path, const ImageMap& image) {
  auto out = open_out(path);
  for (int i = 0; i < image.grid.nx; ++i) out << (i > 0 ? ",i" : "i") << i + 1;
  out << '\n';
  for (int j = 0; j < image.grid.ny; ++j) {
    for (int i = 0; i < image.grid.nx; ++i) {
      if (i > 0) out << ',';
      out << format_double(image.at(i, j));
    }
    out << '\n';
  }
}

std::vector<std::uint8_t> pgm_pixels(const ImageMap& image) {
  const auto [lo, hi] = std::minmax_element(image.values.begin(), image.values.end());
  const double vmin = image.values.empty() ? 0.0 : *lo;
  const double span = image.values.empty() ? 0.0 : *hi - vmin;
  std::vector<std::uint8_t> pixels;
  pixels.reserve(image.values.size());
  for (int j = image.grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < image.grid.nx; ++i) {
      const double scaled = span > 0.0 ? (image.at(i, j) - vmin) / span * 255.0 : 0.0;
      pixels.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(scaled), 0L, 255L)));
    }
  }
  return pixels;
}

void write_pgm(const std::filesystem::path& path, const ImageMap& image) {
  const auto pixels = pgm_pixels(image);
  auto out = open_out(path, true);
  out << "P5\n" << image.grid.nx << ' ' << image.grid.ny << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace layerscope
