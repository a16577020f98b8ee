#include "lrsep/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrsep {
namespace {

constexpr std::array<char, 4> kMagic = {'H', 'C', 'U', 'B'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw std::runtime_error("HCUBE: truncated file");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

std::ofstream open_out(const std::filesystem::path& path,
                       std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path,
                      std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

void write_hcube(std::ostream& out, const HsiCube& cube) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint16_t>(out, kHcubeVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cube.height()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cube.width()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cube.bands()));
  const auto& m = cube.pixels();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(m(i, j)));
  if (!out) throw std::runtime_error("HCUBE: write failed");
}

void write_hcube(const std::filesystem::path& path, const HsiCube& cube) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  write_hcube(out, cube);
}

HsiCube read_hcube(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error("HCUBE: bad magic");
  const auto version = get_le<std::uint16_t>(in);
  if (version != kHcubeVersion)
    throw std::runtime_error("HCUBE: unsupported version " +
                             std::to_string(version));
  const Index h = get_le<std::uint32_t>(in);
  const Index w = get_le<std::uint32_t>(in);
  const Index p = get_le<std::uint32_t>(in);
  if (h < 1 || w < 1 || p < 1)
    throw std::runtime_error("HCUBE: zero dimension");
  DataMatrix m(h * w, p);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = std::bit_cast<double>(get_le<std::uint64_t>(in));
  return HsiCube(h, w, std::move(m));
}

HsiCube read_hcube(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  return read_hcube(in);
}

Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      auto cell = rest.substr(0, comma);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
        cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t'))
        cell.remove_suffix(1);
      if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw std::runtime_error("CSV line " + std::to_string(line_no) +
                                 ": bad number '" + std::string(cell) + "'");
      if (!std::isfinite(v))
        throw std::runtime_error("CSV line " + std::to_string(line_no) +
                                 ": non-finite value");
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("CSV line " + std::to_string(line_no) +
                               ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("CSV: empty input");
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const Eigen::Ref<const Matrix>& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::Ref<const Matrix>& m) {
  auto out = open_out(path);
  write_matrix_csv(out, m);
}

void write_scaled_pgm(std::ostream& out,
                      const Eigen::Ref<const Matrix>& image) {
  constexpr int maxval = 65535;
  const double lo = image.size() ? image.minCoeff() : 0.0;
  const double hi = image.size() ? image.maxCoeff() : 0.0;
  const double range = hi > lo ? hi - lo : 1.0;
  out << "P2\n" << image.cols() << ' ' << image.rows() << '\n' << maxval << '\n';
  for (Index r = 0; r < image.rows(); ++r) {
    for (Index c = 0; c < image.cols(); ++c) {
      if (c) out << ' ';
      out << static_cast<int>(std::lround((image(r, c) - lo) / range * maxval));
    }
    out << '\n';
  }
}

void write_scaled_pgm(const std::filesystem::path& path,
                      const Eigen::Ref<const Matrix>& image) {
  auto out = open_out(path);
  write_scaled_pgm(out, image);
}

void write_mask_pgm(const std::filesystem::path& path, const Mask& mask) {
  auto out = open_out(path);
  out << "P2\n" << mask.cols() << ' ' << mask.rows() << "\n1\n";
  for (Index r = 0; r < mask.rows(); ++r) {
    for (Index c = 0; c < mask.cols(); ++c) out << (c ? " " : "") << int(mask(r, c));
    out << '\n';
  }
}

void write_mask_csv(const std::filesystem::path& path, const Mask& mask) {
  write_matrix_csv(path, mask.cast<double>().matrix());
}

Mask read_mask_pgm(std::istream& in) {
  // Tokenizer that skips '#' comments.
  auto next = [&in]() {
    std::string tok;
    while (in >> tok) {
      if (tok.front() != '#') return tok;
      std::string rest;
      std::getline(in, rest);
    }
    throw std::runtime_error("PGM: truncated file");
  };
  if (next() != "P2") throw std::runtime_error("PGM: only P2 is supported");
  const Index w = std::stol(next());
  const Index h = std::stol(next());
  const long maxval = std::stol(next());
  if (w < 1 || h < 1 || maxval < 1) throw std::runtime_error("PGM: bad header");
  Mask mask(h, w);
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c) mask(r, c) = std::stol(next()) != 0;
  return mask;
}

Mask read_mask(const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    const Matrix m = read_matrix_csv(path);
    return (m.array() != 0.0);
  }
  auto in = open_in(path);
  return read_mask_pgm(in);
}

}  // namespace lrsep
