#include "donaldson/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace donaldson {

namespace {

constexpr std::array<char, 8> kMagic{'D', 'G', 'F', '4', 'F', 'O', 'R', 'M'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw std::runtime_error("field file truncated");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void dump_field(const KForm& a, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kFieldFormatVersion);
  put_le<std::uint32_t>(out, std::uint32_t(a.grid()->n()));
  put_le<std::uint8_t>(out, std::uint8_t(a.degree()));
  const std::array<char, 3> reserved{0, 0, 0};
  out.write(reserved.data(), reserved.size());
  // Column-major storage is already the block layout.
  const Eigen::MatrixXd& c = a.coeffs();
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    for (Eigen::Index i = 0; i < c.rows(); ++i) put_le<double>(out, c(i, j));
  }
  if (!out) throw std::runtime_error("failed writing field");
}

void dump_field(const KForm& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  dump_field(a, out);
}

KForm load_field(std::istream& in) {
  std::array<char, 8> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not a DGF4FORM field file");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kFieldFormatVersion) {
    throw std::runtime_error("unsupported field format version " +
                             std::to_string(version));
  }
  const auto n = get_le<std::uint32_t>(in);
  const auto degree = get_le<std::uint8_t>(in);
  std::array<char, 3> reserved;
  if (!in.read(reserved.data(), reserved.size())) {
    throw std::runtime_error("field file truncated");
  }
  if (degree > 4) throw std::runtime_error("field file has degree > 4");
  GridPtr grid = make_grid(int(n));
  KForm out(grid, degree);
  Eigen::MatrixXd& c = out.coeffs();
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    for (Eigen::Index i = 0; i < c.rows(); ++i) c(i, j) = get_le<double>(in);
  }
  return out;
}

KForm load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_field(in);
}

void write_flow_csv(std::span<const FlowRecord> records, std::ostream& out) {
  out << kFlowCsvHeader << '\n';
  out << std::setprecision(17);
  for (const FlowRecord& r : records) {
    out << r.step << ',' << r.t << ',' << r.energy << ',' << r.grad_norm << ','
        << r.min_u << ',';
    if (r.speed) out << *r.speed;
    out << ',' << r.solver_iters << ',' << r.max_residual << '\n';
  }
}

}  // namespace donaldson
