#include "verbtensor/core/binary_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "verbtensor/error.hpp"

namespace verbtensor::core {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'V', 'B', '1'};
constexpr std::uint64_t kMaxOrder = 16;

void put_u64(std::ostream& out, std::uint64_t x) {
  std::array<unsigned char, 8> buf{};
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((x >> (8 * i)) & 0xffU);
  out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> buf{};
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) throw IoError("tensor block: truncated header");
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return x;
}

}  // namespace

void write_block(std::ostream& out, std::span<const std::uint64_t> dims, std::span<const double> values) {
  std::uint64_t count = 1;
  for (auto d : dims) count *= d;
  if (count != values.size()) throw DimensionError("write_block: dims do not match value count");
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, dims.size());
  for (auto d : dims) put_u64(out, d);
  for (double v : values) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError("write_block: stream write failed");
}

TensorBlock read_block(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size())) throw IoError("tensor block: missing magic");
  if (magic != kMagic) throw IoError("tensor block: bad magic (expected TVB1)");
  const std::uint64_t order = get_u64(in);
  if (order == 0 || order > kMaxOrder) throw IoError("tensor block: unsupported order " + std::to_string(order));
  TensorBlock block;
  std::uint64_t count = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    block.dims.push_back(get_u64(in));
    count *= block.dims.back();
  }
  block.values.resize(count);
  for (auto& v : block.values) v = std::bit_cast<double>(get_u64(in));
  require_finite(block.values, "tensor block");
  return block;
}

void write_vector(std::ostream& out, const DenseVector& v) {
  const std::array<std::uint64_t, 1> dims{v.dim()};
  write_block(out, dims, v.values());
}

void write_matrix(std::ostream& out, const DenseMatrix& m) {
  const std::array<std::uint64_t, 2> dims{m.rows(), m.cols()};
  write_block(out, dims, m.values());
}

void write_tensor(std::ostream& out, const Order3Tensor& t) {
  const std::array<std::uint64_t, 3> dims{t.dim_subject(), t.dim_object(), t.dim_sentence()};
  write_block(out, dims, t.values());
}

DenseVector read_vector(std::istream& in) {
  auto b = read_block(in);
  if (b.dims.size() != 1) throw IoError("read_vector: block order is " + std::to_string(b.dims.size()));
  return DenseVector(std::move(b.values));
}

DenseMatrix read_matrix(std::istream& in) {
  auto b = read_block(in);
  if (b.dims.size() != 2) throw IoError("read_matrix: block order is " + std::to_string(b.dims.size()));
  return DenseMatrix(b.dims[0], b.dims[1], std::move(b.values));
}

Order3Tensor read_tensor(std::istream& in) {
  auto b = read_block(in);
  if (b.dims.size() != 3) throw IoError("read_tensor: block order is " + std::to_string(b.dims.size()));
  return Order3Tensor(b.dims[0], b.dims[1], b.dims[2], std::move(b.values));
}

}  // namespace verbtensor::core
