#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "verbtensor/core/tensor.hpp"

namespace verbtensor::core {

// Block layout, all integers and floats little-endian:
//   "TVB1" | order:u64 | dims[order]:u64 | values:f64[prod(dims)]
// Values follow the lexicographic order of the declared dims.

struct TensorBlock {
  std::vector<std::uint64_t> dims;
  std::vector<double> values;
};

void write_block(std::ostream& out, std::span<const std::uint64_t> dims, std::span<const double> values);
TensorBlock read_block(std::istream& in);

void write_vector(std::ostream& out, const DenseVector& v);
void write_matrix(std::ostream& out, const DenseMatrix& m);
void write_tensor(std::ostream& out, const Order3Tensor& t);

DenseVector read_vector(std::istream& in);
DenseMatrix read_matrix(std::istream& in);
Order3Tensor read_tensor(std::istream& in);

}  // namespace verbtensor::core
