#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "verbtensor/core/binary_io.hpp"
#include "verbtensor/core/linalg.hpp"
#include "verbtensor/core/tensor.hpp"
#include "verbtensor/error.hpp"

using namespace verbtensor;
using namespace verbtensor::core;

TEST(Kronecker, BasisVectors) {
  EXPECT_EQ(kronecker({1, 0}, {0, 1}), (DenseMatrix{{0, 1}, {0, 0}}));
}

TEST(Kronecker, ScalarProduct) { EXPECT_EQ(kronecker(DenseVector{2}, DenseVector{3}), (DenseMatrix{{6}})); }

TEST(Kronecker, DirectArithmetic) {
  EXPECT_EQ(kronecker({1, 2}, {3, 4}), (DenseMatrix{{3, 4}, {6, 8}}));
}

TEST(Kronecker, RejectsEmptyOperand) { EXPECT_THROW(kronecker(DenseVector{}, DenseVector{1}), InvalidArgument); }

TEST(Kronecker, ShapeFollowsOperands) {
  const auto m = kronecker({1, 2, 3}, {4, 5});
  EXPECT_EQ(m.rows(), 3u);
  EXPECT_EQ(m.cols(), 2u);
}

TEST(BilinearContract, ZeroTensorGivesZero) {
  const Order3Tensor t(2, 2, 2);
  EXPECT_EQ(bilinear_contract(t, {0.3, -2}, {5, 1}), (DenseVector{0, 0}));
}

TEST(BilinearContract, SingleEntryTensor) {
  Order3Tensor t(2, 2, 2);
  t(0, 0, 0) = 1.0;
  EXPECT_EQ(bilinear_contract(t, {1, 0}, {1, 0}), (DenseVector{1, 0}));
}

TEST(BilinearContract, OnesVectorsSumEachOutputSlice) {
  std::vector<double> values(8);
  for (int i = 0; i < 8; ++i) values[i] = i + 1;
  const Order3Tensor t(2, 2, 2, values);
  // Output c sums every entry whose last index is c.
  EXPECT_EQ(bilinear_contract(t, {1, 1}, {1, 1}), (DenseVector{1 + 3 + 5 + 7, 2 + 4 + 6 + 8}));
}

TEST(BilinearContract, MatchesTripleLoopOnRandomShapes) {
  util::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t ks = 1 + rng.uniform_index(6), ko = 1 + rng.uniform_index(6), s = 1 + rng.uniform_index(4);
    std::vector<double> values(ks * ko * s);
    for (auto& v : values) v = rng.uniform(-2, 2);
    const Order3Tensor t(ks, ko, s, values);
    const auto subj = oracle::random_vector(rng, ks);
    const auto obj = oracle::random_vector(rng, ko);
    const auto got = bilinear_contract(t, subj, obj);
    const auto want = oracle::contract(t, subj, obj);
    for (std::size_t c = 0; c < s; ++c) EXPECT_NEAR(got[c], want[c], 1e-12);
  }
}

TEST(BilinearContract, LinearInEachArgument) {
  util::Rng rng(5);
  std::vector<double> values(4 * 3 * 2);
  for (auto& v : values) v = rng.uniform(-1, 1);
  const Order3Tensor t(4, 3, 2, values);
  const auto s1 = oracle::random_vector(rng, 4), s2 = oracle::random_vector(rng, 4);
  const auto o = oracle::random_vector(rng, 3);
  std::vector<double> sum(4);
  for (int i = 0; i < 4; ++i) sum[i] = 2.0 * s1[i] + s2[i];
  const auto lhs = bilinear_contract(t, DenseVector(sum), o);
  const auto a = bilinear_contract(t, s1, o), b = bilinear_contract(t, s2, o);
  for (int c = 0; c < 2; ++c) EXPECT_NEAR(lhs[c], 2.0 * a[c] + b[c], 1e-12);
}

TEST(BilinearContract, MismatchNamesTheAxis) {
  const Order3Tensor t(3, 2, 2);
  try {
    bilinear_contract(t, {1, 2}, {1, 2});
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("subject"), std::string::npos);
  }
  try {
    bilinear_contract(t, {1, 2, 3}, {1, 2, 3});
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("object"), std::string::npos);
  }
}

TEST(Cosine, Identical) { EXPECT_DOUBLE_EQ(cosine(DenseVector{1, 0}, DenseVector{1, 0}), 1.0); }
TEST(Cosine, Orthogonal) { EXPECT_DOUBLE_EQ(cosine(DenseVector{1, 0}, DenseVector{0, 1}), 0.0); }

TEST(Cosine, DirectArithmetic) {
  EXPECT_NEAR(cosine(DenseVector{1, 2, 2}, DenseVector{2, 1, 2}), 8.0 / 9.0, 1e-15);
}

TEST(Cosine, ZeroVectorThrows) { EXPECT_THROW(cosine(DenseVector{0, 0}, DenseVector{1, 0}), InvalidArgument); }

TEST(Cosine, ShapeMismatchThrows) {
  EXPECT_THROW(cosine(DenseVector{1, 0}, DenseVector{1, 0, 0}), DimensionError);
}

TEST(Cosine, BoundedAndSymmetricOnRandomInputs) {
  util::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto dim = 1 + rng.uniform_index(10);
    const auto a = oracle::random_vector(rng, dim), b = oracle::random_vector(rng, dim);
    const double c = cosine(a, b);
    EXPECT_GE(c, -1.0);
    EXPECT_LE(c, 1.0);
    EXPECT_DOUBLE_EQ(c, cosine(b, a));
  }
}

TEST(Cosine, ParallelVectorsClampToOne) {
  const DenseVector a{0.1, 0.7, 1e-3};
  const DenseVector b{0.3, 2.1, 3e-3};
  EXPECT_LE(cosine(a, b), 1.0);
  EXPECT_NEAR(cosine(a, b), 1.0, 1e-15);
}

TEST(KroneckerCosine, FactorsIntoComponentCosines) {
  util::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ka = 1 + rng.uniform_index(8), kb = 1 + rng.uniform_index(8);
    const auto a = oracle::random_vector(rng, ka), c = oracle::random_vector(rng, ka);
    const auto b = oracle::random_vector(rng, kb), d = oracle::random_vector(rng, kb);
    EXPECT_NEAR(cosine(kronecker(a, b), kronecker(c, d)), cosine(a, c) * cosine(b, d), 1e-10);
  }
}

TEST(NormalizeRows, ThreeFourFive) {
  const auto m = l2_normalize_rows(DenseMatrix{{3, 4}});
  EXPECT_DOUBLE_EQ(m(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.8);
}

TEST(NormalizeRows, ZeroRowPreserved) { EXPECT_EQ(l2_normalize_rows(DenseMatrix{{0, 0}}), (DenseMatrix{{0, 0}})); }

TEST(NormalizeRows, FourOnes) {
  EXPECT_EQ(l2_normalize_rows(DenseMatrix{{1, 1, 1, 1}}), (DenseMatrix{{0.5, 0.5, 0.5, 0.5}}));
}

TEST(NormalizeRows, NonzeroRowsHaveUnitNormAndKeepDirection) {
  util::Rng rng(23);
  auto m = oracle::random_matrix(rng, 12, 7);
  for (std::size_t c = 0; c < 7; ++c) m(4, c) = 0.0;
  const auto n = l2_normalize_rows(m);
  for (std::size_t r = 0; r < 12; ++r) {
    if (r == 4) {
      EXPECT_EQ(l2_norm(n.row(r)), 0.0);
      continue;
    }
    EXPECT_NEAR(l2_norm(n.row(r)), 1.0, 1e-12);
    EXPECT_NEAR(cosine(n.row(r), m.row(r)), 1.0, 1e-12);
  }
}

TEST(NormalizeRows, SparseMatchesDense) {
  util::Rng rng(29);
  auto dense = oracle::random_matrix(rng, 6, 9);
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < 9; ++c) {
      if (rng.uniform01() < 0.6) dense(r, c) = 0.0;
    }
  }
  for (std::size_t c = 0; c < 9; ++c) dense(2, c) = 0.0;
  const auto expected = l2_normalize_rows(dense);
  const auto got = l2_normalize_rows(SparseMatrix::from_dense(dense)).to_dense();
  for (std::size_t i = 0; i < expected.values().size(); ++i) {
    EXPECT_NEAR(got.values()[i], expected.values()[i], 1e-15);
  }
}

TEST(Tensor, RejectsNonFiniteValues) {
  EXPECT_THROW(DenseVector({1.0, std::numeric_limits<double>::quiet_NaN()}), InvalidArgument);
  EXPECT_THROW(DenseMatrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}), InvalidArgument);
  EXPECT_THROW(Order3Tensor(1, 1, 1, {std::nan("")}), InvalidArgument);
}

TEST(Tensor, RejectsWrongValueCount) {
  EXPECT_THROW(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
  EXPECT_THROW(Order3Tensor(2, 2, 2, std::vector<double>(7)), DimensionError);
}

TEST(Tensor, LexicographicLayout) {
  const Order3Tensor t(2, 3, 2, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  EXPECT_EQ(t(0, 0, 1), 1);
  EXPECT_EQ(t(0, 1, 0), 2);
  EXPECT_EQ(t(1, 0, 0), 6);
  EXPECT_EQ(t(1, 2, 1), 11);
}

TEST(SparseMatrix, SetRowSortsAndValidates) {
  SparseMatrix m(2, 4);
  m.set_row(0, {{3, 1.0}, {1, 2.0}});
  ASSERT_EQ(m.row(0).size(), 2u);
  EXPECT_EQ(m.row(0)[0].col, 1u);
  EXPECT_THROW(m.set_row(0, {{1, 1.0}, {1, 2.0}}), InvalidArgument);
  EXPECT_THROW(m.set_row(0, {{4, 1.0}}), DimensionError);
  EXPECT_THROW(m.set_row(2, {}), DimensionError);
  EXPECT_EQ(m.nonzeros(), 2u);
}

TEST(SparseMatrix, DenseRoundTrip) {
  const DenseMatrix d{{0, 1.5, 0}, {0, 0, 0}, {-2, 0, 3}};
  const auto s = SparseMatrix::from_dense(d);
  EXPECT_EQ(s.nonzeros(), 3u);
  EXPECT_EQ(s.to_dense(), d);
}

TEST(Frobenius, DistanceOfDiagonals) {
  EXPECT_DOUBLE_EQ(frobenius_distance(DenseMatrix{{3, 0}, {0, 2}}, DenseMatrix{{3, 0}, {0, 0}}), 2.0);
  EXPECT_THROW(frobenius_distance(DenseMatrix(2, 2), DenseMatrix(2, 3)), DimensionError);
}

TEST(Matmul, IdentityIsNeutral) {
  util::Rng rng(31);
  const auto m = oracle::random_matrix(rng, 4, 3);
  EXPECT_EQ(matmul(DenseMatrix::identity(4), m), m);
  EXPECT_EQ(matmul(m, DenseMatrix::identity(3)), m);
  EXPECT_THROW(matmul(m, m), DimensionError);
}

TEST(BinaryIo, RoundTripsEveryOrder) {
  util::Rng rng(37);
  const auto v = oracle::random_vector(rng, 5);
  const auto m = oracle::random_matrix(rng, 3, 4);
  std::vector<double> tv(2 * 3 * 2);
  for (auto& x : tv) x = rng.uniform(-1e6, 1e6);
  const Order3Tensor t(2, 3, 2, tv);
  std::stringstream buf;
  write_vector(buf, v);
  write_matrix(buf, m);
  write_tensor(buf, t);
  EXPECT_EQ(read_vector(buf), v);
  EXPECT_EQ(read_matrix(buf), m);
  EXPECT_EQ(read_tensor(buf), t);
}

TEST(BinaryIo, LittleEndianLayout) {
  std::stringstream buf;
  write_vector(buf, DenseVector{1.0});
  const std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 4u + 8u + 8u + 8u);
  EXPECT_EQ(bytes.substr(0, 4), "TVB1");
  EXPECT_EQ(bytes[4], 1);   // order, low byte first
  EXPECT_EQ(bytes[12], 1);  // dim
  // 1.0 = 0x3FF0000000000000, so the last byte carries 0x3F.
  EXPECT_EQ(static_cast<unsigned char>(bytes[27]), 0x3F);
  EXPECT_EQ(static_cast<unsigned char>(bytes[26]), 0xF0);
}

TEST(BinaryIo, RejectsBadMagicTruncationAndWrongOrder) {
  std::stringstream bad("XXXX");
  EXPECT_THROW(read_block(bad), IoError);
  std::stringstream full;
  write_matrix(full, DenseMatrix{{1, 2}});
  std::stringstream truncated(full.str().substr(0, full.str().size() - 3));
  EXPECT_THROW(read_matrix(truncated), IoError);
  std::stringstream again(full.str());
  EXPECT_THROW(read_vector(again), IoError);
}
