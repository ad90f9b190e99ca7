#include "skewmor/la_core.hpp"

#include <Eigen/SVD>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace skewmor {

ColumnVector vec(const DenseMatrix& a) {
  // Column-major storage, so this is a straight copy of the buffer.
  return Eigen::Map<const ColumnVector>(a.data(), a.size());
}

DenseMatrix unvec(const ColumnVector& v, Index rows, Index cols) {
  if (rows <= 0 || cols <= 0 || v.size() != rows * cols) {
    throw ShapeError("unvec: vector of size " + std::to_string(v.size()) +
                     " is not reshapable to " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  return Eigen::Map<const DenseMatrix>(v.data(), rows, cols);
}

ColumnVector apply_kron_transpose(const DenseMatrix& v, const DenseMatrix& w,
                                  const ColumnVector& x) {
  const Index n = v.rows();
  if (w.rows() != n) {
    throw ShapeError("apply_kron_transpose: V and W must have equal row counts");
  }
  if (x.size() != n * n) {
    throw ShapeError("apply_kron_transpose: x has " + std::to_string(x.size()) +
                     " entries, expected n^2 = " + std::to_string(n * n));
  }
  const Eigen::Map<const DenseMatrix> b(x.data(), n, n);
  DenseMatrix projected = w.transpose() * b * v;  // W^T B V, w.cols() x v.cols()
  return vec(projected);
}

SvdResult svd_thin(const DenseMatrix& a) {
  if (a.size() == 0) {
    throw ShapeError("svd_thin: empty matrix");
  }
  Eigen::BDCSVD<DenseMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw SvdError("svd_thin: factorization did not converge");
  }

  SvdResult out;
  out.left = svd.matrixU();
  out.singular_values = svd.singularValues();
  out.right_t = svd.matrixV().transpose();

  if (!out.left.allFinite() || !out.singular_values.allFinite() ||
      !out.right_t.allFinite()) {
    throw SvdError("svd_thin: non-finite entries in factorization output");
  }

  // Deterministic sign: first nonzero entry of each left vector >= 0.
  for (Index j = 0; j < out.left.cols(); ++j) {
    for (Index i = 0; i < out.left.rows(); ++i) {
      const double e = out.left(i, j);
      if (e != 0.0) {
        if (e < 0.0) {
          out.left.col(j) = -out.left.col(j);
          out.right_t.row(j) = -out.right_t.row(j);
        }
        break;
      }
    }
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'S', 'K', 'M', '1'};

void put_u64_le(std::ofstream& os, std::uint64_t value) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

void put_f64_le(std::ofstream& os, double value) {
  put_u64_le(os, std::bit_cast<std::uint64_t>(value));
}

std::uint64_t get_u64_le(std::ifstream& is) {
  unsigned char buf[8];
  is.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) value |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return value;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const DenseMatrix& a) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw FileIoError("write_matrix: cannot open " + path.string());
  }
  os.write(kMagic, 4);
  put_u64_le(os, static_cast<std::uint64_t>(a.rows()));
  put_u64_le(os, static_cast<std::uint64_t>(a.cols()));
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) put_f64_le(os, a(i, j));
  }
  os.flush();
  if (!os) {
    throw FileIoError("write_matrix: write failed for " + path.string());
  }
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw FileIoError("read_matrix: cannot open " + path.string());
  }
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) {
    throw FileFormatError("read_matrix: " + path.string() + " is not an SKM1 file");
  }
  const std::uint64_t rows = get_u64_le(is);
  const std::uint64_t cols = get_u64_le(is);
  if (!is) {
    throw FileTruncatedError("read_matrix: " + path.string() + " ends inside the header");
  }
  if (rows == 0 || cols == 0 || rows > (1u << 30) || cols > (1u << 30)) {
    throw FileFormatError("read_matrix: implausible dimensions in " + path.string());
  }
  DenseMatrix a(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const std::uint64_t bits = get_u64_le(is);
      if (!is) {
        throw FileTruncatedError("read_matrix: " + path.string() +
                                 " truncated inside the payload");
      }
      a(i, j) = std::bit_cast<double>(bits);
    }
  }
  if (!a.allFinite()) {
    throw ValidationError("read_matrix: non-finite entries in " + path.string());
  }
  return a;
}

}  // namespace skewmor
