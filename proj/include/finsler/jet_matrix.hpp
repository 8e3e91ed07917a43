#pragma once

#include <vector>

#include "finsler/jet.hpp"

namespace finsler {

/// Small dense square matrix of jets, row-major.
class JetMatrix {
 public:
  JetMatrix() = default;
  explicit JetMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {}

  int size() const { return n_; }
  Jet& operator()(int i, int j) { return data_[i * n_ + j]; }
  const Jet& operator()(int i, int j) const { return data_[i * n_ + j]; }

 private:
  int n_ = 0;
  std::vector<Jet> data_;
};

/// Determinant by elimination without pivoting; meant for positive definite
/// matrices, whose leading minors never vanish.
Jet determinant(const JetMatrix& m);

/// Inverse by Gauss-Jordan elimination without pivoting (positive definite input).
JetMatrix inverse(const JetMatrix& m);

}  // namespace finsler
