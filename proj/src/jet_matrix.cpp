#include "finsler/jet_matrix.hpp"

namespace finsler {

Jet determinant(const JetMatrix& m) {
  const int n = m.size();
  JetMatrix a = m;
  Jet det = a(0, 0);
  for (int k = 0; k < n; ++k) {
    if (a(k, k).value() == 0.0) throw JetError("determinant: zero pivot");
    const Jet inv = reciprocal(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const Jet f = a(i, k) * inv;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
    if (k > 0) det *= a(k, k);
  }
  return det;
}

JetMatrix inverse(const JetMatrix& m) {
  const int n = m.size();
  JetMatrix a = m;
  JetMatrix out(n);
  const auto& space = m(0, 0).space_ptr();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = Jet::constant(space, i == j ? 1.0 : 0.0, m(0, 0).order());
  }
  for (int k = 0; k < n; ++k) {
    if (a(k, k).value() == 0.0) throw JetError("inverse: zero pivot");
    const Jet inv = reciprocal(a(k, k));
    for (int j = 0; j < n; ++j) {
      a(k, j) = a(k, j) * inv;
      out(k, j) = out(k, j) * inv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const Jet f = a(i, k);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        out(i, j) -= f * out(k, j);
      }
    }
  }
  return out;
}

}  // namespace finsler
