#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace bandlab {

/// Minor resolvents G^(T) built by deleting the rows and columns in T and
/// inverting the remaining block; entries are addressed by original indices.
class MinorResolvents {
 public:
  MinorResolvents(Eigen::MatrixXcd H, std::complex<double> z) : H_(std::move(H)), z_(z) {}

  const Eigen::MatrixXcd& H() const { return H_; }

  std::complex<double> entry(const std::vector<int>& T, int i, int j) {
    const std::vector<int> key = sorted(T);
    if (std::binary_search(key.begin(), key.end(), i) ||
        std::binary_search(key.begin(), key.end(), j))
      throw std::invalid_argument("MinorResolvents: index belongs to the removed set");
    const auto& cached = minor(key);
    return cached.G(cached.pos.at(i), cached.pos.at(j));
  }

 private:
  struct Minor {
    Eigen::MatrixXcd G;
    std::map<int, int> pos;  // original index -> position in the minor
  };

  static std::vector<int> sorted(std::vector<int> T) {
    std::sort(T.begin(), T.end());
    T.erase(std::unique(T.begin(), T.end()), T.end());
    return T;
  }

  const Minor& minor(const std::vector<int>& key) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const int n = static_cast<int>(H_.rows());
    std::vector<int> keep;
    keep.reserve(n);
    for (int i = 0; i < n; ++i)
      if (!std::binary_search(key.begin(), key.end(), i)) keep.push_back(i);
    const int m = static_cast<int>(keep.size());
    Eigen::MatrixXcd A(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) A(a, b) = H_(keep[a], keep[b]);
    A -= z_ * Eigen::MatrixXcd::Identity(m, m);
    Minor mn;
    mn.G = A.inverse();
    for (int a = 0; a < m; ++a) mn.pos[keep[a]] = a;
    return cache_.emplace(key, std::move(mn)).first->second;
  }

  Eigen::MatrixXcd H_;
  std::complex<double> z_;
  std::map<std::vector<int>, Minor> cache_;
};

/// Residuals of the two resolvent-identity families on one (T, i, j, k)
/// instance; these are exact algebraic identities, so anything above
/// conditioning-level noise indicates a bug.
struct ResolventIdentityReport {
  double family_a_offdiag = 0.0;   // G^(T)_ij = G^(Tk)_ij + G^(T)_ik G^(T)_kj / G^(T)_kk
  double family_a_diag = 0.0;      // 1/G^(T)_ii = 1/G^(Tk)_ii - G_ik G_ki/(G_ii G^(Tk)_ii G_kk)
  double family_b_row = 0.0;       // G^(T)_ij = -G^(T)_ii sum_k h_ik G^(Ti)_kj
  double family_b_col = 0.0;       // G^(T)_ij = -G^(T)_jj sum_k G^(Tj)_ik h_kj
  double max() const {
    return std::max(std::max(family_a_offdiag, family_a_diag),
                    std::max(family_b_row, family_b_col));
  }
};

inline ResolventIdentityReport verify_resolvent_identities(const Eigen::MatrixXcd& H,
                                                           std::complex<double> z,
                                                           const std::vector<int>& T, int i,
                                                           int j, int k) {
  for (int t : T)
    if (t == i || t == j || t == k)
      throw std::invalid_argument("verify_resolvent_identities: i,j,k must avoid T");
  if (k == i || k == j) throw std::invalid_argument("verify_resolvent_identities: k != i,j");

  MinorResolvents mr(H, z);
  std::vector<int> Tk = T;
  Tk.push_back(k);
  const std::complex<double> Gkk = mr.entry(T, k, k);
  if (std::abs(Gkk) < 1e-12)
    throw std::runtime_error("verify_resolvent_identities: degenerate pivot G^(T)_kk");

  ResolventIdentityReport rep;
  {
    const std::complex<double> lhs = mr.entry(T, i, j);
    const std::complex<double> rhs = mr.entry(Tk, i, j) + mr.entry(T, i, k) * mr.entry(T, k, j) / Gkk;
    rep.family_a_offdiag = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
  }
  {
    const std::complex<double> gii = mr.entry(T, i, i);
    const std::complex<double> gii_k = mr.entry(Tk, i, i);
    const std::complex<double> lhs = 1.0 / gii;
    const std::complex<double> rhs =
        1.0 / gii_k - mr.entry(T, i, k) * mr.entry(T, k, i) / (gii * gii_k * Gkk);
    rep.family_a_diag = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
  }
  if (i != j) {
    std::vector<int> Ti = T;
    Ti.push_back(i);
    std::vector<int> Tj = T;
    Tj.push_back(j);
    const int n = static_cast<int>(H.rows());
    auto removed = [&](const std::vector<int>& set, int a) {
      return std::find(set.begin(), set.end(), a) != set.end();
    };
    std::complex<double> row_sum = 0.0, col_sum = 0.0;
    for (int a = 0; a < n; ++a) {
      if (!removed(Ti, a)) row_sum += H(i, a) * mr.entry(Ti, a, j);
      if (!removed(Tj, a)) col_sum += mr.entry(Tj, i, a) * H(a, j);
    }
    const std::complex<double> lhs = mr.entry(T, i, j);
    rep.family_b_row = std::abs(lhs + mr.entry(T, i, i) * row_sum) / std::max(1.0, std::abs(lhs));
    rep.family_b_col = std::abs(lhs + mr.entry(T, j, j) * col_sum) / std::max(1.0, std::abs(lhs));
  }
  return rep;
}

}  // namespace bandlab
