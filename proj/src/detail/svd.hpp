#pragma once

#include <Eigen/SVD>

namespace ssalab::detail {

struct SvdResult {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
  bool ok = false;
};

// Divide-and-conquer SVD with a one-sided Jacobi fallback. BDCSVD can return
// non-finite singular vectors on some exactly rank-deficient inputs.
inline SvdResult robust_svd(const Eigen::MatrixXd& m, unsigned int options) {
  SvdResult r;
  {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, options);
    if (svd.info() == Eigen::Success) {
      r.s = svd.singularValues();
      if (options & (Eigen::ComputeThinU | Eigen::ComputeFullU)) r.u = svd.matrixU();
      if (options & (Eigen::ComputeThinV | Eigen::ComputeFullV)) r.v = svd.matrixV();
      r.ok = r.s.allFinite() && r.u.allFinite() && r.v.allFinite();
      if (r.ok) return r;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, options);
  r.s = svd.singularValues();
  r.u = (options & (Eigen::ComputeThinU | Eigen::ComputeFullU)) ? Eigen::MatrixXd(svd.matrixU()) : Eigen::MatrixXd();
  r.v = (options & (Eigen::ComputeThinV | Eigen::ComputeFullV)) ? Eigen::MatrixXd(svd.matrixV()) : Eigen::MatrixXd();
  r.ok = svd.info() == Eigen::Success && r.s.allFinite() && r.u.allFinite() && r.v.allFinite();
  return r;
}

}  // namespace ssalab::detail
