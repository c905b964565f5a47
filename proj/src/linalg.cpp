#include "friedrichs/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace friedrichs {

HermitianEigen hermitian_eigen(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat hermitian_part(const Mat& a) { return 0.5 * (a + a.adjoint()); }

Mat inverse_on_subspace(const Mat& a, const Mat& basis, double rel) {
  int n = static_cast<int>(a.rows());
  if (basis.cols() == 0) return Mat::Zero(n, n);
  Mat r = basis.adjoint() * a * basis;
  Eigen::JacobiSVD<Mat> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) inv(i) = 1.0 / s(i);
  Mat ri = svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
  return basis * ri * basis.adjoint();
}

Mat projector(const Mat& basis) {
  if (basis.cols() == 0) return Mat::Zero(basis.rows(), basis.rows());
  return basis * basis.adjoint();
}

double min_singular_value(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double condition_number(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  return s(0) / s(s.size() - 1);
}

double max_abs(const Mat& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace friedrichs
