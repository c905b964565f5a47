#pragma once

#include "friedrichs/types.hpp"

namespace friedrichs {

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  Mat vectors;
};

HermitianEigen hermitian_eigen(const Mat& a);
Mat hermitian_part(const Mat& a);
// inverse of B^H A B within span(B) (B orthonormal columns), lifted back; zero on the complement
Mat inverse_on_subspace(const Mat& a, const Mat& basis, double rel = 1e-10);
Mat projector(const Mat& basis);
double min_singular_value(const Mat& a);
double condition_number(const Mat& a);
double max_abs(const Mat& a);

}  // namespace friedrichs
