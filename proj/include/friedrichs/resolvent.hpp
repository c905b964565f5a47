#pragma once

#include <optional>
#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/selfenergy.hpp"

namespace friedrichs {

struct ResolventOptions {
  double tau_sing = 1e-10;
  double max_condition = 1e12;
  double kernel_rel = 1e-9;
  bool snap_kernel = true;
};

class ResolventEvaluator {
 public:
  explicit ResolventEvaluator(const ModelSpec& spec, ResolventOptions opt = {},
                              const Tolerances& tol = default_tolerances());

  const ModelSpec& spec() const { return spec_; }
  const SelfEnergyEvaluator& self_energy() const { return se_; }
  const ResolventOptions& options() const { return opt_; }
  int size() const { return spec_.size(); }
  double lambda2() const { return spec_.lambda2(); }
  const Mat& k0() const { return k0_; }
  // K(0) = K0 - lambda^2 S(0) as computed and with near-zero eigenvalues set to zero
  const Mat& k_zero_raw() const { return kz_raw_; }
  const Mat& k_zero() const { return kz_; }
  double tau_kernel() const { return tau_kernel_; }

  Mat k(cplx z) const;
  // K(z) - z on the first and second sheets, built around K(0) for accuracy near the origin
  Mat k_minus_z(cplx z) const;
  Mat k_minus_z_second_sheet(cplx z) const;
  // K(w +- i0) - w, side = +1 or -1
  Mat boundary_matrix(double w, int side) const;

  Mat resolvent_unchecked(cplx z) const;
  Mat second_sheet_resolvent(cplx z) const;
  Mat boundary_resolvent_unchecked(double w, int side) const;
  Mat spectral_density_unchecked(double w) const;

 private:
  ModelSpec spec_;
  ResolventOptions opt_;
  SelfEnergyEvaluator se_;
  Mat k0_, kz_raw_, kz_;
  double tau_kernel_ = 0.0;
};

Mat reduced_resolvent(const ResolventEvaluator& ev, cplx z);
Mat boundary_resolvent(const ResolventEvaluator& ev, double w, int side);
Mat spectral_density(const ResolventEvaluator& ev, double w);
// lambda^2 pi R+ Gamma R-, the second route to Im R+
Mat spectral_density_product(const ResolventEvaluator& ev, double w);

struct SpectrumScan {
  bool clean = true;
  std::vector<double> grid;
  std::vector<double> min_singular;
  std::vector<double> flagged;
};

SpectrumScan scan_positive_spectrum(const ResolventEvaluator& ev, const std::vector<double>& grid);
std::vector<double> default_scan_grid(const ResolventEvaluator& ev, int points = 400);

struct NegativeEigenvalue {
  double x;
  Vec vector;
  double residual;
};

std::vector<NegativeEigenvalue> find_negative_eigenvalues(const ResolventEvaluator& ev);

struct SearchRectangle {
  double re_min, re_max, im_min, im_max;
};

struct ResonancePole {
  cplx z;
  double det_abs;
  Mat residue;  // residue of the second-sheet resolvent
};

struct ResonanceSearch {
  std::vector<ResonancePole> poles;
  int failed_seeds = 0;
};

ResonanceSearch find_resonance_poles(const ResolventEvaluator& ev, const SearchRectangle& box, int grid = 12);
Mat second_sheet_residue(const ResolventEvaluator& ev, cplx pole, double radius);

}  // namespace friedrichs
