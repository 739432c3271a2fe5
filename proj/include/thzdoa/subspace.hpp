#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "thzdoa/array.hpp"

namespace thzdoa {

// Conjugate-symmetric (to 1e-12 relative) matrix with finite entries.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Eigen::MatrixXcd m);

  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
  Eigen::Index dimension() const noexcept { return m_.rows(); }

 private:
  Eigen::MatrixXcd m_;
};

// (1/K) Y Yᴴ, K = Y.cols().
HermitianMatrix sample_covariance(const Eigen::Ref<const Eigen::MatrixXcd>& y);

// Eigenvalues descending, eigenvectors as matching orthonormal columns.
struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

EigenPairs hermitian_evd(const HermitianMatrix& a);

// Eigenvectors of the N - m smallest eigenvalues.
Eigen::MatrixXcd noise_subspace(const EigenPairs& pairs, int source_count);

// Uniform angle grid in degrees, both ends included.
struct AngleGrid {
  double min_deg = -90.0;
  double max_deg = 90.0;
  double step_deg = 0.01;

  void validate() const;
  std::size_t size() const;
  // Rounded to 1e-10 degree so decimal grids print cleanly.
  double angle(std::size_t i) const;
};

struct MusicSpectrum {
  std::vector<double> angles_deg;
  std::vector<double> values;
  double step_deg = 0.0;
};

struct BinCovariance {
  HermitianMatrix covariance;
  double frequency_hz;
};

inline constexpr double kMusicDenominatorFloor = 1e-18;

// Σ_l aᴴa / max(aᴴ E_n E_nᴴ a, floor) evaluated at (f_l, θ) for every θ of the grid.
// Bins are summed in order, so the result does not depend on how the EVDs were scheduled.
MusicSpectrum imusic_spectrum(std::span<const BinCovariance> per_bin, const UlaGeometry& geom, const AngleGrid& grid,
                              int source_count = 1);

// Same as above from per-bin noise subspaces already extracted.
MusicSpectrum imusic_spectrum_from_subspaces(std::span<const Eigen::MatrixXcd> noise_subspaces,
                                             std::span<const double> frequencies_hz, const UlaGeometry& geom,
                                             const AngleGrid& grid);

// Argmax (ties → smallest angle); with `refine`, three-point parabolic vertex clamped to ±1 cell.
double estimate_doa(const MusicSpectrum& spectrum, bool refine);

// `theta_deg,value` rows with a header.
void write_spectrum_csv(const MusicSpectrum& spectrum, std::ostream& out);

}  // namespace thzdoa
