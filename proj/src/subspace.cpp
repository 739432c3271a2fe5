#include "thzdoa/subspace.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "thzdoa/constants.hpp"
#include "thzdoa/error.hpp"

namespace thzdoa {

HermitianMatrix::HermitianMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw DomainError("Hermitian matrix must be square and non-empty");
  if (!m_.allFinite()) throw DomainError("Hermitian matrix has non-finite entries");
  const double scale = m_.cwiseAbs().maxCoeff();
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw DomainError("matrix is not Hermitian (asymmetry " + std::to_string(asym / scale) + " relative)");
  }
}

HermitianMatrix sample_covariance(const Eigen::Ref<const Eigen::MatrixXcd>& y) {
  const Eigen::Index n = y.rows();
  const Eigen::Index k = y.cols();
  if (k == 0) throw DomainError("sample covariance needs at least one snapshot");
  const double inv_k = 1.0 / static_cast<double>(k);

  Eigen::MatrixXcd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index s = 0; s < k; ++s) diag += std::norm(y(i, s));
    r(i, i) = {diag * inv_k, 0.0};
    for (Eigen::Index j = i + 1; j < n; ++j) {
      std::complex<double> acc{0.0, 0.0};
      for (Eigen::Index s = 0; s < k; ++s) acc += y(i, s) * std::conj(y(j, s));
      r(i, j) = acc * inv_k;
      r(j, i) = std::conj(r(i, j));
    }
  }
  return HermitianMatrix(std::move(r));
}

EigenPairs hermitian_evd(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw DomainError("Hermitian eigendecomposition did not converge");
  // Eigen sorts ascending.
  EigenPairs out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Eigen::MatrixXcd noise_subspace(const EigenPairs& pairs, int source_count) {
  const auto n = static_cast<int>(pairs.values.size());
  if (source_count < 1 || source_count >= n) {
    throw DomainError("source count must be in [1, " + std::to_string(n - 1) + "], got " +
                      std::to_string(source_count));
  }
  return pairs.vectors.rightCols(n - source_count);
}

void AngleGrid::validate() const {
  if (!std::isfinite(min_deg) || !std::isfinite(max_deg) || !(max_deg > min_deg)) {
    throw DomainError("angle grid needs finite min < max");
  }
  if (min_deg < -90.0 || max_deg > 90.0) throw DomainError("angle grid must lie within [-90, 90] degrees");
  if (!(step_deg > 0.0)) throw DomainError("angle grid step must be positive");
}

double AngleGrid::angle(std::size_t i) const {
  return std::round((min_deg + static_cast<double>(i) * step_deg) * 1e10) / 1e10;
}

std::size_t AngleGrid::size() const {
  return static_cast<std::size_t>(std::floor((max_deg - min_deg) / step_deg + 1e-9)) + 1;
}

MusicSpectrum imusic_spectrum_from_subspaces(std::span<const Eigen::MatrixXcd> noise_subspaces,
                                             std::span<const double> frequencies_hz, const UlaGeometry& geom,
                                             const AngleGrid& grid) {
  if (noise_subspaces.empty()) throw DomainError("IMUSIC needs at least one frequency bin");
  if (noise_subspaces.size() != frequencies_hz.size()) throw DomainError("one frequency per bin required");
  grid.validate();
  const int n = geom.element_count;
  for (const auto& e : noise_subspaces) {
    if (e.rows() != n) {
      throw DomainError("noise subspace has " + std::to_string(e.rows()) + " rows, array has " + std::to_string(n));
    }
  }

  const std::size_t count = grid.size();
  MusicSpectrum out;
  out.step_deg = grid.step_deg;
  out.angles_deg.resize(count);
  out.values.assign(count, 0.0);
  std::vector<double> sines(count);
  for (std::size_t t = 0; t < count; ++t) {
    out.angles_deg[t] = grid.angle(t);
    sines[t] = std::sin(out.angles_deg[t] * kDegToRad);
  }

  // a_i(θ) = z^i with z = exp(-j2πf d_s sin θ / c0), so eᴴa is a polynomial in z (Horner).
  std::vector<double> coef_re;
  std::vector<double> coef_im;
  for (std::size_t l = 0; l < noise_subspaces.size(); ++l) {
    const auto& e = noise_subspaces[l];
    const auto cols = static_cast<std::size_t>(e.cols());
    coef_re.resize(cols * n);
    coef_im.resize(cols * n);
    for (std::size_t c = 0; c < cols; ++c) {
      for (int i = 0; i < n; ++i) {
        const auto v = e(i, static_cast<Eigen::Index>(c));
        coef_re[c * n + i] = v.real();
        coef_im[c * n + i] = -v.imag();
      }
    }
    const double phase_scale = -kTwoPi * frequencies_hz[l] * geom.spacing_m / kSpeedOfLight;
    const double numerator = n;

    for (std::size_t t = 0; t < count; ++t) {
      const double phase = phase_scale * sines[t];
      const double zr = std::cos(phase);
      const double zi = std::sin(phase);
      double den = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        const double* cr = &coef_re[c * n];
        const double* ci = &coef_im[c * n];
        double pr = cr[n - 1];
        double pi = ci[n - 1];
        for (int i = n - 2; i >= 0; --i) {
          const double r = pr * zr - pi * zi + cr[i];
          pi = pr * zi + pi * zr + ci[i];
          pr = r;
        }
        den += pr * pr + pi * pi;
      }
      out.values[t] += numerator / std::max(den, kMusicDenominatorFloor);
    }
  }
  return out;
}

MusicSpectrum imusic_spectrum(std::span<const BinCovariance> per_bin, const UlaGeometry& geom, const AngleGrid& grid,
                              int source_count) {
  if (per_bin.empty()) throw DomainError("IMUSIC needs at least one frequency bin");
  std::vector<Eigen::MatrixXcd> subspaces;
  std::vector<double> freqs;
  subspaces.reserve(per_bin.size());
  freqs.reserve(per_bin.size());
  for (const auto& b : per_bin) {
    if (b.covariance.dimension() != geom.element_count) {
      throw DomainError("covariance is " + std::to_string(b.covariance.dimension()) + "x" +
                        std::to_string(b.covariance.dimension()) + ", array has " +
                        std::to_string(geom.element_count) + " elements");
    }
    subspaces.push_back(noise_subspace(hermitian_evd(b.covariance), source_count));
    freqs.push_back(b.frequency_hz);
  }
  return imusic_spectrum_from_subspaces(subspaces, freqs, geom, grid);
}

double estimate_doa(const MusicSpectrum& spectrum, bool refine) {
  const auto& v = spectrum.values;
  if (v.empty()) throw DomainError("cannot estimate DOA from an empty spectrum");
  std::size_t best = 0;
  for (std::size_t t = 1; t < v.size(); ++t) {
    if (v[t] > v[best]) best = t;
  }
  double theta = spectrum.angles_deg[best];
  if (refine && best > 0 && best + 1 < v.size()) {
    const double y0 = v[best - 1];
    const double y1 = v[best];
    const double y2 = v[best + 1];
    const double curvature = y0 - 2.0 * y1 + y2;
    if (curvature < 0.0) {
      const double delta = std::clamp(0.5 * (y0 - y2) / curvature, -1.0, 1.0);
      theta += delta * spectrum.step_deg;
    }
  }
  return theta;
}

void write_spectrum_csv(const MusicSpectrum& spectrum, std::ostream& out) {
  out << "theta_deg,value\n";
  char buf[64];
  for (std::size_t t = 0; t < spectrum.values.size(); ++t) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, spectrum.angles_deg[t]);
    *p++ = ',';
    auto [q, ec2] = std::to_chars(p, buf + sizeof buf, spectrum.values[t]);
    *q++ = '\n';
    out.write(buf, q - buf);
  }
}

}  // namespace thzdoa
