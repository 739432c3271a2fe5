#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "linalg_support.hpp"
#include "thzdoa/error.hpp"
#include "thzdoa/subspace.hpp"

using namespace thzdoa;
using Catch::Approx;

TEST_CASE("Hermitian matrix validation") {
  std::mt19937_64 rng(1);
  CHECK_NOTHROW(HermitianMatrix(testing::random_hermitian(5, rng)));
  CHECK_THROWS_AS(HermitianMatrix(Eigen::MatrixXcd::Zero(3, 4)), DomainError);
  Eigen::MatrixXcd bad = testing::random_hermitian(4, rng);
  bad(0, 1) += std::complex<double>(0.0, 1e-3);
  CHECK_THROWS_AS(HermitianMatrix(bad), DomainError);
  Eigen::MatrixXcd nan = testing::random_hermitian(4, rng);
  nan(2, 2) = std::nan("");
  CHECK_THROWS_AS(HermitianMatrix(nan), DomainError);
}

TEST_CASE("sample covariance") {
  std::mt19937_64 rng(2);
  SECTION("single snapshot gives the rank-one outer product") {
    const Eigen::MatrixXcd y = testing::random_complex(8, 1, rng);
    const auto r = sample_covariance(y);
    CHECK((r.matrix() - y * y.adjoint()).norm() < 1e-14 * y.squaredNorm());
    const auto pairs = hermitian_evd(r);
    CHECK(pairs.values[0] == Approx(y.squaredNorm()).epsilon(1e-12));
    for (int i = 1; i < 8; ++i) CHECK(std::abs(pairs.values[i]) < 1e-12 * pairs.values[0]);
  }
  SECTION("matches (1/K) Y Y^H and is positive semidefinite") {
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::MatrixXcd y = testing::random_complex(8, 1 + trial % 12, rng);
      const auto r = sample_covariance(y);
      const Eigen::MatrixXcd ref = y * y.adjoint() / static_cast<double>(y.cols());
      CHECK((r.matrix() - ref).norm() < 1e-13 * ref.norm());
      for (int i = 0; i < 8; ++i) CHECK(r.matrix()(i, i).imag() == 0.0);
      CHECK((r.matrix() - r.matrix().adjoint()).norm() == 0.0);
      const auto pairs = hermitian_evd(r);
      CHECK(pairs.values.minCoeff() >= -1e-12 * pairs.values.maxCoeff());
    }
  }
}

TEST_CASE("Hermitian eigendecomposition") {
  std::mt19937_64 rng(3);
  SECTION("recovers a constructed spectrum") {
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::MatrixXcd u = testing::random_unitary(8, rng);
      Eigen::VectorXd lambda(8);
      std::uniform_real_distribution<double> dist(-5.0, 5.0);
      for (auto& v : lambda) v = dist(rng);
      const Eigen::MatrixXcd a = u * lambda.asDiagonal() * u.adjoint();
      const auto pairs = hermitian_evd(HermitianMatrix(0.5 * (a + a.adjoint())));
      std::sort(lambda.begin(), lambda.end(), std::greater<>());
      CHECK((pairs.values - lambda).cwiseAbs().maxCoeff() < 1e-12 * lambda.cwiseAbs().maxCoeff());
    }
  }
  SECTION("reconstruction, orthonormality, ordering and trace") {
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::MatrixXcd a = testing::random_hermitian(8, rng);
      const auto pairs = hermitian_evd(HermitianMatrix(a));
      const auto& v = pairs.vectors;
      const Eigen::MatrixXcd rebuilt = v * pairs.values.asDiagonal() * v.adjoint();
      CHECK((rebuilt - a).norm() < 1e-10 * a.norm());
      CHECK((v.adjoint() * v - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-12);
      for (int i = 1; i < 8; ++i) CHECK(pairs.values[i - 1] >= pairs.values[i]);
      CHECK(std::abs(pairs.values.sum() - a.trace().real()) < 1e-10 * a.norm());
    }
  }
  SECTION("degenerate eigenvalues keep an orthonormal basis") {
    const Eigen::MatrixXcd u = testing::random_unitary(6, rng);
    Eigen::VectorXd lambda(6);
    lambda << 3, 3, 3, 1, 1, 0;
    const Eigen::MatrixXcd a = u * lambda.asDiagonal() * u.adjoint();
    const auto pairs = hermitian_evd(HermitianMatrix(0.5 * (a + a.adjoint())));
    CHECK((pairs.vectors.adjoint() * pairs.vectors - Eigen::MatrixXcd::Identity(6, 6)).norm() < 1e-12);
    CHECK((pairs.vectors * pairs.values.asDiagonal() * pairs.vectors.adjoint() - a).norm() < 1e-12 * a.norm());
  }
}

TEST_CASE("noise subspace") {
  const UlaGeometry geom;
  const auto a = steering_vector(4e12, 17.0, geom);
  const Eigen::MatrixXcd r = a * a.adjoint() + 1e-3 * Eigen::MatrixXcd::Identity(8, 8);
  const auto en = noise_subspace(hermitian_evd(HermitianMatrix(r)), 1);
  CHECK(en.rows() == 8);
  CHECK(en.cols() == 7);
  CHECK((en.adjoint() * a).norm() < 1e-10);
  CHECK((en.adjoint() * en - Eigen::MatrixXcd::Identity(7, 7)).norm() < 1e-12);
  const auto pairs = hermitian_evd(HermitianMatrix(r));
  CHECK_THROWS_AS(noise_subspace(pairs, 0), DomainError);
  CHECK_THROWS_AS(noise_subspace(pairs, 8), DomainError);
}

TEST_CASE("angle grid") {
  const AngleGrid g;
  CHECK(g.size() == 18001);
  CHECK(g.angle(0) == -90.0);
  CHECK(g.angle(18000) == 90.0);
  CHECK(g.angle(10025) == 10.25);
  CHECK(g.angle(9000) == 0.0);
  CHECK(AngleGrid{-10, 10, 0.5}.size() == 41);
  CHECK_THROWS_AS((AngleGrid{10, -10, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS((AngleGrid{-91, 10, 0.5}.validate()), DomainError);
  CHECK_THROWS_AS((AngleGrid{-10, 10, 0.0}.validate()), DomainError);
}

namespace {

std::vector<BinCovariance> noiseless_bins(double theta, const UlaGeometry& geom, std::initializer_list<double> freqs,
                                          double scale = 1.0) {
  std::vector<BinCovariance> bins;
  for (double f : freqs) {
    const auto a = steering_vector(f, theta, geom);
    bins.push_back({HermitianMatrix(scale * a * a.adjoint()), f});
  }
  return bins;
}

}  // namespace

TEST_CASE("incoherent MUSIC spectrum") {
  const UlaGeometry geom;
  const AngleGrid grid{-90, 90, 0.01};

  SECTION("noiseless bins peak on the true grid angle") {
    for (double theta : {-61.37, -3.5, 0.0, 10.25, 44.44, 72.01}) {
      const auto bins = noiseless_bins(theta, geom, {1e12, 4.5e12, 9.9e12});
      const auto s = imusic_spectrum(bins, geom, grid);
      CHECK(estimate_doa(s, false) == theta);
    }
  }
  SECTION("size and axis") {
    const auto s = imusic_spectrum(noiseless_bins(5.0, geom, {3e12}), geom, grid);
    CHECK(s.values.size() == grid.size());
    CHECK(s.angles_deg.front() == -90.0);
    CHECK(s.angles_deg.back() == 90.0);
    CHECK(s.step_deg == 0.01);
    for (double v : s.values) REQUIRE(v > 0.0);
  }
  SECTION("scale invariance") {
    std::mt19937_64 rng(4);
    std::vector<BinCovariance> a, b;
    for (double f : {2e12, 5e12, 8e12}) {
      const Eigen::MatrixXcd y = testing::random_complex(8, 3, rng);
      const Eigen::MatrixXcd r = y * y.adjoint();
      a.push_back({HermitianMatrix(r), f});
      b.push_back({HermitianMatrix(1e-17 * r), f});
    }
    const auto sa = imusic_spectrum(a, geom, grid);
    const auto sb = imusic_spectrum(b, geom, grid);
    for (std::size_t t = 0; t < sa.values.size(); ++t) REQUIRE(sb.values[t] == Approx(sa.values[t]).epsilon(1e-9));
  }
  SECTION("bins add incoherently") {
    std::mt19937_64 rng(5);
    std::vector<BinCovariance> all;
    std::vector<std::vector<double>> singles;
    for (double f : {1.5e12, 6.5e12}) {
      const Eigen::MatrixXcd y = testing::random_complex(8, 4, rng);
      BinCovariance bin{HermitianMatrix(y * y.adjoint()), f};
      singles.push_back(imusic_spectrum(std::span(&bin, 1), geom, grid).values);
      all.push_back(bin);
    }
    const auto sum = imusic_spectrum(all, geom, grid);
    for (std::size_t t = 0; t < sum.values.size(); ++t) {
      REQUIRE(sum.values[t] == Approx(singles[0][t] + singles[1][t]).epsilon(1e-12));
    }
  }
  SECTION("closed form at arbitrary angles") {
    std::mt19937_64 rng(6);
    const Eigen::MatrixXcd y = testing::random_complex(8, 2, rng);
    const BinCovariance bin{HermitianMatrix(y * y.adjoint()), 3.1e12};
    const auto en = noise_subspace(hermitian_evd(bin.covariance), 1);
    const AngleGrid coarse{-80, 80, 7.3};
    const auto s = imusic_spectrum(std::span(&bin, 1), geom, coarse);
    for (std::size_t t = 0; t < s.values.size(); ++t) {
      const auto a = steering_vector(3.1e12, coarse.angle(t), geom);
      const double denom = (en.adjoint() * a).squaredNorm();
      REQUIRE(s.values[t] == Approx(8.0 / denom).epsilon(1e-9));
    }
  }
  SECTION("precomputed subspaces give the same spectrum") {
    const auto bins = noiseless_bins(-20.0, geom, {2e12, 3e12});
    std::vector<Eigen::MatrixXcd> subspaces;
    std::vector<double> freqs;
    for (const auto& b : bins) {
      subspaces.push_back(noise_subspace(hermitian_evd(b.covariance), 1));
      freqs.push_back(b.frequency_hz);
    }
    const auto s1 = imusic_spectrum(bins, geom, grid);
    const auto s2 = imusic_spectrum_from_subspaces(subspaces, freqs, geom, grid);
    CHECK(s1.values == s2.values);
  }
  SECTION("errors") {
    CHECK_THROWS_AS(imusic_spectrum({}, geom, grid), DomainError);
    const auto bins = noiseless_bins(0.0, geom, {2e12});
    CHECK_THROWS_AS(imusic_spectrum(bins, UlaGeometry{4, 15e-6}, grid), DomainError);
  }
}

TEST_CASE("peak picking") {
  MusicSpectrum s;
  s.step_deg = 1.0;
  s.angles_deg = {-2, -1, 0, 1, 2};
  SECTION("ties go to the smallest angle") {
    s.values = {1, 5, 3, 5, 1};
    CHECK(estimate_doa(s, false) == -1.0);
  }
  SECTION("parabolic refinement finds the vertex") {
    const double t0 = 0.3;
    for (std::size_t i = 0; i < 5; ++i) s.values.push_back(10.0 - (s.angles_deg[i] - t0) * (s.angles_deg[i] - t0));
    CHECK(estimate_doa(s, false) == 0.0);
    CHECK(estimate_doa(s, true) == Approx(0.3).epsilon(1e-12));
  }
  SECTION("edge maxima are not refined") {
    s.values = {9, 5, 3, 2, 1};
    CHECK(estimate_doa(s, true) == -2.0);
  }
  SECTION("empty spectrum") {
    CHECK_THROWS_AS(estimate_doa(MusicSpectrum{}, true), DomainError);
  }
}

TEST_CASE("spectrum CSV") {
  const UlaGeometry geom;
  const AngleGrid grid{-1, 1, 0.25};
  const auto s = imusic_spectrum(noiseless_bins(0.5, geom, {3e12}), geom, grid);
  std::ostringstream out;
  write_spectrum_csv(s, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta_deg,value");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == grid.size());
  CHECK(out.str().find("\n0.5,") != std::string::npos);
}
