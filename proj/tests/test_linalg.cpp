#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <doctest.h>

#include "cmbeam/errors.hpp"
#include "cmbeam/linalg.hpp"
#include "test_support.hpp"

using namespace cmbeam;
using testutil::max_abs_diff;
using testutil::random_hermitian;
using testutil::random_psd;

namespace {

// Characteristic polynomial by the Faddeev-LeVerrier recursion: coefficients
// of lambda^n + c[n-1] lambda^(n-1) + ... + c[0], independent of any
// eigensolver.
std::vector<std::complex<double>> char_poly(const ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<std::complex<double>> c(static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(n)] = 1.0;
  ComplexMatrix m = ComplexMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    if (k > 1)
      m = ComplexMatrix(a * m +
                        c[static_cast<std::size_t>(n - k + 1)] *
                            ComplexMatrix::Identity(n, n));
    c[static_cast<std::size_t>(n - k)] =
        -(a * m).trace() / static_cast<double>(k);
  }
  return c;
}

// Durand-Kerner simultaneous root iteration for a monic polynomial.
std::vector<std::complex<double>> poly_roots(
    const std::vector<std::complex<double>>& c) {
  const std::size_t n = c.size() - 1;
  const auto eval = [&](std::complex<double> z) {
    std::complex<double> v = 1.0;
    for (std::size_t k = n; k-- > 0;) v = v * z + c[k];
    return v;
  };
  std::vector<std::complex<double>> z(n);
  const std::complex<double> g(0.4, 0.9);
  std::complex<double> acc = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc *= g;
    z[i] = acc;
  }
  for (int it = 0; it < 500; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      z[i] -= eval(z[i]) / denom;
    }
  }
  return z;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("hermitian matrix symmetrizes exactly") {
    const ComplexMatrix raw = testutil::random_complex(5, 5, 11);
    const HermitianMatrix h(raw);
    const ComplexMatrix& m = h.matrix();
    for (Eigen::Index i = 0; i < 5; ++i)
      for (Eigen::Index j = 0; j < 5; ++j)
        CHECK(m(i, j) == std::conj(m(j, i)));
    CHECK(max_abs_diff(m, 0.5 * (raw + raw.adjoint())) == 0.0);
  }

  TEST_CASE("hermitian matrix rejects bad shapes") {
    CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix(2, 3)), InvalidArgument);
    CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix(0, 0)), InvalidArgument);
    CHECK(max_abs_diff(HermitianMatrix::identity(3).matrix(),
                       ComplexMatrix::Identity(3, 3)) == 0.0);
    CHECK(max_abs_diff(HermitianMatrix::zero(2).matrix(),
                       ComplexMatrix::Zero(2, 2)) == 0.0);
  }

  TEST_CASE("eigendecomposition: descending order and reconstruction") {
    const HermitianMatrix h(random_hermitian(6, 21));
    const EigenDecomposition ed = hermitian_eig(h);
    for (Eigen::Index i = 0; i + 1 < 6; ++i)
      CHECK(ed.eigenvalues[i] >= ed.eigenvalues[i + 1]);
    const ComplexMatrix recon = ed.eigenvectors *
                                ed.eigenvalues.asDiagonal() *
                                ed.eigenvectors.adjoint();
    CHECK(max_abs_diff(recon, h.matrix()) < 1e-12);
    CHECK(max_abs_diff(ed.eigenvectors.adjoint() * ed.eigenvectors,
                       ComplexMatrix::Identity(6, 6)) < 1e-12);
  }

  TEST_CASE("eigenvalues of a spectrum built by hand") {
    // A = V diag(5,2,1,-1) V^H with V a product of two Givens rotations;
    // the spectrum is known before any solver runs.
    ComplexMatrix v = ComplexMatrix::Identity(4, 4);
    const double c1 = std::cos(0.3), s1 = std::sin(0.3);
    ComplexMatrix g1 = ComplexMatrix::Identity(4, 4);
    g1(0, 0) = c1;
    g1(0, 2) = -s1;
    g1(2, 0) = s1;
    g1(2, 2) = c1;
    ComplexMatrix g2 = ComplexMatrix::Identity(4, 4);
    const std::complex<double> phase(std::cos(1.1), std::sin(1.1));
    const double c2 = std::cos(0.7), s2 = std::sin(0.7);
    g2(1, 1) = c2;
    g2(1, 3) = -s2 * phase;
    g2(3, 1) = s2 * std::conj(phase);
    g2(3, 3) = c2;
    v = g1 * g2;
    RealVector lam(4);
    lam << 5.0, 2.0, 1.0, -1.0;
    const HermitianMatrix a(
        ComplexMatrix(v * lam.asDiagonal() * v.adjoint()));
    const EigenDecomposition ed = hermitian_eig(a);
    for (Eigen::Index i = 0; i < 4; ++i) {
      CHECK(ed.eigenvalues[i] == doctest::Approx(lam[i]).epsilon(1e-12));
      // eigenvector matches the constructed one up to a global phase
      CHECK(std::abs(ed.eigenvectors.col(i).dot(v.col(i))) ==
            doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  TEST_CASE("eigenvalues agree with characteristic-polynomial roots") {
    const ComplexMatrix a = random_hermitian(4, 33);
    const EigenDecomposition ed = hermitian_eig(HermitianMatrix(a));
    auto roots = poly_roots(char_poly(a));
    std::vector<double> ref;
    for (const auto& r : roots) {
      CHECK(std::abs(r.imag()) < 1e-8);  // Hermitian: real spectrum
      ref.push_back(r.real());
    }
    std::sort(ref.begin(), ref.end(), std::greater<>());
    for (Eigen::Index i = 0; i < 4; ++i)
      CHECK(ed.eigenvalues[i] ==
            doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-8));
  }

  TEST_CASE("psd projection matches 2x2 brute force") {
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
      const ComplexMatrix m = random_hermitian(2, seed);
      const ComplexMatrix proj = psd_project(HermitianMatrix(m)).matrix();

      // brute force: search PSD Z = [[a, c],[conj(c), b]] minimizing
      // ||Z - M||_F by a shrinking grid over (a, b, re c, im c)
      const double radius = 2.0 * m.norm() + 1.0;
      double best[4] = {radius / 2, radius / 2, 0.0, 0.0};
      double best_val = std::numeric_limits<double>::infinity();
      double span = radius;
      for (int level = 0; level < 24; ++level) {
        const double step = span / 6.0;
        double center[4] = {best[0], best[1], best[2], best[3]};
        for (double a = center[0] - span; a <= center[0] + span + 1e-15;
             a += step)
          for (double b = center[1] - span; b <= center[1] + span + 1e-15;
               b += step)
            for (double cr = center[2] - span;
                 cr <= center[2] + span + 1e-15; cr += step)
              for (double ci = center[3] - span;
                   ci <= center[3] + span + 1e-15; ci += step) {
                if (a < 0.0 || b < 0.0 || a * b < cr * cr + ci * ci)
                  continue;  // not PSD
                ComplexMatrix z(2, 2);
                z << a, std::complex<double>(cr, ci),
                    std::complex<double>(cr, -ci), b;
                const double val = (z - m).squaredNorm();
                if (val < best_val) {
                  best_val = val;
                  best[0] = a;
                  best[1] = b;
                  best[2] = cr;
                  best[3] = ci;
                }
              }
        span *= 0.45;
      }
      ComplexMatrix z(2, 2);
      z << best[0], std::complex<double>(best[2], best[3]),
          std::complex<double>(best[2], -best[3]), best[1];
      CHECK(max_abs_diff(proj, z) < 1e-3);
      CHECK(std::sqrt(best_val) ==
            doctest::Approx((proj - m).norm()).epsilon(1e-3));
    }
  }

  TEST_CASE("psd projection: idempotent, PSD output, fixes PSD inputs") {
    const HermitianMatrix h(random_hermitian(5, 77));
    const HermitianMatrix once = psd_project(h);
    const HermitianMatrix twice = psd_project(once);
    CHECK(max_abs_diff(once.matrix(), twice.matrix()) < 1e-10);
    const EigenDecomposition ed = hermitian_eig(once);
    CHECK(ed.eigenvalues.minCoeff() >= -1e-12);
    const ComplexMatrix p = random_psd(4, 78);
    CHECK(max_abs_diff(psd_project(HermitianMatrix(p)).matrix(), p) < 1e-12);
  }

  TEST_CASE("sample covariance matches the hand computation") {
    // x1 = [1+i, 2], x2 = [0, i]:
    // sum x x^H = [[2, 2+2i], [2-2i, 5]]
    ComplexMatrix x(2, 2);
    x << std::complex<double>(1, 1), 0.0, 2.0, std::complex<double>(0, 1);
    const ComplexMatrix r = sample_covariance(x).matrix();
    ComplexMatrix expected(2, 2);
    expected << 2.0, std::complex<double>(2, 2), std::complex<double>(2, -2),
        5.0;
    CHECK(max_abs_diff(r, expected) < 1e-14);
    CHECK_THROWS_AS(sample_covariance(ComplexMatrix(2, 0)), InvalidArgument);
  }

  TEST_CASE("eigendecomposition rejects non-finite input") {
    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(hermitian_eig(HermitianMatrix(bad)), InvalidArgument);
  }
}
