#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qrgitf/errors.hpp"
#include "qrgitf/qcore.hpp"
#include "support/random_states.hpp"
#include "support/reference.hpp"

using namespace qrgitf;
using namespace qrgitf::qcore;
using qrgitf::testing::bell_state;
using qrgitf::testing::diagonal_state;
using qrgitf::testing::literal_block_state;
using qrgitf::testing::maximally_mixed;
using qrgitf::testing::product_00;
using qrgitf::testing::random_state;

namespace {

// alpha^2 and beta^2 at g = 1 (s = 1 + sqrt 2).
constexpr double kAlphaSqAtCritical = 0.853553390593273762;
constexpr double kBetaSqAtCritical = 0.146446609406726238;

TwoQubitDensityMatrix block_state(double g) { return TwoQubitDensityMatrix(literal_block_state(g)); }

}  // namespace

TEST_CASE("jacobi agrees with an independent eigensolver") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = {normal(rng), normal(rng)};
    }
    const Eigen::MatrixXcd h = g + g.adjoint();
    const auto mine = jacobi_eigensolve(h);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> reference(h);
    for (int k = 0; k < n; ++k) {
      CHECK(mine.values[k] == doctest::Approx(reference.eigenvalues()[n - 1 - k]).epsilon(1e-12));
      const Eigen::VectorXcd residual = h * mine.vectors.col(k) - mine.values[k] * mine.vectors.col(k);
      CHECK(residual.norm() < 1e-11 * std::max(1.0, h.norm()));
    }
    CHECK((mine.vectors.adjoint() * mine.vectors - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-12);
  }
}

TEST_CASE("hermitian_eigenvalues") {
  SUBCASE("diagonal matrix") {
    ComplexMatrix4 m = ComplexMatrix4::Zero();
    m.diagonal() << 0.2, 0.5, 0.0, 0.3;
    const auto v = hermitian_eigenvalues(m);
    CHECK(v[0] == doctest::Approx(0.5));
    CHECK(v[1] == doctest::Approx(0.3));
    CHECK(v[2] == doctest::Approx(0.2));
    CHECK(v[3] == doctest::Approx(0.0));
  }
  SUBCASE("pure block state has spectrum (1, 0, 0, 0)") {
    for (double g : {0.0, 0.3, 1.0, 2.5}) {
      const auto v = hermitian_eigenvalues(literal_block_state(g));
      CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
      for (int k = 1; k < 4; ++k) CHECK(std::abs(v[k]) < 1e-12);
    }
  }
  SUBCASE("partial transpose of a Bell state") {
    const auto v = hermitian_eigenvalues(partial_transpose(bell_state(), Subsystem::A));
    CHECK(v[0] == doctest::Approx(0.5));
    CHECK(v[1] == doctest::Approx(0.5));
    CHECK(v[2] == doctest::Approx(0.5));
    CHECK(v[3] == doctest::Approx(-0.5));
  }
  SUBCASE("non-Hermitian input is rejected") {
    ComplexMatrix4 m = ComplexMatrix4::Identity();
    m(0, 1) = 1e-6;
    CHECK_THROWS_AS(hermitian_eigenvalues(m), ValidationError);
  }
  SUBCASE("spectra of random states sum to one and lie in [0, 1]") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
      const auto v = hermitian_eigenvalues(random_state(rng, 1 + i % 4).matrix());
      CHECK(v[0] + v[1] + v[2] + v[3] == doctest::Approx(1.0).epsilon(1e-10));
      for (double x : v) {
        CHECK(x >= -1e-10);
        CHECK(x <= 1.0 + 1e-10);
      }
    }
  }
}

TEST_CASE("density matrix validation") {
  ComplexMatrix4 m = 0.25 * ComplexMatrix4::Identity();
  m(0, 0) += 0.1;
  CHECK_THROWS_AS(TwoQubitDensityMatrix{m}, ValidationError);

  ComplexMatrix4 negative = ComplexMatrix4::Zero();
  negative.diagonal() << 1.2, -0.2, 0.0, 0.0;
  CHECK_THROWS_AS(TwoQubitDensityMatrix{negative}, ValidationError);

  ComplexMatrix4 skew = 0.25 * ComplexMatrix4::Identity();
  skew(0, 1) = Complex{0.0, 0.1};
  skew(1, 0) = Complex{0.0, 0.1};
  CHECK_THROWS_AS(TwoQubitDensityMatrix{skew}, ValidationError);

  CHECK_NOTHROW(TwoQubitDensityMatrix{0.25 * ComplexMatrix4::Identity()});
}

TEST_CASE("von_neumann_entropy") {
  CHECK(von_neumann_entropy(maximally_mixed(), LogBase::Bits) == doctest::Approx(2.0));
  CHECK(von_neumann_entropy(bell_state(), LogBase::Bits) == doctest::Approx(0.0));
  CHECK(von_neumann_entropy(block_state(0.7), LogBase::Bits) < 1e-10);

  ComplexMatrix2 m = ComplexMatrix2::Zero();
  m.diagonal() << kAlphaSqAtCritical, kBetaSqAtCritical;
  CHECK(von_neumann_entropy(QubitDensityMatrix(m), LogBase::Bits) ==
        doctest::Approx(0.600876036692856101).epsilon(1e-12));

  SUBCASE("nats are ln 2 times bits") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
      const auto rho = random_state(rng);
      CHECK(std::abs(von_neumann_entropy(rho, LogBase::Nats) -
                     std::numbers::ln2 * von_neumann_entropy(rho, LogBase::Bits)) < 1e-12);
      const double s = von_neumann_entropy(rho, LogBase::Bits);
      CHECK(s >= 0.0);
      CHECK(s <= 2.0 + 1e-12);
    }
  }

  SUBCASE("clamping") {
    const std::array<double, 3> noisy{1.0, -5e-11, 0.0};
    CHECK(entropy_of_spectrum(noisy, LogBase::Bits) == 0.0);
    const std::array<double, 2> bad{1.1, -0.1};
    CHECK_THROWS_AS(entropy_of_spectrum(bad, LogBase::Bits), ValidationError);
  }
}

TEST_CASE("partial_trace") {
  const auto half = partial_trace(maximally_mixed(), Subsystem::A).matrix();
  CHECK((half - 0.5 * ComplexMatrix2::Identity()).norm() < 1e-15);

  const auto rho_a = partial_trace(block_state(1.0), Subsystem::A).matrix();
  CHECK(rho_a(0, 0).real() == doctest::Approx(kBetaSqAtCritical).epsilon(1e-12));
  CHECK(rho_a(1, 1).real() == doctest::Approx(kAlphaSqAtCritical).epsilon(1e-12));
  CHECK(std::abs(rho_a(0, 1)) < 1e-15);

  const auto zero = partial_trace(product_00(), Subsystem::B).matrix();
  CHECK(zero(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(zero(1, 1)) < 1e-15);

  SUBCASE("asymmetric product state keeps the right factor") {
    // |0><0| x |+><+|
    ComplexVector4 psi;
    psi << 1.0, 1.0, 0.0, 0.0;
    const auto rho = TwoQubitDensityMatrix::from_pure(psi);
    const auto a = partial_trace(rho, Subsystem::A).bloch_vector();
    const auto b = partial_trace(rho, Subsystem::B).bloch_vector();
    CHECK(a.isApprox(Eigen::Vector3d(0, 0, 1), 1e-12));
    CHECK(b.isApprox(Eigen::Vector3d(1, 0, 0), 1e-12));
  }
}

TEST_CASE("partial_transpose") {
  const auto diag = diagonal_state(0.1, 0.2, 0.3, 0.4);
  CHECK(partial_transpose(diag, Subsystem::A) == diag.matrix());
  CHECK(partial_transpose(diag, Subsystem::B) == diag.matrix());

  const auto pt = partial_transpose(block_state(1.0), Subsystem::A);
  const auto v = hermitian_eigenvalues(pt);
  const double ab = std::sqrt(kAlphaSqAtCritical * kBetaSqAtCritical);
  CHECK(v[0] == doctest::Approx(kAlphaSqAtCritical).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(ab).epsilon(1e-12));
  CHECK(v[2] == doctest::Approx(kBetaSqAtCritical).epsilon(1e-12));
  CHECK(v[3] == doctest::Approx(-ab).epsilon(1e-12));

  CHECK(hermitian_eigenvalues(partial_transpose(bell_state(), Subsystem::B))[3] == doctest::Approx(-0.5));

  SUBCASE("involution preserving trace and Hermiticity") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
      const auto rho = random_state(rng);
      for (auto side : {Subsystem::A, Subsystem::B}) {
        const auto once = partial_transpose(rho, side);
        CHECK(partial_transpose(once, side) == rho.matrix());
        CHECK(once.trace() == rho.matrix().trace());
        CHECK(once == ComplexMatrix4(once.adjoint()));
      }
    }
  }
}

TEST_CASE("trace_norm") {
  CHECK(trace_norm(bell_state().matrix()) == doctest::Approx(1.0));
  CHECK(trace_norm(partial_transpose(bell_state(), Subsystem::A)) == doctest::Approx(2.0));
  CHECK(trace_norm(partial_transpose(block_state(1.0), Subsystem::A)) ==
        doctest::Approx(1.70710678118654752).epsilon(1e-12));

  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) CHECK(trace_norm(random_state(rng).matrix()) == doctest::Approx(1.0).epsilon(1e-12));

  ComplexMatrix4 m = ComplexMatrix4::Zero();
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(trace_norm(m), ValidationError);
}

TEST_CASE("bloch_decompose") {
  SUBCASE("Bell state") {
    const auto d = bloch_decompose(bell_state());
    CHECK(d.a.norm() < 1e-15);
    CHECK(d.b.norm() < 1e-15);
    CHECK((d.T - Eigen::Vector3d(1, -1, 1).asDiagonal().toDenseMatrix()).norm() < 1e-15);
  }
  SUBCASE("block state") {
    for (double g : {0.0, 0.4, 1.0, 2.2}) {
      const auto amp = qrgitf::testing::literal_amplitudes(g);
      const double t1 = 2.0 * amp.alpha * amp.beta;
      const double x = amp.beta * amp.beta - amp.alpha * amp.alpha;
      const auto d = bloch_decompose(block_state(g));
      CHECK((d.T - Eigen::Vector3d(t1, -t1, 1.0).asDiagonal().toDenseMatrix()).norm() < 1e-14);
      CHECK(d.a.isApprox(Eigen::Vector3d(0, 0, x), 1e-14));
      CHECK(d.b.isApprox(Eigen::Vector3d(0, 0, x), 1e-14));
      CHECK(d.a.z() == doctest::Approx(-g / std::sqrt(g * g + 1.0)).epsilon(1e-12));
    }
  }
  SUBCASE("maximally mixed") {
    const auto d = bloch_decompose(maximally_mixed());
    CHECK(d.a.norm() + d.b.norm() + d.T.norm() < 1e-15);
  }
  SUBCASE("reconstruction identity on random states") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 500; ++i) {
      const auto rho = random_state(rng, 1 + i % 4);
      const auto d = bloch_decompose(rho);
      CHECK((d.reconstruct() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(d.a.norm() <= 1.0 + 1e-12);
      CHECK(d.b.norm() <= 1.0 + 1e-12);
      CHECK(d.T.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("measurement bases") {
  CHECK_THROWS_AS(MeasurementBasis(-0.1, 0.0), DomainError);
  CHECK_THROWS_AS(MeasurementBasis(0.5, 2.0 * std::numbers::pi), DomainError);

  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> theta(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> phi(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 200; ++i) {
    const MeasurementBasis basis(theta(rng), phi(rng));
    const auto p = basis.projectors();
    CHECK((p[0] + p[1] - ComplexMatrix2::Identity()).norm() < 1e-12);
    CHECK((p[0] * p[0] - p[0]).norm() < 1e-12);
    CHECK((p[1] * p[1] - p[1]).norm() < 1e-12);
    // Bloch vector of the first projector is the basis direction.
    const auto r = QubitDensityMatrix(p[0]).bloch_vector();
    CHECK(r.isApprox(basis.direction(), 1e-12));
    const auto round_trip = MeasurementBasis::from_direction(basis.direction());
    CHECK(round_trip.direction().isApprox(basis.direction(), 1e-12));
  }
}

TEST_CASE("dephase_in_product_basis") {
  const auto z = MeasurementBasis::computational();
  const auto diag = diagonal_state(0.1, 0.2, 0.3, 0.4);
  CHECK((dephase_in_product_basis(diag, z, z).matrix() - diag.matrix()).norm() < 1e-15);

  const auto dephased = dephase_in_product_basis(block_state(1.0), z, z).matrix();
  ComplexMatrix4 expected = ComplexMatrix4::Zero();
  expected(0, 0) = kBetaSqAtCritical;
  expected(3, 3) = kAlphaSqAtCritical;
  CHECK((dephased - expected).norm() < 1e-12);

  const auto bell = dephase_in_product_basis(bell_state(), z, z).matrix();
  CHECK(bell(0, 0).real() == doctest::Approx(0.5));
  CHECK(bell(3, 3).real() == doctest::Approx(0.5));
  CHECK(std::abs(bell(0, 3)) < 1e-15);

  SUBCASE("result is diagonal in the chosen frame and keeps marginal weights") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
      const auto rho = random_state(rng);
      const MeasurementBasis ba(0.3 + 0.02 * i, 0.05 * i);
      const MeasurementBasis bb(2.0 - 0.01 * i, 0.03 * i);
      const auto out = dephase_in_product_basis(rho, ba, bb);
      const auto pa = ba.projectors();
      const auto pb = bb.projectors();
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
          const ComplexMatrix4 proj(kron(pa[j], pb[k]));
          CHECK(std::abs((proj * out.matrix()).trace() - (proj * rho.matrix()).trace()) < 1e-12);
          // No coherence survives between this projector and the rest.
          CHECK((proj * out.matrix() * (ComplexMatrix4::Identity() - proj)).norm() < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("mutual_information") {
  CHECK(mutual_information(product_00(), LogBase::Bits) == doctest::Approx(0.0));
  CHECK(mutual_information(bell_state(), LogBase::Bits) == doctest::Approx(2.0));
  CHECK(mutual_information(block_state(1.0), LogBase::Bits) ==
        doctest::Approx(1.20175207338571220).epsilon(1e-12));

  std::mt19937_64 rng(29);
  for (int i = 0; i < 1000; ++i) CHECK(mutual_information(random_state(rng), LogBase::Bits) >= 0.0);
}

TEST_CASE("binary_entropy_sqrt") {
  CHECK(binary_entropy_sqrt(1.0) == doctest::Approx(0.0));
  CHECK(binary_entropy_sqrt(0.0) == doctest::Approx(1.0));
  CHECK(binary_entropy_sqrt(0.5) == doctest::Approx(0.600876036692856101).epsilon(1e-12));
  CHECK_THROWS_AS(binary_entropy_sqrt(-0.01), DomainError);
  CHECK_THROWS_AS(binary_entropy_sqrt(1.5), DomainError);
}
