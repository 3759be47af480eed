#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "pnn/lines.hpp"

using namespace pnn;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("canonicalize_vector follows the largest nonzero index") {
  const Vector a = vec({-1, 2, 0, 3, 0});
  const auto ca = canonicalize_vector(a);
  CHECK(ca.sign == 1);
  CHECK((ca.unit - a / a.norm()).norm() < 1e-15);

  const Vector b = vec({-1, 2, 0, 0, -3});
  const auto cb = canonicalize_vector(b);
  CHECK(cb.sign == -1);
  CHECK((cb.unit + b / b.norm()).norm() < 1e-15);

  const auto e1 = canonicalize_vector(Vector::Unit(3, 0));
  CHECK(e1.sign == 1);
  CHECK(e1.unit == Vector::Unit(3, 0));

  CHECK(kind_of([] { canonicalize_vector(Vector::Zero(3)); }) == ErrorKind::ZeroVector);
  CHECK(kind_of([] { canonicalize_vector(Vector::Constant(3, 1e-14)); }) == ErrorKind::ZeroVector);
}

TEST_CASE("canonicalize_vector is idempotent") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto once = canonicalize_vector(gaussian_vector(rng, 6));
    const auto twice = canonicalize_vector(once.unit);
    CHECK(twice.sign == 1);
    CHECK((twice.unit - once.unit).norm() < 1e-15);
  }
}

TEST_CASE("orientation_sign ignores tiny trailing entries") {
  CHECK(orientation_sign(vec({1, -2, 1e-20})) == -1);
  CHECK(orientation_sign(vec({0, 0, 0})) == 1);
}

TEST_CASE("line set from orthogonal axes") {
  const LineSet s = LineSet::from_vectors(Matrix::Identity(2, 2));
  CHECK(s.gram().isApprox(Matrix::Identity(2, 2)));
  CHECK(s.angles()(0, 1) == doctest::Approx(std::numbers::pi / 2));
  CHECK(s.angles()(0, 0) == 0.0);
}

TEST_CASE("opposite vectors are the same line") {
  Matrix raw(2, 2);
  raw << 1, -1, 0, 0;
  CHECK(kind_of([&] { LineSet::from_vectors(raw); }) == ErrorKind::DuplicateLine);
  raw << 1, 0, 0, 0;
  CHECK(kind_of([&] { LineSet::from_vectors(raw); }) == ErrorKind::ZeroVector);
}

TEST_CASE("45 degree pair") {
  Matrix raw(2, 2);
  raw << 1, 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
  const LineSet s = LineSet::from_vectors(raw);
  CHECK(s.gram()(0, 1) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s.angles()(0, 1) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
}

TEST_CASE("line set invariants on random sets") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LineSet s = random_line_set(2 + static_cast<Eigen::Index>(seed % 7), 3 + static_cast<Eigen::Index>(seed), seed);
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      CHECK(std::abs(s.line(j).norm() - 1.0) <= 1e-12);
      CHECK(orientation_sign(s.line(j)) == 1);
    }
    CHECK(s.gram() == s.gram().transpose());
    CHECK(s.gram().diagonal().isOnes(0));
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        CHECK(s.angles()(i, j) >= 0.0);
        CHECK(s.angles()(i, j) <= std::numbers::pi);
        CHECK(std::abs(std::cos(s.angles()(i, j)) - s.gram()(i, j)) <= 1e-12);
        if (i != j) CHECK(std::abs(s.gram()(i, j)) < 1.0 - kCollinearityTol);
      }
    }
    CHECK(oracle::eigenvalue_bisect(s.gram(), 0) >= -1e-10L);
  }
}

TEST_CASE("cross_gram") {
  const LineSet a = random_line_set(5, 4, 3);
  const LineSet b = random_line_set(5, 3, 4);
  CHECK((cross_gram(a, a) - a.gram()).cwiseAbs().maxCoeff() < 1e-15);
  const Matrix c = cross_gram(a, b);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      double dot = 0.0;
      for (Eigen::Index t = 0; t < 5; ++t) dot += a.unit_vectors()(t, i) * b.unit_vectors()(t, j);
      CHECK(c(i, j) == doctest::Approx(dot).epsilon(1e-14));
      CHECK(c(i, j) == doctest::Approx(std::cos(oracle::line_angle(a.line(i), b.line(j)))).epsilon(1e-12));
    }
  }
  CHECK(cross_gram(b, a) == c.transpose());
  const LineSet e1 = LineSet::from_vectors(Matrix(Vector::Unit(2, 0)));
  const LineSet e2 = LineSet::from_vectors(Matrix(Vector::Unit(2, 1)));
  CHECK(cross_gram(e1, e2)(0, 0) == 0.0);
  CHECK(kind_of([&] { cross_gram(a, e1); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("random_line_set is deterministic and nested") {
  const LineSet a = random_line_set(3, 5, 7);
  const LineSet b = random_line_set(3, 5, 7);
  CHECK(a.unit_vectors() == b.unit_vectors());
  const LineSet big = random_line_set(3, 9, 7);
  CHECK(big.unit_vectors().leftCols(5) == a.unit_vectors());
  CHECK(random_line_set(3, 5, 8).unit_vectors() != a.unit_vectors());
  CHECK(kind_of([] { random_line_set(0, 3, 1); }) == ErrorKind::ParameterOutOfRange);
  CHECK(kind_of([] { random_line_set(1, 2, 1); }) == ErrorKind::TooManyCollisions);
}

TEST_CASE("random 2-D lines: acute angle between independent lines is uniform") {
  std::vector<double> angles;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const LineSet s = random_line_set(2, 2000, 1000 + seed);
    for (Eigen::Index i = 0; i + 1 < s.size(); i += 2) {
      const double t = s.angles()(i, i + 1);
      angles.push_back(std::min(t, std::numbers::pi - t));
    }
  }
  const double n = static_cast<double>(angles.size());
  // 0.1% critical value of the one-sample KS statistic
  CHECK(oracle::ks_uniform(angles, 0.0, std::numbers::pi / 2) < 1.95 / std::sqrt(n));
}

TEST_CASE("random lines in d=200: Gram concentration") {
  const Eigen::Index d = 200;
  const LineSet s = random_line_set(d, 200, 5);
  double sum = 0.0;
  double sq = 0.0;
  double count = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    for (Eigen::Index j = i + 1; j < s.size(); ++j) {
      sum += s.gram()(i, j);
      sq += s.gram()(i, j) * s.gram()(i, j);
      count += 1.0;
    }
  }
  const double mean = sum / count;
  const double sd = std::sqrt(sq / count - mean * mean);
  // Entries are only pairwise independent; allow a loose band.
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(d)) / std::sqrt(200.0));
  CHECK(sd == doctest::Approx(1.0 / std::sqrt(static_cast<double>(d))).epsilon(0.05));
}

TEST_CASE("neuron line map") {
  const NeuronLineMap m = NeuronLineMap::blocks(6, 3);
  CHECK(m.line_of(0) == 0);
  CHECK(m.line_of(5) == 2);
  CHECK(m.neurons_on(1) == std::vector<Eigen::Index>{2, 3});
  CHECK(kind_of([] { NeuronLineMap({0, 0, 2}, 3); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { NeuronLineMap({0, 3}, 3); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { NeuronLineMap::blocks(5, 3); }) == ErrorKind::ConfigError);
  CHECK(NeuronLineMap::identity(4) == NeuronLineMap({0, 1, 2, 3}, 4));
}

TEST_CASE("decompose_weights: two neurons on one line") {
  const auto cfg = make_config(LineSet::from_vectors(Matrix(Vector::Unit(3, 1))), NeuronLineMap({0, 0}, 1));
  Matrix w(3, 2);
  w.col(0) = 2 * Vector::Unit(3, 1);
  w.col(1) = -3 * Vector::Unit(3, 1);
  const auto dec = decompose_weights(PNNWeights(cfg, w));
  CHECK(dec.q(0) == 5.0);
  CHECK(dec.signature.signs[0] == std::vector<int>{1, -1});
  CHECK(dec.signature.summary[0] == LineSign::Mixed);
}

TEST_CASE("decompose_weights on random feasible weights") {
  const auto cfg = make_config(random_line_set(4, 3, 2), NeuronLineMap({0, 1, 2, 0, 1, 2}, 3));
  Rng rng(9);
  const Vector t = gaussian_vector(rng, 6);
  const PNNWeights w = PNNWeights::from_coordinates(cfg, t);
  const auto dec = decompose_weights(w);
  for (Eigen::Index l = 0; l < 3; ++l) {
    double mass = 0.0;
    for (Eigen::Index i = 0; i < 6; ++i) {
      if (i % 3 == l) mass += std::sqrt(w.matrix().col(i).squaredNorm());
    }
    CHECK(dec.q(l) == doctest::Approx(mass).epsilon(1e-14));
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(dec.signature.signs[static_cast<std::size_t>(l)][j] == (t(l + 3 * static_cast<Eigen::Index>(j)) > 0 ? 1 : -1));
    }
  }
  CHECK(w.coordinates().isApprox(t, 1e-14));

  // permuting neurons within a line leaves q unchanged
  Matrix swapped = w.matrix();
  swapped.col(0).swap(swapped.col(3));
  CHECK((decompose_weights(PNNWeights(cfg, swapped)).q - dec.q).norm() < 1e-15);
}

TEST_CASE("W = W* gives q = q*") {
  const auto cfg = make_config(random_line_set(5, 2, 1), NeuronLineMap::blocks(4, 2));
  Rng rng(3);
  const PNNWeights w = PNNWeights::from_coordinates(cfg, gaussian_vector(rng, 4));
  const PNNWeights w2(cfg, w.matrix());
  CHECK(decompose_weights(w).q == decompose_weights(w2).q);
}

TEST_CASE("infeasible and zero columns") {
  const auto cfg = make_config(axis_line_set(2), NeuronLineMap::identity(2));
  Matrix w(2, 2);
  w << 1, 0, 1e-3, 1;
  CHECK(kind_of([&] { PNNWeights(cfg, w); }) == ErrorKind::InfeasibleWeights);
  w << -1, 0, 0, 0;
  const auto dec = decompose_weights(PNNWeights(cfg, w));
  CHECK(dec.q(1) == 0.0);
  CHECK(dec.signature.zero[1][0]);
  CHECK(dec.signature.signs[1][0] == 1);
  CHECK(dec.signature.summary[0] == LineSign::AllMinus);
  CHECK(dec.signature.summary[1] == LineSign::AllPlus);
  CHECK(kind_of([&] { PNNWeights(cfg, Matrix::Zero(3, 2)); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("signature zero columns are excluded from summaries") {
  const NeuronLineMap m({0, 0, 0}, 1);
  const auto sig = make_signature(m, {1, -1, -1}, {true, false, false});
  CHECK(sig.summary[0] == LineSign::AllMinus);
  CHECK(sig.mixed_count() == 0);
  CHECK(sig.all_lines_single_sign());
}

TEST_CASE("with_line, subset, find_collinear") {
  const LineSet s = random_line_set(4, 3, 21);
  CHECK(s.find_collinear(-2.5 * s.line(1)) == 1);
  CHECK(s.find_collinear(Vector::Ones(4)) == -1);
  const LineSet sub = s.subset({2, 0});
  CHECK(sub.line(0) == s.line(2));
  const LineSet more = s.with_line(-Vector::Ones(4));
  CHECK(more.size() == 4);
  CHECK((more.line(3) - Vector::Ones(4) / 2.0).norm() < 1e-15);
  CHECK(kind_of([&] { s.with_line(s.line(0)); }) == ErrorKind::DuplicateLine);
}

TEST_CASE("from_units keeps bits and validates") {
  const LineSet s = random_line_set(3, 4, 2);
  CHECK(LineSet::from_units(s.unit_vectors()).unit_vectors() == s.unit_vectors());
  CHECK(kind_of([&] { LineSet::from_units(-s.unit_vectors()); }) == ErrorKind::DomainError);
  CHECK(kind_of([&] { LineSet::from_units(2.0 * s.unit_vectors()); }) == ErrorKind::DomainError);
}
