#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qland/errors.hpp"
#include "qland/losses.hpp"
#include "qland/samples.hpp"

using namespace qland;

TEST(Samples, SeparableIsRankOneWithZeroEntropy) {
  Rng rng(1);
  const TrainingSample s = make_separable(4, rng);
  EXPECT_EQ(s.kind, SampleKind::separable);
  EXPECT_EQ(schmidt_rank(s), 1u);
  EXPECT_NEAR(entanglement_entropy(s), 0.0, 1e-12);
  const UnitaryMatrix u = haar_random_unitary(4, rng);
  EXPECT_NEAR(sample_loss(u, u, s).loss, 0.0, 1e-12);
}

TEST(Samples, SeparableFromFactorsMatchesKron) {
  Rng rng(2);
  const CVector a = haar_random_vector(2, rng);
  const CVector b = haar_random_vector(3, rng);
  const TrainingSample s = make_separable(a, b);
  EXPECT_LT((s.state.amplitudes() - oracle::kron(a, b)).norm(), 1e-14);
  EXPECT_THROW(make_separable(CVector(a * 2.0), b), InvariantError);
}

TEST(Samples, MaxEntangledHasFlatSpectrum) {
  for (std::size_t d : {2u, 4u, 8u}) {
    const TrainingSample s = make_max_entangled(d);
    EXPECT_EQ(s.kind, SampleKind::max_entangled);
    EXPECT_EQ(schmidt_rank(s), d);
    for (double c : s.schmidt.coefficients) EXPECT_NEAR(c, 1.0 / std::sqrt(double(d)), 1e-12);
    EXPECT_NEAR(entanglement_entropy(s), std::log(double(d)), 1e-12);
    // (1/sqrt d) sum_j |j>|j>
    CVector expected = CVector::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t j = 0; j < d; ++j) expected(static_cast<Eigen::Index>(j * d + j)) = 1.0 / std::sqrt(double(d));
    EXPECT_LT((s.state.amplitudes() - expected).norm(), 1e-14);
  }
}

TEST(Samples, MaxEntangledWithCustomBasis) {
  Rng rng(3);
  const CMatrix bx = haar_random_unitary(3, rng).matrix();
  const CMatrix by = haar_random_unitary(3, rng).matrix();
  const TrainingSample s = make_max_entangled(3, std::pair{bx, by});
  EXPECT_EQ(s.kind, SampleKind::max_entangled);
  CMatrix bad = bx;
  bad(0, 0) += 0.1;
  EXPECT_THROW(make_max_entangled(3, std::pair{bad, by}), InvariantError);
}

TEST(Samples, NmeValidation) {
  EXPECT_THROW(make_nme({0.5, 0.6}, 4), DomainError);
  EXPECT_THROW(make_nme({1.2, -0.2}, 4), DomainError);
  EXPECT_THROW(make_nme({0.2, 0.2, 0.2, 0.2, 0.2}, 4), DomainError);
  const TrainingSample s = make_nme({0.5, 0.25, 0.25}, 4);
  EXPECT_EQ(s.kind, SampleKind::nme);
  EXPECT_EQ(schmidt_rank(s), 3u);
  const double e = -(0.5 * std::log(0.5) + 2 * 0.25 * std::log(0.25));
  EXPECT_NEAR(entanglement_entropy(s), e, 1e-12);
  EXPECT_GT(entanglement_entropy(s), 0.0);
  EXPECT_LT(entanglement_entropy(s), std::log(4.0));
}

TEST(Samples, NmeWithRandomBasesKeepsSpectrum) {
  Rng rng(4);
  const std::vector<double> w = {0.4, 0.3, 0.2, 0.1};
  const TrainingSample s = make_nme(w, 4, std::pair{haar_random_unitary(4, rng).matrix(),
                                                    haar_random_unitary(4, rng).matrix()});
  const auto got = s.schmidt.weights();
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(got[i], w[i], 1e-12);
}

TEST(Samples, FamiliesAreDistinctAndNormalised) {
  const auto fam = nme_families(8);
  EXPECT_EQ(fam.size(), 29u);
  std::set<std::string> labels;
  for (const auto& m : fam) {
    labels.insert(m.label);
    double total = 0;
    for (double c : m.weights) total += c;
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_EQ(schmidt_rank(make_nme(m.weights, 8)), m.rank);
  }
  EXPECT_EQ(labels.size(), fam.size());
  EXPECT_TRUE(labels.count("separable"));
  EXPECT_TRUE(labels.count("max_entangled"));
}

TEST(Samples, JsonRoundTrip) {
  const TrainingSample s = make_nme({0.7, 0.3}, 2);
  const TrainingSample back = sample_from_json(to_json(s));
  EXPECT_EQ(back.kind, s.kind);
  EXPECT_EQ(back.label, s.label);
  EXPECT_LT((back.state.amplitudes() - s.state.amplitudes()).norm(), 1e-15);
}

TEST(Samples, ClassifyArbitraryState) {
  const TrainingSample s = make_sample(StateVector::basis(3, 3, 4));
  EXPECT_EQ(s.kind, SampleKind::separable);
  EXPECT_EQ(s.label, "separable");
}
