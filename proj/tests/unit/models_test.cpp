#include "sidesign/models.hpp"

#include <random>

#include <gtest/gtest.h>

#include "sidesign/error.hpp"
#include "unit/oracles.hpp"

namespace sidesign {
namespace {

Eigen::Vector4d example2_theta() { return {4.86e-3, 4.75e-3, -1.84, 0.94}; }

Signal random_signal(std::size_t n, std::vector<double> levels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, levels.size() - 1);
  Signal s;
  for (std::size_t i = 0; i < n; ++i) s.samples.push_back(levels[pick(rng)]);
  s.prefill = {levels[pick(rng)], levels[pick(rng)]};
  return s;
}

double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

TEST(FirModelTest, RegressorRows) {
  const ModelSpec model = ModelSpec::nonlinear_fir(Eigen::Vector4d::Ones(), 1.0);
  const Signal s{{1.0, -1.0, 0.0}, {}};
  const GradientTrace trace = gradient_trace(model, s);
  ASSERT_EQ(trace.steps(), 3u);
  EXPECT_EQ(trace.psi.row(0), Eigen::RowVector4d(1, 0, 1, 0));
  EXPECT_EQ(trace.psi.row(1), Eigen::RowVector4d(-1, 1, 1, 1));
  EXPECT_EQ(trace.psi.row(2), Eigen::RowVector4d(0, -1, 0, 1));
}

TEST(FirModelTest, PrefillSuppliesThePastInput) {
  const ModelSpec model = ModelSpec::nonlinear_fir(Eigen::Vector4d::Ones(), 1.0);
  const Signal s{{0.5}, {2.0}};
  EXPECT_EQ(gradient_trace(model, s).psi.row(0), Eigen::RowVector4d(0.5, 2.0, 0.25, 4.0));
}

TEST(FirModelTest, GradientMatchesFiniteDifferences) {
  Eigen::Vector4d theta(0.3, -1.2, 0.7, 2.0);
  const ModelSpec model = ModelSpec::nonlinear_fir(theta, 1.0);
  const Signal s = random_signal(300, {-1.0, 0.0, 1.0}, 7);
  EXPECT_LT(relative_error(gradient_trace(model, s).psi, oracle::finite_difference_gradient(model, s)),
            1e-5);
}

TEST(OutputErrorModelTest, GradientMatchesFiniteDifferences) {
  const ModelSpec model = ModelSpec::output_error(example2_theta(), 1e-4, 0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Signal s = random_signal(200, {-1.0, 1.0}, seed);
    const Eigen::MatrixXd psi = gradient_trace(model, s).psi;
    const Eigen::MatrixXd fd = oracle::finite_difference_gradient(model, s);
    EXPECT_LT(relative_error(psi, fd), 1e-6) << "seed " << seed;
  }
}

TEST(OutputErrorModelTest, GradientMatchesFiniteDifferencesAwayFromExample) {
  const ModelSpec model = ModelSpec::output_error(Eigen::Vector4d(0.5, -0.3, -0.6, 0.2), 1.0, 0);
  const Signal s = random_signal(150, {-2.0, 0.5, 1.0}, 11);
  EXPECT_LT(relative_error(gradient_trace(model, s).psi, oracle::finite_difference_gradient(model, s)),
            1e-5);
}

TEST(OutputErrorModelTest, BurnInDropsLeadingRows) {
  const Signal s = random_signal(50, {-1.0, 1.0}, 5);
  const ModelSpec full = ModelSpec::output_error(example2_theta(), 1.0, 0);
  const ModelSpec trimmed = ModelSpec::output_error(example2_theta(), 1.0, 20);
  const Eigen::MatrixXd a = gradient_trace(full, s).psi;
  const Eigen::MatrixXd b = gradient_trace(trimmed, s).psi;
  ASSERT_EQ(b.rows(), 30);
  EXPECT_EQ(b, a.bottomRows(30));
  const ModelSpec too_long = ModelSpec::output_error(example2_theta(), 1.0, 50);
  EXPECT_THROW(gradient_trace(too_long, s), Error);
}

TEST(OutputErrorModelTest, ImpulseResponse) {
  // y_t = b1 u_{t-1} + b2 u_{t-2} - a1 y_{t-1} - a2 y_{t-2}
  const Eigen::Vector4d th(1.0, 0.5, -0.5, 0.25);
  const ModelSpec model = ModelSpec::output_error(th, 1.0, 0);
  const Signal s{{1.0, 0.0, 0.0, 0.0}, {}};
  const Eigen::VectorXd y = predict(model, s, th);
  EXPECT_DOUBLE_EQ(y[0], 0.0);
  EXPECT_DOUBLE_EQ(y[1], 1.0);
  EXPECT_DOUBLE_EQ(y[2], 0.5 + 0.5 * 1.0);
  EXPECT_DOUBLE_EQ(y[3], 0.5 * 1.0 - 0.25 * 1.0);
}

TEST(ModelTest, FiniteMemoryShiftInvariance) {
  const ModelSpec model = ModelSpec::nonlinear_fir(Eigen::Vector4d(1, 2, 3, 4), 1.0);
  const Signal s = random_signal(40, {-1.0, 0.0, 1.0}, 3);
  Signal shifted;
  shifted.prefill = {s.at(5)};
  shifted.samples.assign(s.samples.begin() + 5, s.samples.end());
  const Eigen::MatrixXd a = gradient_trace(model, s).psi;
  const Eigen::MatrixXd b = gradient_trace(model, shifted).psi;
  EXPECT_EQ(b, a.bottomRows(b.rows()));
}

TEST(ModelTest, StabilityRegion) {
  EXPECT_TRUE(is_stable_denominator(-1.84, 0.94));
  EXPECT_TRUE(is_stable_denominator(0.0, 0.0));
  EXPECT_FALSE(is_stable_denominator(-2.0, 1.0));
  EXPECT_FALSE(is_stable_denominator(0.0, 1.0));
  EXPECT_FALSE(is_stable_denominator(1.5, 0.4));
  try {
    ModelSpec::output_error(Eigen::Vector4d(1, 1, -2.1, 1.2), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kModel);
  }
}

TEST(ModelTest, ConfigErrors) {
  EXPECT_THROW(ModelSpec::nonlinear_fir(Eigen::Vector3d::Ones(), 1.0), Error);
  EXPECT_THROW(ModelSpec::nonlinear_fir(Eigen::Vector4d::Ones(), 0.0), Error);
  EXPECT_THROW(ModelSpec::nonlinear_fir(Eigen::Vector4d::Ones(), -1.0), Error);
  EXPECT_THROW(parse_model_kind("armax"), Error);
  EXPECT_EQ(parse_model_kind("output-error-2-2"), ModelKind::kOutputError22);
  const ModelSpec model = ModelSpec::nonlinear_fir(Eigen::Vector4d::Ones(), 1.0);
  EXPECT_THROW(gradient_trace(model, Signal{}), Error);
}

TEST(ModelTest, NonFiniteInputIsReported) {
  const ModelSpec model = ModelSpec::nonlinear_fir(Eigen::Vector4d::Ones(), 1.0);
  const Signal s{{1.0, std::numeric_limits<double>::infinity(), 1.0}, {}};
  try {
    gradient_trace(model, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumerical);
    EXPECT_NE(std::string(e.what()).find("time index 2"), std::string::npos);
  }
}

TEST(ModelTest, Memory) {
  EXPECT_EQ(model_memory(ModelSpec::nonlinear_fir(Eigen::Vector4d::Ones(), 1.0)), 2u);
  EXPECT_FALSE(model_memory(ModelSpec::output_error(example2_theta(), 1.0)).has_value());
}

class GainModel : public ExternalModel {
 public:
  std::size_t parameter_count() const override { return 1; }
  ModelMemory memory() const override { return 1; }
  Eigen::MatrixXd gradient(const Signal& s, const Eigen::VectorXd&) const override {
    Eigen::MatrixXd g(static_cast<Eigen::Index>(s.size()), 1);
    for (std::size_t t = 0; t < s.size(); ++t) g(static_cast<Eigen::Index>(t), 0) = s.samples[t];
    return g;
  }
  Eigen::VectorXd predict(const Signal& s, const Eigen::VectorXd& th) const override {
    return th[0] * Eigen::Map<const Eigen::VectorXd>(s.samples.data(),
                                                      static_cast<Eigen::Index>(s.size()));
  }
};

TEST(ExternalModelTest, GradientAndMemory) {
  const ModelSpec model =
      ModelSpec::from_external(std::make_shared<GainModel>(), Eigen::VectorXd::Constant(1, 2.0), 1.0);
  EXPECT_EQ(model_memory(model), 1u);
  const Signal s = random_signal(30, {-1.0, 1.0}, 9);
  EXPECT_LT(relative_error(gradient_trace(model, s).psi, oracle::finite_difference_gradient(model, s)),
            1e-9);
  EXPECT_THROW(ModelSpec::from_external(std::make_shared<GainModel>(), Eigen::Vector2d::Ones(), 1.0),
               Error);
}

}  // namespace
}  // namespace sidesign
