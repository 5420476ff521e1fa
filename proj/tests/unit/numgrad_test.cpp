#include "arvae/numgrad/adam.hpp"
#include "arvae/numgrad/errors.hpp"
#include "arvae/numgrad/params.hpp"
#include "arvae/numgrad/tape.hpp"
#include "primitive_cases.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace arvae {
namespace {

using namespace numgrad;
using testing::max_gradient_error;
using testing::random_tensor;

TEST(Tensor, RejectsMismatchedValueCount)
{
    EXPECT_THROW(Tensor({2, 3}, std::vector<double>(5)), DimensionError);
    EXPECT_THROW(Tensor::matrix({{1, 2}, {3}}), DimensionError);
    EXPECT_THROW(Tensor::vector({1, 2}).item(), DimensionError);
}

TEST(Tensor, MatrixLiteralIsRowMajor)
{
    const Tensor m = Tensor::matrix({{1, 2, 3}, {4, 5, 6}});
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m.cols(), 3u);
    EXPECT_EQ(m.at(1, 0), 4.0);
    EXPECT_EQ(m[5], 6.0);
}

TEST(MatMul, IdentityAndOrthogonalRows)
{
    Tape tape;
    Var eye = tape.constant(Tensor::matrix({{1, 0}, {0, 1}}));
    Var a = tape.constant(Tensor::matrix({{1, 2}, {3, 4}}));
    EXPECT_EQ(matmul(eye, a).value(), a.value());
    Var r = tape.constant(Tensor::matrix({{1, 0}}));
    Var c = tape.constant(Tensor::matrix({{0}, {1}}));
    EXPECT_EQ(matmul(r, c).value(), Tensor::matrix({{0}}));
}

TEST(MatMul, MatchesTripleLoop)
{
    SeededRng rng(3);
    const Tensor a = random_tensor({3, 4}, rng);
    const Tensor b = random_tensor({4, 2}, rng);
    Tape tape;
    const Tensor out = matmul(tape.constant(a), tape.constant(b)).value();
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 4; ++k) s += a.at(i, k) * b.at(k, j);
            EXPECT_NEAR(out.at(i, j), s, 1e-12);
        }
    }
}

TEST(MatMul, ShapeMismatchThrows)
{
    Tape tape;
    EXPECT_THROW(matmul(tape.constant(Tensor({2, 3})), tape.constant(Tensor({2, 3}))), DimensionError);
    EXPECT_THROW(tape.constant(Tensor({2, 3})) + tape.constant(Tensor({3, 2})), DimensionError);
}

TEST(Elementwise, FixedPoints)
{
    Tape tape;
    EXPECT_EQ(tanh(tape.constant(Tensor::scalar(0.0))).value().item(), 0.0);
    EXPECT_EQ(relu(tape.constant(Tensor::scalar(-3.0))).value().item(), 0.0);
    EXPECT_EQ(sigmoid(tape.constant(Tensor::scalar(0.0))).value().item(), 0.5);
    EXPECT_THROW(log(tape.constant(Tensor::scalar(0.0))), DomainError);
}

TEST(Elementwise, TanhDerivativeMatchesCentralDifference)
{
    Tape tape;
    Var x = tape.leaf(Tensor::scalar(0.7));
    tape.backward(tanh(x));
    const double h = 1e-5;
    const double numeric = (std::tanh(0.7 + h) - std::tanh(0.7 - h)) / (2 * h);
    EXPECT_NEAR(tape.grad(x).item(), numeric, 1e-8);
}

TEST(Reductions, MeanAndSum)
{
    Tape tape;
    EXPECT_EQ(mean(tape.constant(Tensor::vector({1, 2, 3}))).value().item(), 2.0);
    EXPECT_EQ(sum(tape.constant(Tensor({4, 5}))).value().item(), 0.0);
}

TEST(Reductions, AxisMeanMatchesLoop)
{
    SeededRng rng(5);
    const Tensor x = random_tensor({2, 3}, rng);
    Tape tape;
    const Tensor m0 = tape.mean(tape.constant(x), 0).value();
    const Tensor s1 = tape.sum(tape.constant(x), 1).value();
    ASSERT_EQ(m0.size(), 3u);
    ASSERT_EQ(s1.size(), 2u);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(m0[j], (x.at(0, j) + x.at(1, j)) / 2.0, 1e-12);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(s1[i], x.at(i, 0) + x.at(i, 1) + x.at(i, 2), 1e-12);
    EXPECT_THROW(tape.sum(tape.constant(x), 2), DimensionError);
}

TEST(GaussianSample, VanishingVarianceReturnsMean)
{
    Tape tape;
    SeededRng rng(1);
    Var mu = tape.constant(Tensor::vector({0.0, 5.0}));
    Var lv = tape.constant(Tensor::vector({-40.0, -40.0}));
    const Tensor z = tape.gaussian_sample(mu, lv, rng).value();
    EXPECT_NEAR(z[0], 0.0, 1e-8);
    EXPECT_NEAR(z[1], 5.0, 1e-8);
}

TEST(GaussianSample, EmpiricalMean)
{
    const std::size_t n = 100000;
    Tape tape;
    SeededRng rng(11);
    Var mu = tape.constant(Tensor({n}, 1.0));
    Var lv = tape.constant(Tensor({n}, 0.0));
    const Tensor z = tape.gaussian_sample(mu, lv, rng).value();
    double s = 0.0;
    for (double v : z.values()) s += v;
    EXPECT_NEAR(s / static_cast<double>(n), 1.0, 0.02);
}

TEST(Backward, LinearFunctionalHasUnitGradient)
{
    Tape tape;
    Var w = tape.leaf(Tensor({3, 2}, 0.25));
    tape.backward(sum(w));
    EXPECT_EQ(tape.grad(w), Tensor({3, 2}, 1.0));
}

TEST(Backward, MeanOfSquares)
{
    Tape tape;
    Var w = tape.leaf(Tensor::vector({2.0, -2.0}));
    tape.backward(mean(w * w));
    EXPECT_EQ(tape.grad(w), Tensor::vector({2.0, -2.0}));
}

TEST(Backward, UnreachableLeafGetsZeros)
{
    Tape tape;
    Var a = tape.leaf(Tensor::vector({1.0, 2.0}));
    Var b = tape.leaf(Tensor::vector({3.0}));
    tape.backward(sum(a));
    EXPECT_EQ(tape.grad(b), Tensor::vector({0.0}));
}

TEST(Backward, NonScalarLossThrows)
{
    Tape tape;
    Var a = tape.leaf(Tensor::vector({1.0, 2.0}));
    EXPECT_THROW(tape.backward(a), ContractError);
}

TEST(Backward, ForeignVariableThrows)
{
    Tape one, two;
    Var a = one.leaf(Tensor::scalar(1.0));
    EXPECT_THROW(two.neg(a), ContractError);
}

class PrimitiveGradient : public ::testing::TestWithParam<const char*> {};

TEST_P(PrimitiveGradient, MatchesFiniteDifferences)
{
    const std::string op = GetParam();
    std::vector<Tensor> inputs;
    testing::LossBuilder build;
    ASSERT_TRUE(testing::primitive_case(op, inputs, build)) << op;
    EXPECT_LT(max_gradient_error(build, inputs), 1e-6) << op;
}

INSTANTIATE_TEST_SUITE_P(AllPrimitives, PrimitiveGradient, ::testing::ValuesIn(testing::kPrimitiveOps));

TEST(Composite, PairwiseDiffSumHasZeroGradient)
{
    Tape tape;
    Var z = tape.leaf(Tensor::vector({-10.0, 10.0, 3.0}));
    tape.backward(sum(tape.pairwise_diff(z)));
    EXPECT_EQ(tape.grad(z), Tensor::vector({0.0, 0.0, 0.0}));
}

TEST(Composite, LogSoftmaxGroupsNormalise)
{
    SeededRng rng(8);
    Tape tape;
    const Tensor out = tape.log_softmax(tape.constant(random_tensor({2, 6}, rng, -4, 4)), 3).value();
    for (std::size_t g = 0; g < 4; ++g) {
        double s = 0.0;
        for (std::size_t k = 0; k < 3; ++k) s += std::exp(out[g * 3 + k]);
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
    EXPECT_THROW(tape.log_softmax(tape.constant(Tensor({2, 5})), 3), DimensionError);
}

TEST(Rng, SameSeedSameStream)
{
    SeededRng a(123), b(123), c(124);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        (void)c.next_u64();
    }
    EXPECT_NE(SeededRng(123).next_u64(), SeededRng(124).next_u64());
    EXPECT_NE(SeededRng::substream(5, 0).next_u64(), SeededRng::substream(5, 1).next_u64());
}

TEST(Rng, UniformIndexStaysInRange)
{
    SeededRng rng(2);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts.at(rng.uniform_index(7));
    for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, NormalMoments)
{
    SeededRng rng(9);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = rng.normal();
        s += v;
        s2 += v * v;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Adam, ZeroGradientKeepsParameters)
{
    ParameterSet p;
    p.add("w", Tensor::vector({1.0, -2.0}));
    Adam adam(p);
    const std::vector<Tensor> g{Tensor::vector({0.0, 0.0})};
    adam.step(p, g);
    EXPECT_EQ(p["w"], Tensor::vector({1.0, -2.0}));
    EXPECT_EQ(adam.first_moment(0), Tensor::vector({0.0, 0.0}));
}

TEST(Adam, FirstStepMovesByLearningRate)
{
    ParameterSet p;
    p.add("w", Tensor::vector({1.0, -2.0, 0.5}));
    Adam adam(p, AdamConfig{0.01});
    const std::vector<Tensor> g{Tensor::vector({3.0, -0.2, 40.0})};
    adam.step(p, g);
    // m_hat = g and v_hat = g^2 after one step, so each move is lr * g / (|g| + eps).
    EXPECT_NEAR(p["w"][0], 1.0 - 0.01, 1e-9);
    EXPECT_NEAR(p["w"][1], -2.0 + 0.01, 1e-9);
    EXPECT_NEAR(p["w"][2], 0.5 - 0.01, 1e-9);
}

TEST(Adam, ConvergesOnQuadratic)
{
    ParameterSet p;
    p.add("w", Tensor::scalar(1.0));
    Adam adam(p, AdamConfig{0.05});
    for (int i = 0; i < 200; ++i) {
        const std::vector<Tensor> g{Tensor::scalar(2.0 * p["w"].item())};
        adam.step(p, g);
    }
    EXPECT_LT(std::fabs(p["w"].item()), 0.05);
}

TEST(Adam, GradientShapeMismatchThrows)
{
    ParameterSet p;
    p.add("w", Tensor::vector({1.0, 2.0}));
    Adam adam(p);
    const std::vector<Tensor> g{Tensor::vector({1.0})};
    EXPECT_THROW(adam.step(p, g), DimensionError);
}

TEST(Parameters, RoundTripIsBitExact)
{
    SeededRng rng(4);
    ParameterSet p;
    p.add("enc.0.weight", random_tensor({3, 2}, rng));
    p.add("enc.0.bias", random_tensor({2}, rng));
    p.add("s", Tensor::scalar(1.0 / 3.0));
    std::stringstream buf;
    write_parameters(buf, p);
    EXPECT_EQ(read_parameters(buf), p);
}

TEST(Parameters, CorruptFilesAreFormatErrors)
{
    ParameterSet p;
    p.add("w", Tensor::vector({1.0, 2.0}));
    std::stringstream buf;
    write_parameters(buf, p);
    const std::string full = buf.str();
    std::stringstream truncated(full.substr(0, full.size() - 3));
    EXPECT_THROW(read_parameters(truncated), FormatError);
    std::stringstream bad("NOT-PARAMS 1\n");
    EXPECT_THROW(read_parameters(bad), FormatError);
    std::stringstream trailing(full + "x");
    EXPECT_THROW(read_parameters(trailing), FormatError);
}

TEST(Parameters, NamesAreValidated)
{
    ParameterSet p;
    p.add("w", Tensor::scalar(1.0));
    EXPECT_THROW(p.add("w", Tensor::scalar(2.0)), ContractError);
    EXPECT_THROW(p.add("a b", Tensor::scalar(2.0)), ContractError);
    EXPECT_THROW(p["missing"], ContractError);
}

} // namespace
} // namespace arvae
