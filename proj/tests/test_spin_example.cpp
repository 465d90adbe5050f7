#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eventclock/detector.hpp"
#include "eventclock/repeated.hpp"
#include "eventclock/spin_example.hpp"

using namespace eventclock;
using std::numbers::pi;

TEST(SpinConfig, Validation) {
    spin::SpinExampleConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.a = {0.5, 0.0};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.T = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.delta = -1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(SpinConfig, CouplingConventions) {
    spin::SpinExampleConfig cfg;
    cfg.T = 2.0;
    EXPECT_DOUBLE_EQ(spin::coupling(cfg), pi / 2.0);
    cfg.g_convention = spin::GConvention::flip_at_T;
    EXPECT_DOUBLE_EQ(spin::coupling(cfg), pi / 8.0);
}

TEST(SpinModel, StructureOfBuiltModel) {
    spin::SpinExampleConfig cfg;
    cfg.a = {0.0, 0.6};
    cfg.b = {0.8, 0.0};
    const spin::SpinModel model = spin::build(cfg);
    EXPECT_EQ(model.psi0.dim(), 4u);
    // (a|up> + b|down>) (x) |up'>
    EXPECT_EQ(model.psi0[0], Complex(0.0, 0.6));
    EXPECT_EQ(model.psi0[2], Complex(0.8, 0.0));
    EXPECT_EQ(model.psi0[1], Complex(0.0, 0.0));
    ASSERT_EQ(model.h.segments().size(), 1u);
    EXPECT_EQ(model.h.segments()[0].t_start, 0.0);
    EXPECT_EQ(model.h.segments()[0].t_end, 1.0);
    // g (1 - sigma_z) (x) sigma_x' couples only |down, up'> and |down, down'>.
    const DenseOperator& h = model.h.segments()[0].generator;
    EXPECT_NEAR(std::abs(h(2, 3) - Complex(2 * pi, 0)), 0.0, 1e-15);
    EXPECT_EQ(h(0, 1), Complex(0, 0));
    EXPECT_EQ(model.spec.pairs, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}}));
}

TEST(SpinModel, FlipAtTRecordsWithCertaintyAtT) {
    spin::SpinExampleConfig cfg;
    cfg.g_convention = spin::GConvention::flip_at_T;
    const spin::SpinModel model = spin::build(cfg);
    const TimeSeries pm = pm_of_t(model.spec, model.h, model.psi0, {0.5, 1.0, 2.0});
    EXPECT_NEAR(pm.values[0], 0.5, 1e-12);
    EXPECT_NEAR(pm.values[1], 1.0, 1e-12);
    EXPECT_NEAR(pm.values[2], 1.0, 1e-12);
}

TEST(AnalyticSurvival, AgreesWithSimulatorWhileCouplingIsOn) {
    // cos^{2k}(2 g delta) holds for k delta <= T; afterwards H = 0 and the
    // simulated survival stays constant.
    for (const auto conv : {spin::GConvention::paper, spin::GConvention::flip_at_T}) {
        spin::SpinExampleConfig cfg;
        cfg.g_convention = conv;
        cfg.delta = 0.05;
        const spin::SpinModel model = spin::build(cfg);
        const DetectionDistribution dist = detection_distribution(model.spec, model.h, model.psi0, {cfg.delta, 20, 0.0});
        for (std::size_t k = 1; k <= 20; ++k)
            EXPECT_NEAR(dist.survival[k - 1], spin::analytic_survival(cfg, k), 1e-10) << k;
    }
}

TEST(AnalyticSurvival, ZenoValues) {
    const double expected[] = {0.0144262313212, 0.673650258258, 0.961290451018};
    const std::size_t ks[] = {10, 100, 1000};
    for (int i = 0; i < 3; ++i) {
        spin::SpinExampleConfig cfg;
        cfg.delta = 1.0 / static_cast<double>(ks[i]);
        EXPECT_NEAR(spin::analytic_survival(cfg, ks[i]), expected[i], 1e-11);
    }
}

TEST(AnalyticSurvival, RequiresEmptyUpComponent) {
    spin::SpinExampleConfig cfg;
    cfg.a = {0.6, 0.0};
    cfg.b = {0.8, 0.0};
    EXPECT_THROW(spin::analytic_survival(cfg, 3), std::invalid_argument);
}
