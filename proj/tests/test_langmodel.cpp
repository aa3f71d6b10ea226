#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "bayesum/langmodel.hpp"

using namespace bayesum;

namespace {

double direct_kl(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) s += p[i] * std::log(p[i] / q[i]);
    }
    return s;
}

UnigramModel random_model(std::mt19937_64& rng, std::size_t V, double zero_rate) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(V);
    double t = 0.0;
    for (auto& v : x) {
        v = u(rng) < zero_rate ? 0.0 : u(rng);
        t += v;
    }
    if (t == 0.0) x[0] = t = 1.0;
    for (auto& v : x) v /= t;
    return UnigramModel(x);
}

}  // namespace

TEST_CASE("mle") {
    const CountVector ab{{0, 2.0}, {1, 2.0}};
    const auto p = mle(ab, 2);
    CHECK(p[0] == 0.5);
    CHECK(p[1] == 0.5);
    CHECK(mle(CountVector{{0, 3.0}, {1, 1.0}}, 2)[0] == 0.75);
    CHECK_THROWS_WITH(mle(CountVector{}, 2), "empty model");
    CHECK_THROWS_AS(mle(CountVector{{5, 1.0}}, 2), std::invalid_argument);
}

TEST_CASE("smoothing") {
    const auto bg = UnigramModel::uniform(2);
    CHECK_THROWS_AS(smooth(bg, bg, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(smooth(bg, bg, 1.0), std::invalid_argument);
    CHECK(smooth(bg, bg, 0.5) == bg);
    const auto s = smooth(UnigramModel({1.0, 0.0}), bg, 0.5);
    CHECK(s[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(s[1] == doctest::Approx(0.25).epsilon(1e-15));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        const auto m = smooth(random_model(rng, 20, 0.5), background_model(std::vector<double>(20, 1.0)), 0.3);
        double total = 0.0;
        for (double v : m.probs()) total += v;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("kl divergence values") {
    const UnigramModel p({0.5, 0.5});
    const UnigramModel q({0.25, 0.75});
    const double oracle = direct_kl({0.5, 0.5}, {0.25, 0.75});
    CHECK(std::abs(oracle - 0.14384) < 1e-5);
    CHECK(std::abs(kl_divergence(p, q) - oracle) < 1e-6);
    CHECK(std::abs(kl_divergence(UnigramModel({1.0, 0.0}), p) - std::log(2.0)) < 1e-6);
    CHECK(kl_divergence(q, q) == 0.0);
    CHECK_THROWS_WITH(kl_divergence(p, UnigramModel({1.0, 0.0})), "q has zero mass where p is positive");
}

TEST_CASE("kl non-negative on random smoothed pairs") {
    std::mt19937_64 rng(11);
    const auto bg = background_model(std::vector<double>(15, 1.0));
    for (int i = 0; i < 10000; ++i) {
        const auto p = smooth(random_model(rng, 15, 0.4), bg, 0.1);
        const auto q = smooth(random_model(rng, 15, 0.4), bg, 0.1);
        const double d = kl_divergence(p, q);
        CHECK(d >= 0.0);
        CHECK(kl_divergence(p, p) == 0.0);
        double max_gap = 0.0;
        for (std::size_t w = 0; w < 15; ++w) max_gap = std::max(max_gap, std::abs(p[w] - q[w]));
        if (max_gap >= 1e-12) CHECK(d > 0.0);
    }
}

TEST_CASE("dirichlet log density") {
    CHECK(dirichlet_log_density(std::vector<double>{0.3, 0.7}, std::vector<double>{1.0, 1.0}) == doctest::Approx(0.0));
    CHECK(dirichlet_log_density(std::vector<double>{0.2, 0.3, 0.5}, std::vector<double>{1.0, 1.0, 1.0}) ==
          doctest::Approx(std::log(2.0)));
    CHECK(dirichlet_log_density(std::vector<double>{0.5, 0.5}, std::vector<double>{2.0, 1.0}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS(dirichlet_log_density(std::vector<double>{0.0, 1.0}, std::vector<double>{0.5, 1.0}));
    CHECK(dirichlet_log_density(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 1.0}) == doctest::Approx(0.0));
    CHECK(std::isinf(dirichlet_log_density(std::vector<double>{0.0, 1.0}, std::vector<double>{2.0, 1.0})));

    // midpoint rule over the 2-simplex integrates the density to one
    const std::vector<double> alpha{1.5, 2.0, 3.0};
    const int n = 400;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = (i + 0.5) / n;
            const double b = (j + 0.5) / n;
            if (a + b >= 1.0) continue;
            mass += std::exp(dirichlet_log_density(std::vector<double>{a, b, 1.0 - a - b}, alpha)) / (n * n);
        }
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("background model and tsv round trip") {
    const auto bg = background_model(std::vector<double>{3.0, 0.0, 1.0});
    CHECK(bg[1] > 0.0);
    CHECK(bg[0] == doctest::Approx(0.75));
    CHECK(background_model(std::vector<double>{0.0, 0.0}) == UnigramModel::uniform(2));
    const UnigramModel m({0.125, 0.0, 0.875});
    CHECK(parse_model_tsv(format_model_tsv(m), 3) == m);
    CHECK(total_variation(m, UnigramModel({0.125, 0.875, 0.0})) == doctest::Approx(0.875));
}
