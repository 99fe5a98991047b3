#include "doctest.h"

#include <cmath>

#include "proxy_sa/estimators.hpp"
#include "proxy_sa/gauss_legendre.hpp"
#include "proxy_sa/oracle.hpp"

using namespace proxy_sa;

namespace {

// f = F(x) on uniform(0,1): the 1-D member of the equality family.
ModelSpec identity_cdf_model() {
    CdfProductParams p;
    p.a = Eigen::MatrixXd::Constant(1, 1, 1.0);
    p.b = Eigen::MatrixXd::Constant(1, 1, 0.0);
    p.marginals = {Marginal::uniform(0.0, 1.0)};
    return builtin_cdf_product(p);
}

SampleMatrix prng_samples(const ModelSpec& model, int m, std::uint64_t seed, int replicate = 0) {
    return transform(prng_points(m, model.d, SeedPolicy{seed, replicate}), model.space);
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("output covariance basics") {
    Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(8, 2, 3.25);
    CHECK(output_covariance(constant).matrix().cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd two(2, 1);
    two << 0.0, 2.0;
    CHECK(output_covariance(two).matrix()(0, 0) == doctest::Approx(2.0));

    CHECK_THROWS_AS((void)output_covariance(Eigen::MatrixXd::Zero(1, 1)), InsufficientDataError);
}

TEST_CASE("ishigami output variance matches the closed form at m = 10^6") {
    // Independent closed form: 49/8 + 0.1 pi^4/5 + 0.01 pi^8/18 + 1/2.
    const double expected = 49.0 / 8.0 + 0.1 * std::pow(M_PI, 4) / 5.0 +
                            0.01 * std::pow(M_PI, 8) / 18.0 + 0.5;
    const ModelSpec model = builtin("ishigami");
    const SampleMatrix samples = prng_samples(model, 1000000, 42);
    Eigen::MatrixXd outputs(samples.m(), 1);
    for (int i = 0; i < samples.m(); ++i) {
        outputs.row(i) = model.evaluate_fn(samples.values.row(i).transpose()).transpose();
    }
    CHECK(output_covariance(outputs).trace() == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("weighted outer-product matrix of a zero stack is zero") {
    const ModelSpec model = builtin("ishigami");
    const SampleMatrix samples = prng_samples(model, 64, 7);
    const DerivativeStack stack = partial_stack(model, IndexSubset::of({1, 2}), samples, FDScheme{});
    CHECK(nub_matrix(stack, samples).matrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("1-D f = F(x): estimate close to the 1/12 population value") {
    // Population: (1/2) E[F(1-F)] with E[x(1-x)] = 1/6. Single-term variance
    // is Var(x(1-x)/2) = 1/720, so 3 standard errors at m = 4096 is ~0.0018.
    const ModelSpec model = identity_cdf_model();
    const SampleMatrix samples = prng_samples(model, 4096, 11);
    const DerivativeStack stack = partial_stack(model, IndexSubset::singleton(1), samples, FDScheme{});
    const double est = trace_proxy(nub_matrix(stack, samples));
    const double se = std::sqrt(1.0 / 720.0 / 4096.0);
    CHECK(std::abs(est - 1.0 / 12.0) < 3.0 * se);
}

TEST_CASE("2-D product: population value 1/36 via the brute-force quadrature oracle") {
    // Oracle: a_1^2/12 * E[g_2^2] where E[g_2^2] = int_0^1 t^2 dt by
    // quadrature; expected = 1/36 for a = (1,1), b = (0,0).
    const QuadratureRule rule = gauss_legendre_unit(64);
    double e_g2_sq = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        e_g2_sq += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    const double population = (1.0 / 12.0) * e_g2_sq;
    CHECK(population == doctest::Approx(1.0 / 36.0).epsilon(1e-13));

    const ModelSpec model = builtin("cdf_product");
    const SampleMatrix samples = prng_samples(model, 4096, 5);
    const DerivativeStack stack = partial_stack(model, IndexSubset::singleton(1), samples, FDScheme{});
    const double est = trace_proxy(nub_matrix(stack, samples));
    // Generous noise band: 3 sigma with sigma measured from a replicate run.
    StudyOptions opts;
    opts.sampler = Generator::Prng;
    opts.m = 4096;
    opts.seed = 5;
    opts.replicates = 16;
    opts.order = 1;
    const StudyResult study = replicate_study(model, opts);
    double spread = 0.0;
    for (const ProxyEstimate& e : study.per_subset[0].replicates) {
        spread += (e.trace_value - population) * (e.trace_value - population);
    }
    spread = std::sqrt(spread / 16.0);
    CHECK(std::abs(est - population) < 3.0 * std::max(spread, 1e-4));
}

TEST_CASE("trace and frobenius reductions") {
    CHECK(trace_proxy(CovMatrix::zero(3)) == 0.0);
    CHECK(trace_proxy(CovMatrix(Eigen::MatrixXd::Constant(1, 1, 0.73))) == 0.73);
    Eigen::MatrixXd diag = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
    CHECK(trace_proxy(CovMatrix(diag)) == doctest::Approx(6.0));
    CHECK(frob_proxy(CovMatrix::zero(2)) == 0.0);
    CHECK(frob_proxy(CovMatrix(Eigen::MatrixXd::Identity(3, 3))) == doctest::Approx(std::sqrt(3.0)));
    // 1x1 case: trace and frobenius agree bitwise.
    const CovMatrix scalar(Eigen::MatrixXd::Constant(1, 1, 0.1234567891234));
    CHECK(frob_proxy(scalar) == trace_proxy(scalar));
}

TEST_CASE("normalized proxies and the N = 1 bitwise type equality") {
    const ModelSpec model = identity_cdf_model();
    const SampleMatrix samples = prng_samples(model, 512, 3);
    Eigen::MatrixXd outputs(samples.m(), 1);
    for (int i = 0; i < samples.m(); ++i) {
        outputs.row(i) = model.evaluate_fn(samples.values.row(i).transpose()).transpose();
    }
    const CovMatrix sigma = output_covariance(outputs);
    const DerivativeStack stack = partial_stack(model, IndexSubset::singleton(1), samples, FDScheme{});
    const ProxyEstimate est = make_proxy_estimate(IndexSubset::singleton(1),
                                                  nub_matrix(stack, samples), sigma, 1, 512,
                                                  stack.source);
    CHECK(est.ub_first_type == est.ub_second_type);  // bitwise for N = 1
    CHECK(est.trace_value == doctest::Approx(est.frob_value));

    CHECK_THROWS_AS((void)normalized_proxies(CovMatrix::zero(1), CovMatrix::zero(1), 1),
                    DegenerateModelError);
}

TEST_CASE("every produced matrix is numerically PSD") {
    for (const char* name : {"ishigami", "ishigami_mv", "gsobol_mv"}) {
        const ModelSpec model = builtin(name);
        const SampleMatrix samples = prng_samples(model, 256, 17);
        for (int j = 1; j <= std::min(3, model.d); ++j) {
            const DerivativeStack stack =
                partial_stack(model, IndexSubset::singleton(j), samples, FDScheme{});
            const CovMatrix nub = nub_matrix(stack, samples);
            CHECK(nub.is_psd());
            CHECK(nub.max_symmetry_defect() <= 1e-12);
        }
    }
}

TEST_CASE("unbiasedness: 200 PRNG replicates at m = 64 straddle 1/12") {
    const ModelSpec model = identity_cdf_model();
    const int R = 200, m = 64;
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < R; ++r) {
        const SampleMatrix samples = prng_samples(model, m, 99, r);
        const DerivativeStack stack =
            partial_stack(model, IndexSubset::singleton(1), samples, FDScheme{});
        const double v = trace_proxy(nub_matrix(stack, samples));
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / R;
    const double sd = std::sqrt((sum_sq - R * mean * mean) / (R - 1));
    const double se = sd / std::sqrt(static_cast<double>(R));
    CHECK(std::abs(mean - 1.0 / 12.0) < 3.0 * se);
}

TEST_CASE("first-order functional values") {
    const FDScheme scheme;
    // Constant model -> zero vector.
    const ModelSpec constant = make_model("const", InputSpace::uniform(0, 1, 1), 1,
                                          [](const Eigen::VectorXd&) {
                                              Eigen::VectorXd v(1);
                                              v(0) = 4.0;
                                              return v;
                                          });
    const SampleMatrix inner_c = prng_samples(constant, 512, 1);
    CHECK(std::abs(first_order_functional(constant, 1, 0.5, inner_c, scheme).value(0)) < 1e-9);

    // f = F on uniform(0,1) at x = 0.5: population value 0.
    const ModelSpec id = identity_cdf_model();
    const SampleMatrix inner_id = prng_samples(id, 8192, 21);
    // One-term variance E[(F - 1[.])^2] - 0 = 1/3 - 1/4 + ... ~ 0.083; SE at
    // m = 8192 is ~0.0032.
    CHECK(std::abs(first_order_functional(id, 1, 0.5, inner_id, scheme).value(0)) < 3.0 * 0.0032);

    // Additive model x1 + x2, j = 1, x_1 = 0.75: conditional-expectation
    // oracle gives f_1(x_1) = x_1 - 1/2 = 0.25.
    const ModelSpec additive = make_model("additive2", InputSpace::uniform(0, 1, 2), 1,
                                          [](const Eigen::VectorXd& x) {
                                              Eigen::VectorXd v(1);
                                              v(0) = x(0) + x(1);
                                              return v;
                                          });
    const SampleMatrix inner_a = prng_samples(additive, 8192, 31);
    const double est = first_order_functional(additive, 1, 0.75, inner_a, scheme).value(0);
    // Var of the single term is E[K^2] - (E K)^2 = 0.1458 - 0.0625 = 0.0833.
    const double se = std::sqrt(0.0833 / 8192.0);
    CHECK(std::abs(est - 0.25) < 3.0 * se);
}

TEST_CASE("tief functional values") {
    const FDScheme scheme;
    const ModelSpec ishigami = builtin("ishigami");
    const SampleMatrix inner = prng_samples(ishigami, 1024, 3);
    Eigen::VectorXd x(3);
    x << 0.3, -1.1, 2.2;
    CHECK(tief_functional(ishigami, IndexSubset::of({1, 2}), x, inner, scheme).value(0) == 0.0);

    const ModelSpec additive = make_model("additive2", InputSpace::uniform(0, 1, 2), 1,
                                          [](const Eigen::VectorXd& x2) {
                                              Eigen::VectorXd v(1);
                                              v(0) = x2(0) + x2(1);
                                              return v;
                                          });
    const SampleMatrix inner_a = prng_samples(additive, 8192, 13);
    Eigen::VectorXd xa(2);
    xa << 0.75, 0.4;
    const double est = tief_functional(additive, IndexSubset::singleton(1), xa, inner_a, scheme)
                           .value(0);
    CHECK(std::abs(est - 0.25) < 3.0 * std::sqrt(0.0833 / 8192.0));

    const ModelSpec constant = make_model("const", InputSpace::uniform(0, 1, 2), 1,
                                          [](const Eigen::VectorXd&) {
                                              Eigen::VectorXd v(1);
                                              v(0) = -2.0;
                                              return v;
                                          });
    const SampleMatrix inner_c = prng_samples(constant, 512, 1);
    CHECK(std::abs(tief_functional(constant, IndexSubset::of({1, 2}), xa, inner_c, scheme).value(0)) <
          1e-8);
}

TEST_CASE("anova component values") {
    const FDScheme scheme;
    const ModelSpec additive = make_model("additive2", InputSpace::uniform(0, 1, 2), 1,
                                          [](const Eigen::VectorXd& x) {
                                              Eigen::VectorXd v(1);
                                              v(0) = x(0) + x(1);
                                              return v;
                                          });
    const SampleMatrix inner = prng_samples(additive, 8192, 41);
    Eigen::VectorXd x(2);
    x << 0.75, 0.3;

    // No interaction: the pair component vanishes for every x. The four
    // inner-integral terms share one sample, so cancellation is exact up to
    // FD noise.
    const double pair = anova_component(additive, IndexSubset::of({1, 2}), x, inner, scheme)
                            .value(0);
    CHECK(std::abs(pair) < 1e-6);

    const double single = anova_component(additive, IndexSubset::singleton(1), x, inner, scheme)
                              .value(0);
    CHECK(std::abs(single - 0.25) < 3.0 * std::sqrt(0.0833 / 8192.0));

    const ModelSpec constant = make_model("const", InputSpace::uniform(0, 1, 2), 1,
                                          [](const Eigen::VectorXd&) {
                                              Eigen::VectorXd v(1);
                                              v(0) = 9.0;
                                              return v;
                                          });
    const SampleMatrix inner_c = prng_samples(constant, 256, 2);
    CHECK(std::abs(anova_component(constant, IndexSubset::of({1, 2}), x, inner_c, scheme).value(0)) <
          1e-7);

    const ModelSpec three = make_model("sum3", InputSpace::uniform(0, 1, 3), 1,
                                       [](const Eigen::VectorXd& x3) {
                                           Eigen::VectorXd v(1);
                                           v(0) = x3.sum();
                                           return v;
                                       });
    const SampleMatrix inner3 = prng_samples(three, 64, 4);
    CHECK_THROWS_AS((void)anova_component(three, IndexSubset::of({1, 2, 3}), Eigen::VectorXd::Constant(3, 0.5),
                                          inner3, scheme),
                    ValidationError);
}

TEST_CASE("replicate study aggregates and determinism") {
    const ModelSpec model = builtin("ishigami");
    StudyOptions opts;
    opts.sampler = Generator::Sobol;
    opts.m = 128;
    opts.replicates = 4;
    opts.order = 2;
    const StudyResult a = replicate_study(model, opts);
    const StudyResult b = replicate_study(model, opts);
    REQUIRE(a.per_subset.size() == 6);  // 3 singletons + 3 pairs
    for (std::size_t s = 0; s < a.per_subset.size(); ++s) {
        CHECK(a.per_subset[s].mean_first == b.per_subset[s].mean_first);
        CHECK(a.per_subset[s].std_first == b.per_subset[s].std_first);
        CHECK(a.per_subset[s].replicates.size() == 4);
    }
    // Distinct replicates see distinct sequence blocks.
    CHECK(a.per_subset[0].replicates[0].ub_first_type !=
          a.per_subset[0].replicates[1].ub_first_type);
}

TEST_CASE("zero-interaction subsets are detected at machine scale") {
    const ModelSpec model = builtin("ishigami");
    StudyOptions opts;
    opts.sampler = Generator::Sobol;
    opts.m = 256;
    opts.replicates = 2;
    opts.subsets = std::vector<IndexSubset>{IndexSubset::of({1, 2}), IndexSubset::of({2, 3})};

    opts.derivatives = DerivativeMode::Analytic;
    for (const SubsetAggregate& agg : replicate_study(model, opts).per_subset) {
        CHECK(agg.mean_first <= 1e-12);
    }
    opts.derivatives = DerivativeMode::FiniteDifference;
    for (const SubsetAggregate& agg : replicate_study(model, opts).per_subset) {
        CHECK(agg.mean_first <= 1e-6);
    }
}

TEST_CASE("study rejects invalid inputs") {
    const ModelSpec model = builtin("ishigami");
    StudyOptions opts;
    opts.m = 1;
    CHECK_THROWS_AS((void)replicate_study(model, opts), ValidationError);
    opts.m = 16;
    opts.subsets = std::vector<IndexSubset>{IndexSubset::of({4})};
    CHECK_THROWS_AS((void)replicate_study(model, opts), ValidationError);

    const ModelSpec constant = make_model("const", InputSpace::uniform(0, 1, 2), 1,
                                          [](const Eigen::VectorXd&) {
                                              Eigen::VectorXd v(1);
                                              v(0) = 1.0;
                                              return v;
                                          });
    StudyOptions c_opts;
    c_opts.m = 16;
    c_opts.replicates = 1;
    CHECK_THROWS_AS((void)replicate_study(constant, c_opts), DegenerateModelError);
}

}  // TEST_SUITE
